#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wmwplan/planning.hpp"
#include "wmwplan/power_sim.hpp"
#include "wmwplan/synthetic.hpp"

namespace wmwplan::cli {

enum class OutputFormat { text, json };

struct RunConfig {
  std::string subcommand;  // "plan" or "power"

  std::optional<std::string> example;
  std::optional<std::string> group1_path;
  std::optional<std::string> group2_path;
  std::optional<std::string> table_path;
  std::optional<std::string> effect;

  std::optional<double> alpha;
  std::optional<double> power;
  std::optional<std::string> allocation;

  std::optional<std::int64_t> n1;
  std::optional<std::int64_t> n2;
  std::int64_t replications = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::size_t grid_size = 100000;
  OutputFormat format = OutputFormat::text;
};

/// Both groups plus the planning defaults that came with them.
struct ResolvedInputs {
  std::string source;
  WeightedSample f1;
  WeightedSample f2;
  PlanInput defaults;
};

/// Ordered-category counts for two groups, read from `category,count_g1,count_g2`.
struct FrequencyTable {
  std::vector<std::string> categories;
  std::vector<double> counts_g1;
  std::vector<double> counts_g2;  // empty for a two-column table
};

/// "balanced", "optimal" or "fixed:<t>".
AllocationPolicy parse_allocation(std::string_view text);
std::string allocation_name(const AllocationPolicy& policy);

/// One value per line, or `value,weight` per line. Blank lines and text after
/// '#' are ignored. Errors name the source and the line number.
WeightedSample read_sample(std::istream& in, const std::string& source);
WeightedSample read_sample_file(const std::string& path);

/// `category,count_g1[,count_g2]`; the first line may be a header.
FrequencyTable read_frequency_table(std::istream& in, const std::string& source);
FrequencyTable read_frequency_table_file(const std::string& path);

/// Applies an effect spec to the first group:
///   scale:<q>[:floor]
///   shift:<delta>[:round=<k>]
///   ordshift:<frac>:up|down:cats=<i,j,...>[:levels=<K>]
/// ordshift treats the values of f1 as category codes 0..K-1; `levels`
/// defaults to ordinal_levels, or the largest code + 1.
WeightedSample apply_effect(const WeightedSample& f1, std::string_view spec,
                            std::optional<std::size_t> ordinal_levels = std::nullopt);

ResolvedInputs resolve_inputs(const RunConfig& config);

PlanInput plan_input_for(const RunConfig& config, const ResolvedInputs& inputs);

std::string cmd_plan(const RunConfig& config);
std::string cmd_power(const RunConfig& config);

/// Full command-line entry point. Writes results to `out` only on success and
/// diagnostics to `err`; returns the process exit code.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wmwplan::cli
