#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "cli/cli.hpp"
#include "wmwplan/datasets.hpp"

namespace wmwplan::cli {

namespace {

void add_input_options(CLI::App& cmd, RunConfig& config) {
  cmd.add_option("--example", config.example, "Embedded example (seizures, nasal, kidney, albumin, beta55_32)");
  cmd.add_option("--group1", config.group1_path, "First group: one value per line, or value,weight");
  cmd.add_option("--group2", config.group2_path, "Second group, same format as --group1");
  cmd.add_option("--table", config.table_path, "Frequency table: category,count_g1[,count_g2]");
  cmd.add_option("--effect", config.effect,
                 "Second group from the first: scale:q[:floor], shift:delta[:round=k], "
                 "ordshift:frac:up|down:cats=i,j[:levels=K]");
  cmd.add_option("--alpha", config.alpha, "Two-sided type-I error rate");
  cmd.add_option("--power", config.power, "Target power 1 - beta");
  cmd.add_option("--allocation", config.allocation, "balanced | optimal | fixed:<t>");
  cmd.add_option("--grid-size", config.grid_size, "Quantile grid size for beta55_32")->check(CLI::PositiveNumber);
  cmd.add_flag_function(
      "--json", [&config](std::int64_t) { config.format = OutputFormat::json; }, "Write JSON");
}

}  // namespace

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Sample size planning for the Wilcoxon-Mann-Whitney test"};
  app.require_subcommand(1);

  CLI::App* plan_cmd = app.add_subcommand("plan", "Sample size and allocation");
  add_input_options(*plan_cmd, config);

  CLI::App* power_cmd = app.add_subcommand("power", "Monte-Carlo power of the asymptotic WMW test");
  add_input_options(*power_cmd, config);
  power_cmd->add_option("--n1", config.n1, "First group size")->check(CLI::PositiveNumber);
  power_cmd->add_option("--n2", config.n2, "Second group size")->check(CLI::PositiveNumber);
  power_cmd->add_option("--reps", config.replications, "Monte-Carlo replications")->check(CLI::PositiveNumber);
  power_cmd->add_option("--seed", config.seed, "Random seed");
  power_cmd->add_option("--threads", config.threads,
                        "Worker threads (0: $WMWPLAN_THREADS or hardware count)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help_out;
    const int code = app.exit(e, help_out, err);
    out << help_out.str();
    return code;
  }

  try {
    std::string rendered;
    if (plan_cmd->parsed()) {
      config.subcommand = "plan";
      rendered = cmd_plan(config);
    } else {
      config.subcommand = "power";
      rendered = cmd_power(config);
    }
    out << rendered;
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace wmwplan::cli
