#pragma once

#include <span>
#include <vector>

namespace wmwplan {

/// Ranks of a pooled two-group dataset.
///
/// Overall ranks are midranks over the concatenation g1 ++ g2, within-group
/// ranks are midranks inside each group, and the placement of an observation
/// is the number of observations of the *other* group lying below it (ties
/// counted one half): P = overall rank - within-group rank.
struct RankSummary {
  std::vector<double> overall_ranks_g1;
  std::vector<double> overall_ranks_g2;
  std::vector<double> within_ranks_g1;
  std::vector<double> within_ranks_g2;
  std::vector<double> placements_g1;
  std::vector<double> placements_g2;
};

/// Midranks: rank(v) = #{u < v} + (#{u == v} + 1) / 2.
///
/// Ties are detected by exact equality. Throws std::invalid_argument on an
/// empty input ("empty sample") or a non-finite value.
std::vector<double> midranks(std::span<const double> values);

/// Throws std::invalid_argument if either group is empty.
RankSummary rank_summary(std::span<const double> g1, std::span<const double> g2);

}  // namespace wmwplan
