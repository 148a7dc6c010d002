#include "wmwplan/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wmwplan {

std::vector<double> midranks(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("empty sample");
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in sample");
  }

  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // positions i+1 .. j share their average
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

RankSummary rank_summary(std::span<const double> g1, std::span<const double> g2) {
  if (g1.empty() || g2.empty()) throw std::invalid_argument("empty sample");

  std::vector<double> pooled;
  pooled.reserve(g1.size() + g2.size());
  pooled.insert(pooled.end(), g1.begin(), g1.end());
  pooled.insert(pooled.end(), g2.begin(), g2.end());
  const std::vector<double> overall = midranks(pooled);

  RankSummary s;
  const auto split = overall.begin() + static_cast<std::ptrdiff_t>(g1.size());
  s.overall_ranks_g1.assign(overall.begin(), split);
  s.overall_ranks_g2.assign(split, overall.end());
  s.within_ranks_g1 = midranks(g1);
  s.within_ranks_g2 = midranks(g2);

  auto placements = [](const std::vector<double>& overall_ranks,
                       const std::vector<double>& within) {
    std::vector<double> p(overall_ranks.size());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = overall_ranks[k] - within[k];
    return p;
  };
  s.placements_g1 = placements(s.overall_ranks_g1, s.within_ranks_g1);
  s.placements_g2 = placements(s.overall_ranks_g2, s.within_ranks_g2);
  return s;
}

}  // namespace wmwplan
