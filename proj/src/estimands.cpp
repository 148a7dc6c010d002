#include "wmwplan/estimands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wmwplan/detail/accumulate.hpp"
#include "wmwplan/ranking.hpp"

namespace wmwplan {

double Estimands::sigma_null() const { return std::sqrt(sigma2_null); }
double Estimands::sigma_1() const { return std::sqrt(sigma2_1); }
double Estimands::sigma_2() const { return std::sqrt(sigma2_2); }

double Estimands::kappa() const {
  if (sigma2_1 == 0.0 && sigma2_2 == 0.0) {
    throw std::domain_error("kappa undefined: both alternative variances are zero");
  }
  if (sigma2_1 == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(sigma2_2 / sigma2_1);
}

namespace {

double mean_of(const std::vector<double>& xs) {
  detail::NeumaierSum s;
  for (double x : xs) s += x;
  return s.value() / static_cast<double>(xs.size());
}

double centered_sum_of_squares(const std::vector<double>& xs, double center) {
  detail::NeumaierSum s;
  for (double x : xs) s += (x - center) * (x - center);
  return s.value();
}

// One distinct support point of the pooled distributions.
struct SupportPoint {
  double value;
  double w1;
  double w2;
};

std::vector<SupportPoint> merged_support(const WeightedSample& f1, const WeightedSample& f2) {
  std::vector<SupportPoint> points;
  points.reserve(f1.size() + f2.size());
  for (std::size_t i = 0; i < f1.size(); ++i) points.push_back({f1.values()[i], f1.weights()[i], 0.0});
  for (std::size_t i = 0; i < f2.size(); ++i) points.push_back({f2.values()[i], 0.0, f2.weights()[i]});
  std::sort(points.begin(), points.end(),
            [](const SupportPoint& a, const SupportPoint& b) { return a.value < b.value; });

  std::vector<SupportPoint> merged;
  for (const SupportPoint& p : points) {
    if (!merged.empty() && merged.back().value == p.value) {
      merged.back().w1 += p.w1;
      merged.back().w2 += p.w2;
    } else {
      merged.push_back(p);
    }
  }
  return merged;
}

// Normalized distribution functions of both groups at every support point.
struct NormalizedCdfs {
  std::vector<SupportPoint> support;
  std::vector<double> F1;
  std::vector<double> F2;
  double W1 = 0.0;
  double W2 = 0.0;
};

NormalizedCdfs normalized_cdfs(const WeightedSample& f1, const WeightedSample& f2) {
  if (!(f1.total_weight() > 0.0) || !(f2.total_weight() > 0.0)) {
    throw std::invalid_argument("zero total weight");
  }
  NormalizedCdfs out;
  out.support = merged_support(f1, f2);
  out.W1 = f1.total_weight();
  out.W2 = f2.total_weight();
  out.F1.resize(out.support.size());
  out.F2.resize(out.support.size());
  detail::NeumaierSum below1;
  detail::NeumaierSum below2;
  for (std::size_t i = 0; i < out.support.size(); ++i) {
    const SupportPoint& s = out.support[i];
    out.F1[i] = (below1.value() + 0.5 * s.w1) / out.W1;
    out.F2[i] = (below2.value() + 0.5 * s.w2) / out.W2;
    below1 += s.w1;
    below2 += s.w2;
  }
  return out;
}

// Weighted mean of g over one group's masses, using raw weights divided by
// their sum so that a constant g reproduces itself exactly.
template <typename Weight, typename Fn>
double group_mean(const NormalizedCdfs& c, Weight weight, Fn g) {
  detail::NeumaierSum num;
  detail::NeumaierSum den;
  for (std::size_t i = 0; i < c.support.size(); ++i) {
    const double w = weight(c.support[i]);
    if (w == 0.0) continue;
    num += w * g(i);
    den += w;
  }
  return num.value() / den.value();
}

}  // namespace

Estimands estimands_by_ranks(std::span<const double> g1, std::span<const double> g2) {
  const RankSummary r = rank_summary(g1, g2);
  const double n1 = static_cast<double>(g1.size());
  const double n2 = static_cast<double>(g2.size());
  const double N = n1 + n2;

  Estimands e;
  e.n1 = n1;
  e.n2 = n2;
  e.p_star = (mean_of(r.overall_ranks_g2) - mean_of(r.overall_ranks_g1)) / N + 0.5;

  const double center = 0.5 * (N + 1.0);
  detail::NeumaierSum dev;
  for (double x : r.overall_ranks_g1) dev += (x - center) * (x - center);
  for (double x : r.overall_ranks_g2) dev += (x - center) * (x - center);
  e.sigma2_null = dev.value() / (N * N * N);

  e.sigma2_1 = centered_sum_of_squares(r.placements_g1, mean_of(r.placements_g1)) / (n1 * n2 * n2);
  e.sigma2_2 = centered_sum_of_squares(r.placements_g2, mean_of(r.placements_g2)) / (n1 * n1 * n2);
  return e;
}

Estimands estimands_by_integrals(const WeightedSample& f1, const WeightedSample& f2,
                                 std::optional<double> null_mixing) {
  if (null_mixing && !(*null_mixing > 0.0 && *null_mixing < 1.0)) {
    throw std::invalid_argument("null mixing proportion must lie in (0, 1)");
  }
  const NormalizedCdfs c = normalized_cdfs(f1, f2);
  auto w1 = [](const SupportPoint& s) { return s.w1; };
  auto w2 = [](const SupportPoint& s) { return s.w2; };

  Estimands e;
  e.n1 = c.W1;
  e.n2 = c.W2;

  // p = int F1 dF2; E F2(X1) = 1 - p
  e.p_star = group_mean(c, w2, [&](std::size_t i) { return c.F1[i]; });
  const double mean_f2_at_x1 = group_mean(c, w1, [&](std::size_t i) { return c.F2[i]; });
  e.sigma2_1 = group_mean(c, w1, [&](std::size_t i) {
    const double d = c.F2[i] - mean_f2_at_x1;
    return d * d;
  });
  e.sigma2_2 = group_mean(c, w2, [&](std::size_t i) {
    const double d = c.F1[i] - e.p_star;
    return d * d;
  });

  const double share = null_mixing.value_or(c.W1 / (c.W1 + c.W2));
  auto mixture_mass = [&](const SupportPoint& s) {
    return share * s.w1 / c.W1 + (1.0 - share) * s.w2 / c.W2;
  };
  e.sigma2_null = group_mean(c, mixture_mass, [&](std::size_t i) {
    const double d = share * c.F1[i] + (1.0 - share) * c.F2[i] - 0.5;
    return d * d;
  });
  return e;
}

BalanceIntegrals balance_integrals(const WeightedSample& f1, const WeightedSample& f2) {
  const NormalizedCdfs c = normalized_cdfs(f1, f2);
  BalanceIntegrals b;
  b.f1_squared_df2 = group_mean(
      c, [](const SupportPoint& s) { return s.w2; },
      [&](std::size_t i) { return c.F1[i] * c.F1[i]; });
  b.one_minus_f2_squared_df1 = group_mean(
      c, [](const SupportPoint& s) { return s.w1; },
      [&](std::size_t i) { return (1.0 - c.F2[i]) * (1.0 - c.F2[i]); });
  return b;
}

}  // namespace wmwplan
