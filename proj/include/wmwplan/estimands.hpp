#pragma once

#include <optional>
#include <span>

#include "wmwplan/synthetic.hpp"

namespace wmwplan {

/// Relative effect and variance components of two fixed distributions.
///
///   p_star      = int F1 dF2                 = P(X1 < X2) + P(X1 = X2) / 2
///   sigma2_null = int H^2 dH - 1/4           (H: pooled mixture)
///   sigma2_1    = Var(F2(X1))
///   sigma2_2    = Var(F1(X2))
///
/// n1 and n2 are the group sizes the values were computed from: observation
/// counts on the rank path, total weights on the integral path.
struct Estimands {
  double p_star = 0.5;
  double sigma2_null = 0.0;
  double sigma2_1 = 0.0;
  double sigma2_2 = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;

  [[nodiscard]] double sigma_null() const;
  [[nodiscard]] double sigma_1() const;
  [[nodiscard]] double sigma_2() const;

  /// sigma_2 / sigma_1. +infinity when sigma_1 = 0 < sigma_2; throws
  /// std::domain_error when both are zero.
  [[nodiscard]] double kappa() const;
};

/// Rank path: midranks and placements over the pooled unit-weight data.
/// Variances use population divisors (n1 n2^2, n1^2 n2, N^3).
Estimands estimands_by_ranks(std::span<const double> g1, std::span<const double> g2);

/// Integral path over normalized distribution functions. The null variance
/// pools the two distributions with mixing proportion null_mixing for the
/// first group; by default each group's share of the total weight, which
/// reproduces the rank path on unit-weight data.
Estimands estimands_by_integrals(const WeightedSample& f1, const WeightedSample& f2,
                                 std::optional<double> null_mixing = std::nullopt);

/// Both sides of the balanced-design condition
///   int F1^2 dF2 = int (1 - F2)^2 dF1,
/// which holds exactly when sigma2_1 = sigma2_2.
struct BalanceIntegrals {
  double f1_squared_df2 = 0.0;
  double one_minus_f2_squared_df1 = 0.0;
};

BalanceIntegrals balance_integrals(const WeightedSample& f1, const WeightedSample& f2);

}  // namespace wmwplan
