#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "wmwplan/estimands.hpp"
#include "wmwplan/synthetic.hpp"

namespace wmwplan {

struct BalancedAllocation {};
struct FixedAllocation {
  double t = 0.5;
};
struct OptimalAllocation {};

using AllocationPolicy = std::variant<BalancedAllocation, FixedAllocation, OptimalAllocation>;

/// alpha is always two-sided: the critical value is u_{1 - alpha/2}.
struct PlanInput {
  double alpha = 0.05;
  double power = 0.8;
  AllocationPolicy allocation = BalancedAllocation{};
};

enum class IntervalKind { regular, sigma1_zero, sigma2_zero, degenerate_half };

/// Interval guaranteed to contain the N-minimizing allocation rate.
struct AllocationInterval {
  double lower = 0.5;
  double upper = 0.5;
  IntervalKind kind = IntervalKind::degenerate_half;
};

struct AllocationOptimum {
  double t = 0.5;
  double n_total = 0.0;  ///< unrounded N(t)
  std::optional<AllocationInterval> interval;
};

struct PlanResult {
  double t = 0.5;
  double n_raw = 0.0;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  std::optional<AllocationInterval> interval;
  Estimands estimands;

  [[nodiscard]] std::int64_t n_total() const noexcept { return n1 + n2; }
};

/// Standard normal quantile, absolute error below 1e-9 on (0, 1).
double normal_quantile(double prob);

/// Unrounded total sample size
///
///   N(t) = (sigma u_{1-a/2} + u_{1-b} sqrt(t s2^2 + (1-t) s1^2))^2
///          / (t (1-t) (p - 1/2)^2).
///
/// Throws std::domain_error when p = 1/2 and std::invalid_argument when t is
/// outside (0, 1).
double sample_size_at_t(const Estimands& e, const PlanInput& input, double t);

/// Noether's approximation (u_{1-a/2} + u_{1-b})^2 / (12 t (1-t) (p - 1/2)^2).
double noether_sample_size(double p_star, const PlanInput& input, double t);

/// Requires power > 0.5. Throws std::domain_error ("allocation undetermined")
/// when both alternative variances vanish.
AllocationInterval allocation_interval(const Estimands& e, const PlanInput& input);

/// The unique minimizer of N(t) on (0, 1), to absolute tolerance 1e-10.
AllocationOptimum minimize_t(const Estimands& e, const PlanInput& input);

/// Rounds an unrounded requirement up to group sizes. Balanced designs use
/// n = ceil(N/2) per group; otherwise n1 = ceil(t N), n2 = ceil((1 - t) N).
struct GroupSizes {
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
};
GroupSizes round_group_sizes(double n_raw, double t, bool balanced);

/// Applies the allocation policy to precomputed estimands.
PlanResult plan(const Estimands& e, const PlanInput& input);

/// Estimands from the integral path, then plan(e, input).
PlanResult plan(const WeightedSample& f1, const WeightedSample& f2, const PlanInput& input);

/// Returns a = (mu1 + mu2) / 2 if P(X1 = x) = P(X2 = 2a - x) holds for every
/// support point (support points and probabilities compared within tol),
/// nothing otherwise. Success certifies that the balanced design is optimal.
std::optional<double> check_mirror_symmetry(const WeightedSample& f1, const WeightedSample& f2,
                                            double tol = 1e-9);

}  // namespace wmwplan
