#include "wmwplan/planning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wmwplan/detail/accumulate.hpp"

namespace wmwplan {

namespace {

// Acklam's rational approximation for the lower half, p <= 1/2.
double acklam_lower(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double normal_quantile_lower(double p) {
  double x = acklam_lower(p);
  // Halley steps against the exact cdf
  for (int i = 0; i < 2; ++i) {
    const double err = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = err * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    if (!std::isfinite(u)) break;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

void validate(const PlanInput& input) {
  if (!(input.alpha > 0.0 && input.alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(input.power > 0.0 && input.power < 1.0)) throw std::invalid_argument("power must lie in (0, 1)");
}

void require_power_above_half(const PlanInput& input) {
  if (!(input.power > 0.5)) {
    throw std::invalid_argument("optimal allocation requires power > 0.5");
  }
}

bool variances_equal(double a, double b) {
  return a == b || std::fabs(a - b) <= 1e-10 * std::max(a, b) + 1e-20;
}

// Sign of dN/dt. Negative left of the minimizer, positive right of it.
double stationarity(const Estimands& e, double u_alpha, double u_beta, double t) {
  const double s = std::sqrt(t * e.sigma2_2 + (1.0 - t) * e.sigma2_1);
  return u_alpha * e.sigma_null() * (2.0 * t - 1.0) * s -
         u_beta * (e.sigma2_1 * (1.0 - t) * (1.0 - t) - e.sigma2_2 * t * t);
}

// Brent's method: golden-section steps with parabolic interpolation.
template <typename F>
std::pair<double, double> brent_minimize(F f, double a, double b, double tol) {
  constexpr double golden = 0.3819660112501051;
  constexpr double tiny = 1e-21;
  double x = a + golden * (b - a);
  double w = x;
  double v = x;
  double fx = f(x);
  double fw = fx;
  double fv = fx;
  double d = 0.0;
  double e = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    const double xm = 0.5 * (a + b);
    const double tol1 = tol * std::fabs(x) + tiny;
    const double tol2 = 2.0 * tol1;
    if (std::fabs(x - xm) <= tol2 - 0.5 * (b - a)) break;

    bool golden_step = true;
    if (std::fabs(e) > tol1) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      const double e_prev = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = std::copysign(tol1, xm - x);
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x >= xm) ? a - x : b - x;
      d = golden * e;
    }
    const double u = std::fabs(d) >= tol1 ? x + d : x + std::copysign(tol1, d);
    const double fu = f(u);
    if (fu <= fx) {
      (u >= x ? a : b) = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return {x, fx};
}

std::optional<AllocationInterval> interval_if_defined(const Estimands& e, const PlanInput& input) {
  if (!(input.power > 0.5)) return std::nullopt;
  if (e.sigma2_1 == 0.0 && e.sigma2_2 == 0.0) return std::nullopt;
  return allocation_interval(e, input);
}

}  // namespace

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw std::invalid_argument("probability must lie in (0, 1)");
  if (prob == 0.5) return 0.0;
  if (prob > 0.5) return -normal_quantile_lower(1.0 - prob);
  return normal_quantile_lower(prob);
}

double sample_size_at_t(const Estimands& e, const PlanInput& input, double t) {
  validate(input);
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("allocation rate t must lie in (0, 1)");
  if (e.p_star == 0.5) throw std::domain_error("null effect: sample size undefined");
  const double u_alpha = normal_quantile(1.0 - 0.5 * input.alpha);
  const double u_beta = normal_quantile(input.power);
  const double numerator =
      e.sigma_null() * u_alpha + u_beta * std::sqrt(t * e.sigma2_2 + (1.0 - t) * e.sigma2_1);
  const double effect = e.p_star - 0.5;
  return numerator * numerator / (t * (1.0 - t) * effect * effect);
}

double noether_sample_size(double p_star, const PlanInput& input, double t) {
  validate(input);
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("allocation rate t must lie in (0, 1)");
  if (p_star == 0.5) throw std::domain_error("null effect: sample size undefined");
  const double u = normal_quantile(1.0 - 0.5 * input.alpha) + normal_quantile(input.power);
  const double effect = p_star - 0.5;
  return u * u / (12.0 * t * (1.0 - t) * effect * effect);
}

AllocationInterval allocation_interval(const Estimands& e, const PlanInput& input) {
  validate(input);
  require_power_above_half(input);
  if (e.sigma2_1 == 0.0 && e.sigma2_2 == 0.0) {
    throw std::domain_error("allocation undetermined: both alternative variances are zero");
  }
  if (variances_equal(e.sigma2_1, e.sigma2_2)) {
    return {0.5, 0.5, IntervalKind::degenerate_half};
  }

  const double u_alpha = normal_quantile(1.0 - 0.5 * input.alpha);
  const double u_beta = normal_quantile(input.power);
  const double sigma = e.sigma_null();
  const double c = u_alpha * std::sqrt(e.p_star * (1.0 - e.p_star)) * sigma;
  const double a1 = c + u_beta * e.sigma2_1;
  const double a2 = c + u_beta * e.sigma2_2;
  const double root_z = std::sqrt(a1 * a2);
  // root of h(t); below 1/2 iff sigma1 < sigma2
  const double i2 = root_z / (root_z + a2);

  if (e.sigma2_1 == 0.0) {
    const double lower = u_alpha * sigma / (2.0 * u_alpha * sigma + u_beta * e.sigma_2());
    return {lower, i2, IntervalKind::sigma1_zero};
  }
  if (e.sigma2_2 == 0.0) {
    const double upper = 1.0 - u_alpha * sigma / (2.0 * u_alpha * sigma + u_beta * e.sigma_1());
    return {i2, upper, IntervalKind::sigma2_zero};
  }
  const double i1 = 1.0 / (e.kappa() + 1.0);
  return {std::min(i1, i2), std::max(i1, i2), IntervalKind::regular};
}

AllocationOptimum minimize_t(const Estimands& e, const PlanInput& input) {
  validate(input);
  require_power_above_half(input);
  if (variances_equal(e.sigma2_1, e.sigma2_2)) {
    AllocationOptimum opt;
    opt.t = 0.5;
    opt.n_total = sample_size_at_t(e, input, 0.5);
    if (e.sigma2_1 > 0.0 || e.sigma2_2 > 0.0) opt.interval = allocation_interval(e, input);
    return opt;
  }

  const AllocationInterval interval = allocation_interval(e, input);
  constexpr double edge = 1e-6;
  const double lo = std::max(edge, interval.lower - 0.05);
  const double hi = std::min(1.0 - edge, interval.upper + 0.05);
  const auto objective = [&](double t) { return sample_size_at_t(e, input, t); };
  double t = brent_minimize(objective, lo, hi, 1e-9).first;

  // N is flat at its minimum; finish on the sign of dN/dt.
  const double u_alpha = normal_quantile(1.0 - 0.5 * input.alpha);
  const double u_beta = normal_quantile(input.power);
  const auto g = [&](double s) { return stationarity(e, u_alpha, u_beta, s); };
  double left = t;
  double right = t;
  for (double step = 1e-8; step < 1.0; step *= 4.0) {
    left = std::max(lo, t - step);
    right = std::min(hi, t + step);
    if (g(left) <= 0.0 && g(right) >= 0.0) break;
  }
  if (g(left) <= 0.0 && g(right) >= 0.0) {
    for (int i = 0; i < 200 && right - left > 1e-14; ++i) {
      const double mid = 0.5 * (left + right);
      if (mid <= left || mid >= right) break;
      (g(mid) < 0.0 ? left : right) = mid;
    }
    t = 0.5 * (left + right);
  }

  AllocationOptimum opt;
  opt.t = t;
  opt.n_total = objective(t);
  opt.interval = interval;
  return opt;
}

GroupSizes round_group_sizes(double n_raw, double t, bool balanced) {
  if (!std::isfinite(n_raw) || !(n_raw > 0.0)) throw std::invalid_argument("sample size must be positive and finite");
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("allocation rate t must lie in (0, 1)");
  if (balanced) {
    const auto n = static_cast<std::int64_t>(std::ceil(0.5 * n_raw));
    return {std::max<std::int64_t>(n, 1), std::max<std::int64_t>(n, 1)};
  }
  const auto n1 = static_cast<std::int64_t>(std::ceil(t * n_raw));
  const auto n2 = static_cast<std::int64_t>(std::ceil((1.0 - t) * n_raw));
  return {std::max<std::int64_t>(n1, 1), std::max<std::int64_t>(n2, 1)};
}

PlanResult plan(const Estimands& e, const PlanInput& input) {
  validate(input);
  PlanResult r;
  r.estimands = e;
  bool balanced = false;
  std::visit(
      [&](const auto& policy) {
        using P = std::decay_t<decltype(policy)>;
        if constexpr (std::is_same_v<P, BalancedAllocation>) {
          balanced = true;
          r.t = 0.5;
          r.n_raw = sample_size_at_t(e, input, 0.5);
          r.interval = interval_if_defined(e, input);
        } else if constexpr (std::is_same_v<P, FixedAllocation>) {
          r.t = policy.t;
          r.n_raw = sample_size_at_t(e, input, policy.t);
          r.interval = interval_if_defined(e, input);
        } else {
          const AllocationOptimum opt = minimize_t(e, input);
          r.t = opt.t;
          r.n_raw = opt.n_total;
          r.interval = opt.interval;
        }
      },
      input.allocation);
  const GroupSizes sizes = round_group_sizes(r.n_raw, r.t, balanced);
  r.n1 = sizes.n1;
  r.n2 = sizes.n2;
  return r;
}

PlanResult plan(const WeightedSample& f1, const WeightedSample& f2, const PlanInput& input) {
  return plan(estimands_by_integrals(f1, f2), input);
}

namespace {

struct Mass {
  double value;
  double prob;
};

std::vector<Mass> point_masses(const WeightedSample& f) {
  std::vector<Mass> masses;
  for (std::size_t i = 0; i < f.size(); ++i) masses.push_back({f.values()[i], f.weights()[i]});
  std::sort(masses.begin(), masses.end(), [](const Mass& a, const Mass& b) { return a.value < b.value; });
  std::vector<Mass> merged;
  for (const Mass& m : masses) {
    if (!merged.empty() && merged.back().value == m.value) {
      merged.back().prob += m.prob;
    } else {
      merged.push_back(m);
    }
  }
  for (Mass& m : merged) m.prob /= f.total_weight();
  return merged;
}

}  // namespace

std::optional<double> check_mirror_symmetry(const WeightedSample& f1, const WeightedSample& f2,
                                            double tol) {
  const double a = 0.5 * (f1.mean() + f2.mean());
  const std::vector<Mass> m1 = point_masses(f1);
  const std::vector<Mass> m2 = point_masses(f2);
  if (m1.size() != m2.size()) return std::nullopt;

  // x ascending in f1 pairs with 2a - x descending in f2
  for (std::size_t i = 0; i < m1.size(); ++i) {
    const Mass& x = m1[i];
    const Mass& y = m2[m2.size() - 1 - i];
    const double target = 2.0 * a - x.value;
    if (std::fabs(y.value - target) > tol * std::max(1.0, std::fabs(target))) return std::nullopt;
    if (std::fabs(y.prob - x.prob) > tol) return std::nullopt;
  }
  return a;
}

}  // namespace wmwplan
