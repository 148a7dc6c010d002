#include "wmwplan/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/beta.hpp>

#include "wmwplan/detail/accumulate.hpp"

namespace wmwplan {

WeightedSample::WeightedSample(std::vector<double> values)
    : WeightedSample(values, std::vector<double>(values.size(), 1.0)) {}

WeightedSample::WeightedSample(std::vector<double> values, std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
  if (values_.size() != weights_.size()) {
    throw std::invalid_argument("values and weights differ in length");
  }
  if (values_.empty()) throw std::invalid_argument("empty sample");
  detail::NeumaierSum total;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw std::invalid_argument("non-finite value in sample");
    if (!std::isfinite(weights_[i]) || !(weights_[i] > 0.0)) {
      throw std::invalid_argument("weights must be finite and positive");
    }
    total += weights_[i];
  }
  total_weight_ = total.value();
}

double WeightedSample::mean() const {
  detail::NeumaierSum s;
  for (std::size_t i = 0; i < values_.size(); ++i) s += weights_[i] * values_[i];
  return s.value() / total_weight_;
}

bool WeightedSample::has_unit_weights() const noexcept {
  return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w == 1.0; });
}

WeightedSample WeightedSample::scaled_weights(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("scale must be positive");
  std::vector<double> w(weights_);
  for (double& x : w) x *= c;
  return {values_, std::move(w)};
}

WeightedSample scale_effect(const WeightedSample& base, double q, bool integer_floor) {
  if (!(q > 0.0) || q > 1.0) throw std::invalid_argument("scale factor q must lie in (0, 1]");
  std::vector<double> out(base.values().begin(), base.values().end());
  for (double& x : out) {
    x *= q;
    if (integer_floor) {
      // q*x within rounding of an integer counts as that integer
      const double nearest = std::round(x);
      if (std::fabs(x - nearest) <= 1e-12 * std::max(1.0, std::fabs(x))) {
        x = nearest;
      } else {
        x = std::floor(x);
      }
    }
  }
  return {std::move(out), std::vector<double>(base.weights().begin(), base.weights().end())};
}

WeightedSample shift_effect(const WeightedSample& base, double delta,
                            std::optional<int> round_decimals) {
  if (!std::isfinite(delta)) throw std::invalid_argument("shift must be finite");
  if (round_decimals && (*round_decimals < 0 || *round_decimals > 15)) {
    throw std::invalid_argument("round_decimals must lie in [0, 15]");
  }
  std::vector<double> out(base.values().begin(), base.values().end());
  const double scale = round_decimals ? std::pow(10.0, *round_decimals) : 1.0;
  for (double& x : out) {
    x += delta;
    if (round_decimals) x = std::round(x * scale) / scale;
  }
  return {std::move(out), std::vector<double>(base.weights().begin(), base.weights().end())};
}

std::vector<double> ordinal_shift(std::span<const double> base_counts, double move_fraction,
                                  ShiftDirection direction,
                                  std::span<const std::size_t> categories) {
  if (!(move_fraction >= 0.0 && move_fraction <= 1.0)) {
    throw std::invalid_argument("move_fraction must lie in [0, 1]");
  }
  for (double c : base_counts) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("counts must be >= 0");
  }
  const std::size_t k = base_counts.size();
  std::vector<double> out(base_counts.begin(), base_counts.end());
  std::vector<bool> seen(k, false);
  for (std::size_t cat : categories) {
    if (cat >= k) {
      throw std::invalid_argument("category " + std::to_string(cat) + " out of range");
    }
    if (seen[cat]) continue;
    seen[cat] = true;
    const bool boundary = direction == ShiftDirection::up ? cat + 1 == k : cat == 0;
    if (boundary) {
      if (base_counts[cat] > 0.0) {
        throw std::invalid_argument("category " + std::to_string(cat) +
                                    " has no neighbour to move into");
      }
      continue;
    }
    const double moved = move_fraction * base_counts[cat];
    const std::size_t target = direction == ShiftDirection::up ? cat + 1 : cat - 1;
    out[cat] -= moved;
    out[target] += moved;
  }
  return out;
}

WeightedSample from_frequency_table(std::span<const double> probs_or_counts) {
  std::vector<double> values;
  std::vector<double> weights;
  for (std::size_t i = 0; i < probs_or_counts.size(); ++i) {
    const double w = probs_or_counts[i];
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("frequencies must be finite and >= 0");
    }
    if (w > 0.0) {
      values.push_back(static_cast<double>(i));
      weights.push_back(w);
    }
  }
  if (values.empty()) throw std::invalid_argument("frequency table has no positive entry");
  return {std::move(values), std::move(weights)};
}

WeightedSample from_frequency_table(std::span<const std::string> categories,
                                    std::span<const double> probs_or_counts) {
  if (categories.size() != probs_or_counts.size()) {
    throw std::invalid_argument("category labels and frequencies differ in length");
  }
  return from_frequency_table(probs_or_counts);
}

WeightedSample quantile_grid(const std::function<double(double)>& cdf_inverse, std::size_t m) {
  if (m == 0) throw std::invalid_argument("grid size must be positive");
  std::vector<double> values(m);
  const double md = static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double x = cdf_inverse((static_cast<double>(k) + 0.5) / md);
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite quantile");
    values[k] = x;
  }
  return WeightedSample(std::move(values));
}

double beta_quantile(double a, double b, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw std::invalid_argument("probability must lie in (0, 1)");
  // Boost's inverse fails to converge at the exact median of a symmetric beta
  if (a == b && prob == 0.5) return 0.5;
  const boost::math::beta_distribution<double> dist(a, b);
  return boost::math::quantile(dist, prob);
}

}  // namespace wmwplan
