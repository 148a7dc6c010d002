#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wmwplan {

/// A fixed discrete distribution given by support points and positive
/// weights. Duplicate support points are allowed; their weights add up.
///
/// The distribution function attached to a sample is the normalized one,
/// F(x) = (F^-(x) + F^+(x)) / 2, of the weight-normalized point masses.
class WeightedSample {
 public:
  WeightedSample() = default;

  /// Unit weights.
  explicit WeightedSample(std::vector<double> values);

  /// Throws std::invalid_argument unless sizes match, every value is finite
  /// and every weight is finite and > 0, and the sample is nonempty.
  WeightedSample(std::vector<double> values, std::vector<double> weights);

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }

  [[nodiscard]] double total_weight() const noexcept { return total_weight_; }
  [[nodiscard]] double mean() const;
  [[nodiscard]] bool has_unit_weights() const noexcept;

  /// Same support, every weight multiplied by c > 0.
  [[nodiscard]] WeightedSample scaled_weights(double c) const;

  friend bool operator==(const WeightedSample&, const WeightedSample&) = default;

 private:
  std::vector<double> values_;
  std::vector<double> weights_;
  double total_weight_ = 0.0;
};

enum class ShiftDirection { up, down };

/// x -> q * x, or floor(q * x) when integer_floor is set. q must lie in (0, 1].
WeightedSample scale_effect(const WeightedSample& base, double q, bool integer_floor);

/// x -> x + delta, optionally rounded half away from zero to round_decimals
/// decimal places.
WeightedSample shift_effect(const WeightedSample& base, double delta,
                            std::optional<int> round_decimals = std::nullopt);

/// Moves move_fraction of the count of each selected ordered category one
/// category up or down. All moves are computed from the original counts.
///
/// Throws if a selected category has a positive count and no neighbour in
/// the requested direction, or if a category index is out of range.
std::vector<double> ordinal_shift(std::span<const double> base_counts, double move_fraction,
                                  ShiftDirection direction,
                                  std::span<const std::size_t> categories);

/// Ordered categories are coded 0, 1, 2, ... in the given order; zero-count
/// categories are dropped. Throws if no entry is positive.
WeightedSample from_frequency_table(std::span<const double> probs_or_counts);

/// Same, with the category labels checked against the counts.
WeightedSample from_frequency_table(std::span<const std::string> categories,
                                    std::span<const double> probs_or_counts);

/// Unit-weight sample cdf_inverse((k - 1/2) / m), k = 1..m.
WeightedSample quantile_grid(const std::function<double(double)>& cdf_inverse, std::size_t m);

/// Inverse distribution function of Beta(a, b).
double beta_quantile(double a, double b, double prob);

}  // namespace wmwplan
