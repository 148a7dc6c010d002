#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wmwplan/synthetic.hpp"

namespace wmwplan {

struct PowerResult {
  double power_hat = 0.0;
  std::int64_t replications = 0;
  std::int64_t rejections = 0;
  std::uint64_t seed = 0;
  double mc_stderr = 0.0;
};

/// Walker/Vose alias table over the support of a WeightedSample.
class AliasTable {
 public:
  explicit AliasTable(const WeightedSample& sample);

  /// One draw from the sample's point masses. Uses exactly two engine calls.
  double draw(std::mt19937_64& engine) const;

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
  std::vector<double> accept_;
  std::vector<std::uint32_t> alias_;
};

/// Engine for replication `replication` of a run seeded with `seed`. Streams
/// are derived independently of how replications are spread over threads.
std::mt19937_64 replication_engine(std::uint64_t seed, std::uint64_t replication);

/// Thread count used when simulate_power is called with threads = 0:
/// $WMWPLAN_THREADS if set to a positive integer, else the hardware count.
unsigned default_thread_count();

/// Monte-Carlo power of the asymptotic WMW test: each replication draws n1
/// values from f1 and n2 from f2 with replacement (probabilities
/// proportional to weights) and tests at level alpha. The result depends only
/// on the arguments, not on the thread count.
PowerResult simulate_power(const WeightedSample& f1, const WeightedSample& f2, std::int64_t n1,
                           std::int64_t n2, double alpha, std::int64_t replications,
                           std::uint64_t seed, unsigned threads = 0);

}  // namespace wmwplan
