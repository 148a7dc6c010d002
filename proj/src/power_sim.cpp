#include "wmwplan/power_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "wmwplan/detail/wmw_kernel.hpp"

namespace wmwplan {

AliasTable::AliasTable(const WeightedSample& sample)
    : values_(sample.values().begin(), sample.values().end()),
      accept_(sample.size(), 1.0),
      alias_(sample.size(), 0) {
  const std::size_t n = sample.size();
  if (n == 0) throw std::invalid_argument("empty sample");
  if (n > UINT32_MAX) throw std::invalid_argument("sample too large for alias table");

  std::vector<double> scaled(n);
  const double factor = static_cast<double>(n) / sample.total_weight();
  for (std::size_t i = 0; i < n; ++i) scaled[i] = sample.weights()[i] * factor;

  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  for (std::size_t i = 0; i < n; ++i) {
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    large.pop_back();
    accept_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  // leftovers are 1 up to rounding
  for (std::uint32_t i : small) { accept_[i] = 1.0; alias_[i] = i; }
  for (std::uint32_t i : large) { accept_[i] = 1.0; alias_[i] = i; }
}

namespace {
__extension__ typedef unsigned __int128 uint128;
}  // namespace

double AliasTable::draw(std::mt19937_64& engine) const {
  const std::uint64_t column_bits = engine();
  const auto column = static_cast<std::size_t>(
      (static_cast<uint128>(column_bits) * values_.size()) >> 64);
  const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  return u < accept_[column] ? values_[column] : values_[alias_[column]];
}

std::mt19937_64 replication_engine(std::uint64_t seed, std::uint64_t replication) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replication),
                    static_cast<std::uint32_t>(replication >> 32)};
  return std::mt19937_64(seq);
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("WMWPLAN_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // fall through to the hardware count
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

PowerResult simulate_power(const WeightedSample& f1, const WeightedSample& f2, std::int64_t n1,
                           std::int64_t n2, double alpha, std::int64_t replications,
                           std::uint64_t seed, unsigned threads) {
  if (n1 < 2 || n2 < 2) throw std::invalid_argument("group sizes must be at least 2");
  if (replications < 1) throw std::invalid_argument("replications must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");

  const AliasTable table1(f1);
  const AliasTable table2(f2);
  const auto size1 = static_cast<std::size_t>(n1);
  const auto size2 = static_cast<std::size_t>(n2);

  auto run_range = [&](std::int64_t begin, std::int64_t end) {
    std::vector<detail::PooledObservation> pooled(size1 + size2);
    std::int64_t rejections = 0;
    for (std::int64_t rep = begin; rep < end; ++rep) {
      std::mt19937_64 engine = replication_engine(seed, static_cast<std::uint64_t>(rep));
      for (std::size_t k = 0; k < size1; ++k) pooled[k] = {table1.draw(engine), false};
      for (std::size_t k = 0; k < size2; ++k) pooled[size1 + k] = {table2.draw(engine), true};
      if (detail::wmw_test_pooled(pooled, size1, size2, alpha).reject) ++rejections;
    }
    return rejections;
  };

  unsigned workers = threads == 0 ? default_thread_count() : threads;
  workers = static_cast<unsigned>(std::min<std::int64_t>(workers, replications));

  std::int64_t rejections = 0;
  if (workers <= 1) {
    rejections = run_range(0, replications);
  } else {
    std::vector<std::int64_t> counts(workers, 0);
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
        const std::int64_t begin = replications * w / workers;
        const std::int64_t end = replications * (w + 1) / workers;
        pool.emplace_back([&, w, begin, end] { counts[w] = run_range(begin, end); });
      }
    }
    for (std::int64_t c : counts) rejections += c;
  }

  PowerResult r;
  r.replications = replications;
  r.rejections = rejections;
  r.seed = seed;
  r.power_hat = static_cast<double>(rejections) / static_cast<double>(replications);
  r.mc_stderr = std::sqrt(r.power_hat * (1.0 - r.power_hat) / static_cast<double>(replications));
  return r;
}

}  // namespace wmwplan
