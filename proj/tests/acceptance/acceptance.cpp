// Acceptance suite: one PASS/FAIL line per criterion, with per-check detail
// lines underneath. Exit status is nonzero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "support/oracles.hpp"
#include "wmwplan/datasets.hpp"
#include "wmwplan/estimands.hpp"
#include "wmwplan/planning.hpp"
#include "wmwplan/power_sim.hpp"
#include "wmwplan/wmw_test.hpp"

using namespace wmwplan;

namespace {

// Tolerances
constexpr double kEstimandTol = 5e-3;
constexpr double kExactTol = 1e-12;
constexpr double kOptimalRateTol = 5e-3;
constexpr double kPowerTol = 0.015;
constexpr double kBetaPTol = 3e-3;
constexpr double kBetaKappaTol = 1e-2;
constexpr double kBetaRateTol = 3e-3;
constexpr double kBetaSizeTol = 0.5;
constexpr double kPathTol = 1e-12;
constexpr double kGridTol = 1e-3;
constexpr double kSizeTol = 0.01;
constexpr int kPropertyPairs = 1000;

// Runtime limits in seconds
constexpr double kLimit1 = 1, kLimit2 = 1, kLimit3 = 120, kLimit4 = 30;

class Criterion {
 public:
  explicit Criterion(std::string title) : title_(std::move(title)) {}

  bool check(bool ok, const std::string& what) {
    if (!ok) ok_ = false;
    lines_.push_back(std::string(ok ? "    ok   " : "    FAIL ") + what);
    return ok;
  }
  // Only failing checks are listed.
  bool quiet(bool ok, const std::string& what) {
    if (!ok) {
      ok_ = false;
      if (++quiet_failures_ <= 10) lines_.push_back("    FAIL " + what);
    }
    ++quiet_checks_;
    return ok;
  }
  void note(const std::string& what) { lines_.push_back("    " + what); }

  bool report(int id, double seconds, double limit) {
    if (limit > 0 && seconds > limit) {
      ok_ = false;
      lines_.push_back("    FAIL runtime " + fmt(seconds, 2) + " s exceeds " + fmt(limit, 0) + " s");
    }
    if (quiet_checks_ > 0) {
      lines_.push_back("    " + std::to_string(quiet_checks_ - quiet_failures_) + "/" +
                       std::to_string(quiet_checks_) + " randomized checks passed");
    }
    std::printf("[%s] %d %s (%.2f s)\n", ok_ ? "PASS" : "FAIL", id, title_.c_str(), seconds);
    for (const auto& l : lines_) std::printf("%s\n", l.c_str());
    std::fflush(stdout);
    return ok_;
  }

  static std::string fmt(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
  }

 private:
  std::string title_;
  std::vector<std::string> lines_;
  bool ok_ = true;
  long quiet_checks_ = 0;
  long quiet_failures_ = 0;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string f(double v, int digits = 4) { return Criterion::fmt(v, digits); }

PlanInput with_allocation(PlanInput in, AllocationPolicy a) {
  in.allocation = a;
  return in;
}

bool criterion_estimands() {
  Criterion c("estimand regression");
  const auto start = Clock::now();
  struct Row {
    const char* name;
    double reported;
  };
  for (const Row& r : {Row{"seizures", 0.27}, Row{"nasal", 0.599}, Row{"kidney", 0.70}, Row{"albumin", 0.474}}) {
    const NamedExample ex = load_example(r.name);
    const double p = estimands_by_integrals(ex.f1, ex.f2).p_star;
    c.check(std::abs(p - r.reported) <= kEstimandTol,
            std::string(r.name) + " p = " + f(p, 6) + " vs " + f(r.reported, 3));
  }
  const NamedExample albumin = load_example("albumin");
  const double p_alb = estimands_by_integrals(albumin.f1, albumin.f2).p_star;
  c.check(std::abs(p_alb - 0.474375) <= kExactTol, "albumin p = " + f(p_alb, 10) + " vs exact 0.474375");
  for (const char* name : {"seizures", "kidney"}) {
    const NamedExample ex = load_example(name);
    const std::vector<double> g1(ex.f1.values().begin(), ex.f1.values().end());
    const std::vector<double> g2(ex.f2.values().begin(), ex.f2.values().end());
    const double by_ranks = estimands_by_ranks(g1, g2).p_star;
    const double by_integrals = estimands_by_integrals(ex.f1, ex.f2).p_star;
    c.check(std::abs(by_ranks - by_integrals) <= kExactTol,
            std::string(name) + " rank path p = " + f(by_ranks, 10) + " equals integral path");
  }
  return c.report(1, seconds_since(start), kLimit1);
}

bool criterion_sample_sizes() {
  Criterion c("sample-size regression");
  const auto start = Clock::now();
  struct Row {
    const char* name;
    long balanced;
    long opt1, opt2;
    double t0;  // < 0: not checked
    long noether;
  };
  const Row rows[] = {
      {"seizures", 24, 23, 24, 0.49, 26},
      {"nasal", 85, 83, 87, -1, 134},
      {"kidney", 30, 31, 30, 0.51, 32},
      {"albumin", 877, 909, 842, 0.52, 2667},
  };
  for (const Row& r : rows) {
    const NamedExample ex = load_example(r.name);
    const std::string name = r.name;
    const PlanResult bal = plan(ex.f1, ex.f2, with_allocation(ex.defaults, BalancedAllocation{}));
    c.check(bal.n1 == r.balanced && bal.n2 == r.balanced,
            name + " balanced " + std::to_string(bal.n1) + "/" + std::to_string(bal.n2) + " vs " +
                std::to_string(r.balanced) + "/" + std::to_string(r.balanced));
    const PlanResult opt = plan(ex.f1, ex.f2, with_allocation(ex.defaults, OptimalAllocation{}));
    c.check(opt.n1 == r.opt1 && opt.n2 == r.opt2,
            name + " optimal " + std::to_string(opt.n1) + "/" + std::to_string(opt.n2) + " vs " +
                std::to_string(r.opt1) + "/" + std::to_string(r.opt2) + " (t0 = " + f(opt.t) + ")");
    if (r.t0 > 0) {
      c.check(std::abs(opt.t - r.t0) <= kOptimalRateTol, name + " t0 = " + f(opt.t) + " vs " + f(r.t0, 2));
    }
    const double noether = noether_sample_size(bal.estimands.p_star, ex.defaults, 0.5);
    const GroupSizes ns = round_group_sizes(noether, 0.5, true);
    c.check(ns.n1 == r.noether, name + " Noether " + std::to_string(ns.n1) + "/" + std::to_string(ns.n2) +
                                    " vs " + std::to_string(r.noether) + "/" + std::to_string(r.noether));
  }
  return c.report(2, seconds_since(start), kLimit2);
}

bool criterion_power() {
  Criterion c("simulated power at 10^4 replications");
  const auto start = Clock::now();
  struct Row {
    const char* name;
    long n1, n2;
    double expected;
    bool at_least;  // expected is a lower bound
  };
  const Row rows[] = {
      {"seizures", 24, 24, 0.802, false},  {"seizures", 23, 24, 0.7956, false},
      {"seizures", 26, 26, 0.8417, false}, {"nasal", 85, 85, 0.8027, false},
      {"nasal", 83, 87, 0.7999, false},    {"nasal", 134, 134, 0.9417, false},
      {"kidney", 30, 30, 0.7976, false},   {"kidney", 31, 30, 0.8123, false},
      {"kidney", 32, 32, 0.8320, false},   {"albumin", 877, 877, 0.9054, false},
      {"albumin", 909, 842, 0.9033, false}, {"albumin", 2667, 2667, 1.0, true},
  };
  for (const Row& r : rows) {
    const NamedExample ex = load_example(r.name);
    const PowerResult p = simulate_power(ex.f1, ex.f2, r.n1, r.n2, ex.defaults.alpha, 10000, 0);
    const bool ok = r.at_least ? p.power_hat >= r.expected - kPowerTol
                               : std::abs(p.power_hat - r.expected) <= kPowerTol;
    c.check(ok, std::string(r.name) + " " + std::to_string(r.n1) + "/" + std::to_string(r.n2) + " power " +
                    f(p.power_hat) + " vs " + f(r.expected) + " (MC se " + f(p.mc_stderr) + ")");
  }
  return c.report(3, seconds_since(start), kLimit3);
}

bool criterion_beta_grid() {
  Criterion c("Beta(5,5) vs Beta(3,2) quantile grids, m = 10^5");
  const auto start = Clock::now();
  const NamedExample ex = load_example("beta55_32", 100000);
  const Estimands e = estimands_by_integrals(ex.f1, ex.f2);
  c.check(std::abs(e.p_star - 0.657) <= kBetaPTol, "p = " + f(e.p_star, 6) + " vs 0.657");
  c.check(std::abs(e.kappa() - 1.53) <= kBetaKappaTol, "kappa = " + f(e.kappa(), 6) + " vs 1.53");

  struct Row {
    double level, t0, n_opt, n_half;
  };
  const Row by_alpha[] = {
      {0.01, 0.4761, 153.0998, 153.4463}, {0.02, 0.4742, 130.2582, 130.6034}, {0.03, 0.4724, 118.1328, 118.4890},
      {0.04, 0.4715, 108.4745, 108.8243}, {0.05, 0.4704, 102.7568, 103.1146}, {0.06, 0.4695, 96.3878, 96.7427},
      {0.07, 0.4687, 91.8895, 92.2473},   {0.08, 0.4680, 87.5307, 87.8868},   {0.09, 0.4673, 82.7874, 83.1389},
      {0.10, 0.4668, 79.3812, 79.7288},
  };
  const Row by_power[] = {
      {0.60, 0.4890, 65.2151, 65.2464},   {0.65, 0.4842, 72.2678, 72.3398}, {0.70, 0.4793, 81.0607, 81.1986},
      {0.75, 0.4750, 90.1969, 90.4212},   {0.80, 0.4704, 102.7568, 103.1146}, {0.85, 0.4658, 116.2108, 116.7498},
      {0.90, 0.4606, 135.7222, 136.5547}, {0.95, 0.4544, 166.2805, 167.6483},
  };
  const auto row = [&](const Row& r, double alpha, double power, const std::string& label) {
    PlanInput in;
    in.alpha = alpha;
    in.power = power;
    in.allocation = OptimalAllocation{};
    const AllocationOptimum opt = minimize_t(e, in);
    const double n_half = sample_size_at_t(e, in, 0.5);
    c.check(std::abs(opt.t - r.t0) <= kBetaRateTol, label + " t0 = " + f(opt.t) + " vs " + f(r.t0));
    c.check(std::abs(opt.n_total - r.n_opt) <= kBetaSizeTol && std::abs(n_half - r.n_half) <= kBetaSizeTol,
            label + " N(t0) / N(1/2) = " + f(opt.n_total) + " / " + f(n_half) + " vs " + f(r.n_opt) + " / " +
                f(r.n_half));
  };
  for (const Row& r : by_alpha) row(r, r.level, 0.8, "alpha " + f(r.level, 2));
  for (const Row& r : by_power) row(r, 0.05, r.level, "power " + f(r.level, 2));
  return c.report(4, seconds_since(start), kLimit4);
}

WeightedSample random_weighted(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_int_distribution<int> point(0, 12);
  std::uniform_real_distribution<double> weight(0.05, 5.0);
  const int k = size(rng);
  std::vector<double> v, w;
  for (int i = 0; i < k; ++i) {
    v.push_back(0.25 * point(rng));
    w.push_back(weight(rng));
  }
  return WeightedSample(v, w);
}

std::vector<double> repeat(const std::vector<double>& v, int times) {
  std::vector<double> out;
  for (int i = 0; i < times; ++i) out.insert(out.end(), v.begin(), v.end());
  return out;
}

bool close(const Estimands& a, const Estimands& b, double tol) {
  return std::abs(a.p_star - b.p_star) <= tol && std::abs(a.sigma2_null - b.sigma2_null) <= tol &&
         std::abs(a.sigma2_1 - b.sigma2_1) <= tol && std::abs(a.sigma2_2 - b.sigma2_2) <= tol;
}

bool criterion_properties() {
  Criterion c("randomized property suite");
  const auto start = Clock::now();
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PlanInput in;
  in.allocation = OptimalAllocation{};

  long rank_pairs = 0, weighted_pairs = 0, planned = 0, mirrored = 0;
  for (int trial = 0; std::min({rank_pairs, weighted_pairs, planned, mirrored}) < kPropertyPairs; ++trial) {
    const std::string tag = " (pair " + std::to_string(trial) + ")";

    const oracle::DiscretePair d = oracle::random_discrete_pair(rng);
    const Estimands by_ranks = estimands_by_ranks(d.g1, d.g2);
    const Estimands by_integrals = estimands_by_integrals(d.f1, d.f2);
    c.quiet(close(by_ranks, by_integrals, kPathTol), "rank path differs from integral path" + tag);
    c.quiet(close(by_ranks, estimands_by_ranks(repeat(d.g1, 3), repeat(d.g2, 3)), kPathTol),
            "replication changed the estimands" + tag);
    ++rank_pairs;

    const WeightedSample f1 = random_weighted(rng);
    const WeightedSample f2 = random_weighted(rng);
    const Estimands e = estimands_by_integrals(f1, f2);
    const Estimands swapped = estimands_by_integrals(f2, f1);
    c.quiet(close(e, oracle::estimands(f1, f2), kPathTol), "integral path differs from pairwise oracle" + tag);
    c.quiet(std::abs(e.p_star + swapped.p_star - 1) <= kPathTol, "p-complement identity" + tag);
    const double scale = 0.1 + 10 * unit(rng);
    c.quiet(close(e, estimands_by_integrals(f1.scaled_weights(scale), f2.scaled_weights(scale)), kPathTol),
            "weight scaling changed the estimands" + tag);
    c.quiet(e.sigma2_1 >= 0 && e.sigma2_1 <= 0.25 && e.sigma2_2 >= 0 && e.sigma2_2 <= 0.25,
            "variance outside [0, 1/4]" + tag);
    const double q = e.p_star * (1 - e.p_star);
    c.quiet(e.sigma2_1 <= q + 1e-15 && e.sigma2_2 <= q + 1e-15, "variance above p (1 - p)" + tag);
    ++weighted_pairs;

    if (std::abs(e.p_star - 0.5) < 1e-3 || (e.sigma2_1 == 0 && e.sigma2_2 == 0)) continue;
    in.alpha = 0.01 + 0.09 * unit(rng);
    in.power = 0.55 + 0.4 * unit(rng);
    const AllocationOptimum opt = minimize_t(e, in);
    const AllocationOptimum opt_swapped = minimize_t(swapped, in);
    const AllocationInterval iv = allocation_interval(e, in);
    c.quiet(iv.lower <= opt.t + 1e-10 && opt.t <= iv.upper + 1e-10,
            "t0 = " + f(opt.t, 6) + " outside [" + f(iv.lower, 6) + ", " + f(iv.upper, 6) + "]" + tag);
    const double diff = e.sigma2_2 - e.sigma2_1;
    if (std::abs(diff) > 1e-12) {
      c.quiet((diff > 0) == (opt.t < 0.5), "sign of t0 - 1/2 disagrees with kappa" + tag);
    } else {
      c.quiet(std::abs(opt.t - 0.5) <= 1e-9, "equal variances without t0 = 1/2" + tag);
    }
    c.quiet(std::abs(opt.t + opt_swapped.t - 1) <= 1e-8, "group swap does not map t0 to 1 - t0" + tag);
    const double grid = oracle::grid_argmin([&](double t) { return sample_size_at_t(e, in, t); }, 1e-4);
    c.quiet(std::abs(grid - opt.t) <= kGridTol, "grid argmin " + f(grid, 4) + " vs t0 " + f(opt.t, 6) + tag);
    ++planned;

    // mirror image of f1 around a random centre, with the same masses
    const double centre = 0.25 * std::floor(4 + 16 * unit(rng));
    std::vector<double> mv, mw;
    for (std::size_t i = 0; i < f1.size(); ++i) {
      mv.push_back(2 * centre - f1.values()[i]);
      mw.push_back(f1.weights()[i] * 2.5);
    }
    const WeightedSample mirror(mv, mw);
    const auto a = check_mirror_symmetry(f1, mirror);
    const double mid = 0.5 * (f1.mean() + mirror.mean());
    if (c.quiet(a.has_value() && std::abs(*a - mid) <= 1e-9 && std::abs(*a - centre) <= 1e-9,
                "mirror centre not recovered" + tag)) {
      const Estimands m = estimands_by_integrals(f1, mirror);
      if (std::abs(m.p_star - 0.5) > 1e-9 && (m.sigma2_1 > 0 || m.sigma2_2 > 0)) {
        c.quiet(minimize_t(m, in).t == 0.5, "mirror pair without t0 = 1/2" + tag);
      }
    }
    ++mirrored;
  }
  c.note(std::to_string(rank_pairs) + " unit-weight pairs, " + std::to_string(weighted_pairs) +
         " weighted pairs, " + std::to_string(planned) + " planned, " + std::to_string(mirrored) + " mirror pairs");
  c.check(rank_pairs >= kPropertyPairs && weighted_pairs >= kPropertyPairs && planned >= kPropertyPairs && mirrored >= kPropertyPairs,
          "at least " + std::to_string(kPropertyPairs) + " randomized pairs per identity");
  return c.report(5, seconds_since(start), 0);
}

// Two-sided permutation p-values over every split, using the rank sum of
// the second group from brute-force midranks.
void permutation_ordering(Criterion& c, const std::vector<double>& pooled, std::size_t n1, const std::string& label) {
  const auto ranks = oracle::midranks(pooled);
  const auto splits = oracle::all_splits(pooled.size(), n1);
  const double n2 = static_cast<double>(pooled.size() - n1);
  const double expected = n2 * (static_cast<double>(pooled.size()) + 1) / 2;
  std::vector<double> deviation, z;
  for (const auto& mask : splits) {
    std::vector<double> g1, g2;
    double w = 0;
    for (std::size_t i = 0; i < pooled.size(); ++i) {
      (mask[i] ? g1 : g2).push_back(pooled[i]);
      if (!mask[i]) w += ranks[i];
    }
    deviation.push_back(std::abs(w - expected));
    z.push_back(std::abs(wmw_asymptotic_test(g1, g2, 0.05).statistic));
  }
  std::vector<double> perm_p;
  for (double dv : deviation) {
    const auto extreme = std::count_if(deviation.begin(), deviation.end(), [&](double o) { return o >= dv - 1e-9; });
    perm_p.push_back(static_cast<double>(extreme) / static_cast<double>(splits.size()));
  }
  long disagreements = 0;
  for (std::size_t i = 0; i < splits.size(); ++i) {
    for (std::size_t j = 0; j < splits.size(); ++j) {
      if (perm_p[i] < perm_p[j] && !(z[i] > z[j] + 1e-12)) ++disagreements;
      if (perm_p[i] == perm_p[j] && std::abs(z[i] - z[j]) > 1e-9) ++disagreements;
    }
  }
  c.check(disagreements == 0, label + ": " + std::to_string(splits.size()) + " splits, " +
                                  std::to_string(disagreements) + " ordering disagreements");
}

bool criterion_wmw_test() {
  Criterion c("asymptotic WMW test vs permutation oracle and null size");
  const auto start = Clock::now();
  permutation_ordering(c, {1.1, 2.3, 3.5, 4.0, 5.2, 6.8, 7.7, 9.4}, 4, "n1 = n2 = 4, no ties");
  permutation_ordering(c, {1, 2, 2, 3, 5, 5, 5, 8}, 4, "n1 = n2 = 4, ties");
  permutation_ordering(c, {0.4, 1.9, 2.2, 3.6, 4.1, 5.5, 6.3, 8.8}, 3, "n1 = 3, n2 = 5, no ties");
  permutation_ordering(c, {1, 1, 2, 3, 3, 3, 4, 4}, 3, "n1 = 3, n2 = 5, ties");

  // null size: identical continuous and tied discrete parents
  const WeightedSample continuous = quantile_grid([](double u) { return normal_quantile(u); }, 10000);
  const PowerResult cont = simulate_power(continuous, continuous, 50, 50, 0.05, 10000, 1);
  c.check(std::abs(cont.power_hat - 0.05) <= kSizeTol, "continuous null, 50/50: size " + f(cont.power_hat));
  const WeightedSample tied({0, 1, 2, 3}, {5, 3, 1, 1});
  const PowerResult disc = simulate_power(tied, tied, 50, 50, 0.05, 10000, 2);
  c.check(std::abs(disc.power_hat - 0.05) <= kSizeTol, "four-category null, 50/50: size " + f(disc.power_hat));
  return c.report(6, seconds_since(start), 0);
}

bool criterion_determinism() {
  Criterion c("power output is byte-identical across runs and thread counts");
  const auto start = Clock::now();
  for (const char* name : {"seizures", "nasal", "kidney"}) {
    std::string reference;
    for (unsigned threads : {1u, 4u, 1u, 3u}) {
      cli::RunConfig config;
      config.subcommand = "power";
      config.example = name;
      config.replications = 2000;
      config.seed = 7;
      config.threads = threads;
      config.format = cli::OutputFormat::json;
      const std::string out = cli::cmd_power(config);
      if (reference.empty()) reference = out;
      c.check(out == reference, std::string(name) + " seed 7, threads " + std::to_string(threads));
    }
  }
  return c.report(7, seconds_since(start), 0);
}

}  // namespace

int main() {
  const std::vector<std::function<bool()>> criteria = {criterion_estimands, criterion_sample_sizes,
                                                        criterion_power,     criterion_beta_grid,
                                                        criterion_properties, criterion_wmw_test,
                                                        criterion_determinism};
  int failed = 0;
  for (const auto& run : criteria) {
    try {
      if (!run()) ++failed;
    } catch (const std::exception& e) {
      std::printf("[FAIL] criterion threw: %s\n", e.what());
      ++failed;
    }
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
