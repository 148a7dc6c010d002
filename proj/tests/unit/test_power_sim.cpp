#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "wmwplan/datasets.hpp"
#include "wmwplan/power_sim.hpp"

using namespace wmwplan;

TEST_CASE("alias table reproduces the weights") {
  const WeightedSample f({0, 1, 2, 5}, {0.1, 0.2, 0.3, 0.4});
  const AliasTable table(f);
  CHECK(table.size() == 4);
  std::mt19937_64 rng(9);
  std::map<double, int> counts;
  const int draws = 400000;
  for (int i = 0; i < draws; ++i) ++counts[table.draw(rng)];
  CHECK(counts.size() == 4);
  CHECK(counts[0] / double(draws) == doctest::Approx(0.1).epsilon(0.03));
  CHECK(counts[1] / double(draws) == doctest::Approx(0.2).epsilon(0.02));
  CHECK(counts[2] / double(draws) == doctest::Approx(0.3).epsilon(0.02));
  CHECK(counts[5] / double(draws) == doctest::Approx(0.4).epsilon(0.02));
}

TEST_CASE("alias table uses exactly two engine calls and handles a single point") {
  const AliasTable single(WeightedSample(std::vector<double>{3.5}));
  std::mt19937_64 a(1), b(1);
  CHECK(single.draw(a) == 3.5);
  b.discard(2);
  CHECK(a() == b());
}

TEST_CASE("replication engines are reproducible and distinct") {
  auto e1 = replication_engine(42, 7);
  auto e2 = replication_engine(42, 7);
  auto e3 = replication_engine(42, 8);
  auto e4 = replication_engine(43, 7);
  const auto x = e1();
  CHECK(x == e2());
  CHECK(x != e3());
  CHECK(x != e4());
}

TEST_CASE("power estimate does not depend on the thread count") {
  const NamedExample ex = load_example("kidney");
  const PowerResult one = simulate_power(ex.f1, ex.f2, 30, 30, 0.05, 3000, 11, 1);
  for (unsigned threads : {2u, 3u, 4u, 7u, 16u}) {
    const PowerResult many = simulate_power(ex.f1, ex.f2, 30, 30, 0.05, 3000, 11, threads);
    CHECK(many.rejections == one.rejections);
    CHECK(many.power_hat == one.power_hat);
  }
  const PowerResult other_seed = simulate_power(ex.f1, ex.f2, 30, 30, 0.05, 3000, 12, 1);
  CHECK(other_seed.rejections != one.rejections);
}

TEST_CASE("power result fields") {
  const NamedExample ex = load_example("seizures");
  const PowerResult r = simulate_power(ex.f1, ex.f2, 24, 24, 0.05, 2000, 3, 2);
  CHECK(r.replications == 2000);
  CHECK(r.seed == 3);
  CHECK(r.power_hat == doctest::Approx(r.rejections / 2000.0));
  CHECK(r.mc_stderr == doctest::Approx(std::sqrt(r.power_hat * (1 - r.power_hat) / 2000)));
  CHECK(r.power_hat == doctest::Approx(0.80).epsilon(0.06));
}

TEST_CASE("identical groups reject at roughly the nominal level") {
  const WeightedSample f({0, 1, 2, 3, 4, 5, 6, 7}, {1, 1, 1, 1, 1, 1, 1, 1});
  const PowerResult r = simulate_power(f, f, 60, 60, 0.05, 10000, 5, 0);
  CHECK(std::abs(r.power_hat - 0.05) < 0.012);
}

TEST_CASE("point masses on both sides never reject") {
  const WeightedSample a(std::vector<double>{1});
  const PowerResult r = simulate_power(a, a, 5, 5, 0.05, 100, 0, 1);
  CHECK(r.rejections == 0);
}

TEST_CASE("argument validation") {
  const WeightedSample f({0, 1}, {1, 1});
  CHECK_THROWS_AS(simulate_power(f, f, 1, 5, 0.05, 10, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(simulate_power(f, f, 5, 5, 0.05, 0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(simulate_power(f, f, 5, 5, 1.5, 10, 0, 1), std::invalid_argument);
}

TEST_CASE("thread count from the environment") {
  setenv("WMWPLAN_THREADS", "3", 1);
  CHECK(default_thread_count() == 3);
  setenv("WMWPLAN_THREADS", "zero", 1);
  CHECK(default_thread_count() >= 1);
  unsetenv("WMWPLAN_THREADS");
  CHECK(default_thread_count() >= 1);
}
