#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>

#include "doctest.h"
#include "sharedpurity/rng.hpp"

using namespace sharedpurity;

TEST_CASE("streams are deterministic and pinned") {
  Rng a = Rng::stream(12345, 0);
  Rng b = Rng::stream(12345, 0);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.uniform() == b.uniform());
  }

  // Golden values: the generator is the standard-specified mt19937_64 and
  // the uniform transform is exact arithmetic, so these must never change.
  Rng g = Rng::stream(12345, 0);
  CHECK(g.uniform() == 0.73910744480361801);
  CHECK(g.uniform() == 0.8788097615226379);
  CHECK(g.uniform() == 0.5461330907212868);
  CHECK(g.uniform() == 0.36564613519775857);
  // Box-Muller goes through libm, so allow last-ulp drift.
  CHECK(g.normal() == doctest::Approx(0.51753563401627045).epsilon(1e-12));
  CHECK(g.normal() == doctest::Approx(2.0987893333485217).epsilon(1e-12));

  CHECK(mix_seed(7, 3) == 10753165928301472203ull);
}

TEST_CASE("stream separation") {
  Rng a = Rng::stream(42, 0);
  Rng b = Rng::stream(42, 1);
  int equal = 0;
  for (int i = 0; i < 64; ++i) {
    if (a.uniform() == b.uniform()) {
      ++equal;
    }
  }
  CHECK(equal == 0);

  std::set<std::uint64_t> seeds;
  for (int i = 0; i < 1000; ++i) {
    seeds.insert(mix_seed(42, i));
  }
  CHECK(seeds.size() == 1000);
}

TEST_CASE("uniform law") {
  Rng rng = Rng::stream(7, 0);
  const int n = 100000;
  double mean = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    mean += u;
  }
  mean /= n;
  CHECK(std::abs(mean - 0.5) < 0.01);

  Rng pos = Rng::stream(7, 1);
  for (int i = 0; i < n; ++i) {
    const double u = pos.uniform_pos();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }

  Rng range = Rng::stream(7, 2);
  for (int i = 0; i < 1000; ++i) {
    const double u = range.uniform(2.0, 3.0);
    CHECK(u >= 2.0);
    CHECK(u < 3.0);
  }
}

TEST_CASE("normal law") {
  Rng rng = Rng::stream(9, 0);
  const int n = 100000;
  double mean = 0.0;
  double second = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    mean += x;
    second += x * x;
  }
  mean /= n;
  second /= n;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(second - 1.0) < 0.05);

  Rng crng = Rng::stream(9, 1);
  double abs2 = 0.0;
  for (int i = 0; i < n; ++i) {
    abs2 += std::norm(crng.complex_normal());
  }
  abs2 /= n;
  CHECK(std::abs(abs2 - 2.0) < 0.05);
}
