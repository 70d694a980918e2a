#include <doctest.h>

#include <cmath>

#include "tensamp/rng.hpp"

using namespace tensamp;

TEST_CASE("streams are deterministic and tag-separated") {
  auto a1 = rng::Stream::derive(42, 7, 3);
  auto a2 = rng::Stream::derive(42, 7, 3);
  auto b = rng::Stream::derive(42, 7, 4);
  bool differs = false;
  for (int i = 0; i < 32; ++i) {
    const auto x = a1.next_u64();
    CHECK(x == a2.next_u64());
    differs = differs || x != b.next_u64();
  }
  CHECK(differs);
}

TEST_CASE("u01 ranges") {
  auto s = rng::Stream(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = s.u01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = s.u01_open();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("below stays in range and covers small bounds") {
  auto s = rng::Stream(1234);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 5000; ++i) {
    const auto x = s.below(5);
    REQUIRE(x < 5);
    ++counts[x];
  }
  for (const int c : counts) CHECK(c > 800);  // ~1000 expected each
}

TEST_CASE("gaussian moments are sane") {
  auto s = rng::Stream(77);
  const int trials = 20000;
  double mean = 0.0, var = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double g = s.gaussian();
    mean += g;
    var += g * g;
  }
  mean /= trials;
  var = var / trials - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("unit vectors have unit norm") {
  auto s = rng::Stream(5);
  const auto v = rng::unit_vector(s, 17);
  double norm = 0.0;
  for (const double x : v) norm += x * x;
  CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
}
