#include "tensamp/rng.hpp"

#include <cmath>
#include <numbers>

#include "tensamp/errors.hpp"
#include "tensamp/kernels.hpp"

namespace tensamp::rng {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Stream::Stream(std::uint64_t seed) : gen_(seed) {}

Stream Stream::derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                      std::uint64_t c) {
  std::uint64_t state = seed;
  std::uint64_t h = splitmix64(state);
  state ^= a;
  h ^= splitmix64(state);
  state ^= b;
  h ^= splitmix64(state);
  state ^= c;
  h ^= splitmix64(state);
  return Stream(h);
}

std::uint64_t Stream::next_u64() { return gen_(); }

double Stream::u01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::u01_open() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Stream::gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_gaussian_;
  }
  const double u1 = u01_open();
  const double u2 = u01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Stream::below(std::uint64_t bound) {
  // Accept x <= limit where limit + 1 is the largest multiple of bound.
  const std::uint64_t mod = (UINT64_MAX % bound + 1) % bound;
  const std::uint64_t limit = UINT64_MAX - mod;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x > limit);
  return x % bound;
}

std::vector<double> gaussian_vector(Stream& s, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = s.gaussian();
  return v;
}

std::vector<double> unit_vector(Stream& s, std::size_t n) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<double> v = gaussian_vector(s, n);
    const double norm = std::sqrt(kernels::sumsq(v.data(), n));
    if (norm > 1e-300) {
      for (auto& x : v) x /= norm;
      return v;
    }
  }
  throw numerical_error("unit_vector: degenerate gaussian draws");
}

}  // namespace tensamp::rng
