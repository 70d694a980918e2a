#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace tensamp::rng {

/// One splitmix64 step. Used to whiten (seed, tag) combinations before
/// seeding substreams.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic random substream. Uniform and gaussian variates are mapped
/// from raw mt19937_64 output by explicit formulas, so sequences are
/// bit-identical across standard libraries (std::uniform_real_distribution
/// and std::normal_distribution are implementation-defined).
class Stream {
 public:
  explicit Stream(std::uint64_t seed);

  /// Substream derived from a seed and up to three tags. Streams with
  /// different tags are independent for all practical purposes.
  static Stream derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0);

  std::uint64_t next_u64();
  /// Uniform in [0, 1), 53-bit resolution.
  double u01();
  /// Uniform in (0, 1]; safe as a log() argument.
  double u01_open();
  /// Standard normal via Box-Muller (pairs cached).
  double gaussian();
  /// Uniform integer in [0, bound), bound >= 1. Unbiased via rejection.
  std::uint64_t below(std::uint64_t bound);

  template <class It>
  void shuffle(It first, It last) {
    const auto len = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = len; i > 1; --i)
      std::swap(first[i - 1], first[below(i)]);
  }

 private:
  std::mt19937_64 gen_;
  double cached_gaussian_ = 0.0;
  bool has_cached_ = false;
};

std::vector<double> gaussian_vector(Stream& s, std::size_t n);
/// Gaussian direction normalized to unit length.
std::vector<double> unit_vector(Stream& s, std::size_t n);

}  // namespace tensamp::rng
