#include "tensamp/synth.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "tensamp/errors.hpp"
#include "tensamp/rng.hpp"

namespace tensamp {

SampleMatrix gen_samples(std::size_t n, std::size_t p, double a, std::uint64_t seed) {
  if (a < 0.0) throw invalid_input("gen_samples: bias exponent must be >= 0");
  if (n == 0 || p == 0) throw invalid_input("gen_samples: empty dimensions");
  std::vector<double> scale(n);
  for (std::size_t i = 0; i < n; ++i)
    scale[i] = 1.0 / std::pow(static_cast<double>(i + 1), a);

  std::vector<double> data(n * p);
  // Per-column substreams keep the matrix byte-identical across thread counts.
  for (std::size_t l = 0; l < p; ++l) {
    auto stream = rng::Stream::derive(seed, 0x5a3ull, l);
    for (std::size_t i = 0; i < n; ++i) data[i * p + l] = scale[i] * stream.gaussian();
  }
  return SampleMatrix(n, p, std::move(data));
}

CpFactors gen_orthogonal_factors(std::size_t n, std::size_t r, double a,
                                 std::uint64_t seed,
                                 std::span<const double> sigmas) {
  if (r == 0 || r > n) throw invalid_input("gen_orthogonal_factors: need 1 <= r <= n");
  if (a < 0.0) throw invalid_input("gen_orthogonal_factors: bias exponent must be >= 0");
  if (!sigmas.empty() && sigmas.size() != r)
    throw invalid_input("gen_orthogonal_factors: sigma count must equal r");

  Eigen::MatrixXd dx(n, r);
  for (std::size_t l = 0; l < r; ++l) {
    auto stream = rng::Stream::derive(seed, 0xfacull, l);
    for (std::size_t i = 0; i < n; ++i)
      dx(i, l) = stream.gaussian() / std::pow(static_cast<double>(i + 1), a);
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(dx, Eigen::ComputeThinU);
  const Eigen::MatrixXd u = svd.matrixU();

  CpFactors f(n, r);
  for (std::size_t l = 0; l < r; ++l) {
    auto col = f.column(l);
    for (std::size_t i = 0; i < n; ++i) col[i] = u(i, l);
    // SVD leaves column signs arbitrary; canonicalize like rtpm does.
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(col[i]) > std::abs(col[arg])) arg = i;
    if (col[arg] < 0.0)
      for (auto& x : col) x = -x;
    f.sigma(l) = sigmas.empty() ? 1.0 : sigmas[l];
  }
  f.check_positive_sigma();
  return f;
}

ClaimTensor claim_tensor(std::size_t n, std::size_t block_size) {
  if (block_size == 0)
    block_size = static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(n))));
  if (n <= 2 * block_size)
    throw invalid_input("claim_tensor: need n > 2 * block_size (n = " +
                        std::to_string(n) + ", block = " + std::to_string(block_size) + ")");

  const std::size_t b = block_size;
  DenseTensor3 t = DenseTensor3::from_wedge(
      n, [&](std::size_t i, std::size_t j, std::size_t k) {
        const bool first = i < b && j < b && k < b;
        const bool second = i >= b && j >= b && k >= b;
        return first || second ? 1.0 : 0.0;
      });

  CpFactors f(n, 2);
  const double inv1 = 1.0 / std::sqrt(static_cast<double>(b));
  const double inv2 = 1.0 / std::sqrt(static_cast<double>(n - b));
  auto u1 = f.column(0);
  auto u2 = f.column(1);
  for (std::size_t i = 0; i < b; ++i) u1[i] = inv1;
  for (std::size_t i = b; i < n; ++i) u2[i] = inv2;
  // sigma so that sigma * u (x) u (x) u has unit entries on its block.
  f.sigma(0) = std::pow(static_cast<double>(b), 1.5);
  f.sigma(1) = std::pow(static_cast<double>(n - b), 1.5);
  return {std::move(t), std::move(f), b};
}

double expected_block_count(const EntryDistribution& dist, std::uint64_t m,
                            std::span<const std::size_t> block) {
  const double md = static_cast<double>(m);
  double acc = 0.0;
  for (std::size_t i : block)
    for (std::size_t j : block)
      for (std::size_t k : block)
        acc += std::min(md * dist.prob(i, j, k), 1.0);
  return acc;
}

}  // namespace tensamp
