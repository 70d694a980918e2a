#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tensamp/sampling.hpp"
#include "tensamp/sparsify.hpp"
#include "tensamp/tensor.hpp"

namespace tensamp {

/// p gaussian columns with coordinates scaled by the power-law diagonal
/// D_ii = 1 / i^a (1-based row index). a = 0 is the unbiased case.
SampleMatrix gen_samples(std::size_t n, std::size_t p, double a, std::uint64_t seed);

/// Orthonormal factors biased the same way: top-r left singular vectors of
/// D X for a gaussian X. sigmas defaults to all ones.
CpFactors gen_orthogonal_factors(std::size_t n, std::size_t r, double a,
                                 std::uint64_t seed,
                                 std::span<const double> sigmas = {});

/// Rank-2 block-diagonal cube-of-ones tensor: first block on the leading
/// block_size indices (default ceil(ln n)), second block on the rest.
/// Factors are the two normalized indicator vectors with sigma chosen so the
/// reconstruction is exactly the block tensor.
struct ClaimTensor {
  DenseTensor3 tensor;
  CpFactors factors;
  std::size_t block_size;
};
ClaimTensor claim_tensor(std::size_t n, std::size_t block_size = 0);

/// Exact expected number of sampled entries inside block^3 at budget m:
/// sum over the block cube of min(m p, 1).
double expected_block_count(const EntryDistribution& dist, std::uint64_t m,
                            std::span<const std::size_t> block);

}  // namespace tensamp
