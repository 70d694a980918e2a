#pragma once

#include <cstddef>
#include <vector>

#include "tensamp/tensor.hpp"

namespace tensamp {

/// Column assignment between estimated and reference factors. perm[l] is the
/// estimate column matched to truth column l; sign[l] resolves the
/// odd-order ambiguity (sigma, U) ~ (-sigma, -U).
struct FactorMatch {
  std::vector<std::size_t> perm;
  std::vector<double> sign;
};

/// Greedy assignment maximizing |<U_est, U*_l>| without replacement,
/// repeatedly taking the globally largest remaining inner product; ties
/// break toward the lowest (truth, est) index pair.
FactorMatch match_factors(const CpFactors& est, const CpFactors& truth);

/// sqrt( sum_l ||s_l U_{perm(l)} - U*_l||^2 / (n r) ) after matching.
double factor_rmse(const CpFactors& est, const CpFactors& truth);

/// max_l ( ||s_l U_{perm(l)} - U*_l|| + |s_l sigma_{perm(l)} - sigma*_l| / sigma*_l ).
double d_inf(const CpFactors& est, const CpFactors& truth);

/// l22_norm(a - b).
double l22_error(const Cube& a, const Cube& b, const L22Options& opts = {});
double l22_error(const DenseTensor3& a, const DenseTensor3& b,
                 const L22Options& opts = {});
/// Error of a reweighted sampled tensor against a dense reference.
double l22_error(const SampledTensor& a, const DenseTensor3& b,
                 const L22Options& opts = {});

}  // namespace tensamp
