#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tensamp/tensor.hpp"

namespace tensamp {

/// Weighted-ALS configuration. iters = 0 selects the default sweep count
/// ceil(4 sqrt(r) log(fro_hat / epsilon)) capped at 200, with fro_hat the
/// reweighted-sample Frobenius estimate. row_caps, when nonempty, bound
/// |U_iq| <= row_caps[i] after every update (and must hold for the init).
struct WalsConfig {
  std::size_t rank = 1;
  std::size_t iters = 0;
  bool fresh_samples = false;
  std::vector<double> row_caps;
  double epsilon = 1e-6;
  std::uint64_t seed = 0;
};

/// Uniformly random partition of the record indices into `parts` subsets
/// whose sizes differ by at most one; each subset is sorted ascending.
std::vector<std::vector<std::uint32_t>> split_omega(const SampledTensor& samples,
                                                    std::size_t parts,
                                                    std::uint64_t seed);

/// Clip every |u_i| to caps[i] and renormalize, iterating to a fixed point
/// where the column is unit and no coordinate exceeds its cap.
void apply_row_caps(std::span<double> column, std::span<const double> caps,
                    int max_rounds = 100);

/// One closed-form column solve: for each coordinate i,
///   u_i = sum_{(i,j,k) in subset} W R U_jq U_kq / sum W (U_jq U_kq)^2
/// with R the residual against the other columns. Coordinates whose
/// denominator is zero keep their previous (unnormalized) value. The column
/// is then renormalized into (sigma_q, U_q), sign-aligned with its previous
/// direction, clipped to the row caps and renormalized again.
void wals_step(const SampledTensor& samples, std::span<const std::uint32_t> subset,
               CpFactors& factors, std::size_t q, std::span<const double> caps);

struct SweepDiag {
  std::size_t sweep;
  double residual;               // weighted SSE over all of Omega
  std::optional<double> d_inf;   // vs ground truth, when provided
};

struct WalsResult {
  CpFactors factors;
  std::vector<SweepDiag> sweeps;
  std::size_t iters_run = 0;
};

/// b sweeps over the r columns. With fresh_samples each (sweep, column) step
/// consumes its own subset of the r*b-way partition; by default every step
/// reuses all of Omega. Throws numerical_error on non-finite iterates.
WalsResult wals(const SampledTensor& samples, const WalsConfig& cfg,
                const CpFactors& init, const CpFactors* truth = nullptr);

/// Weighted residual sum_records W (value - reconstruction)^2.
double weighted_residual(const SampledTensor& samples, const CpFactors& factors);

}  // namespace tensamp
