#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tensamp/completion.hpp"
#include "tensamp/rtpm.hpp"
#include "tensamp/sampling.hpp"
#include "tensamp/tensor.hpp"

namespace tensamp {

/// Bounded-noise description for synthetic inputs. The generator rescales a
/// raw gaussian draw so the realized Frobenius norm equals frobenius_level
/// exactly, then enforces the flatness cap
///   |E_ijk| <= flatness_constant * ||E||_F / n^{1.5}
/// by redrawing violating entries (at most three rounds, then
/// numerical_error). flatness_constant defaults to 4.5: a literal cap of
/// ||E||_F / n^{1.5} equals the root-mean-square entry, which only a
/// constant-magnitude tensor attains, so gaussian noise needs the constant.
struct NoiseSpec {
  double frobenius_level = 0.0;
  double c_constant = 1.0;        // slack in ||E||_F <= C sigma_min / (100 r)
  double flatness_constant = 4.5;

  /// Largest compliant ||E||_F for a ground truth with the given weights.
  double max_frobenius(double sigma_min, std::size_t r) const;
};

/// Symmetric gaussian noise cube realizing a NoiseSpec. Deterministic per seed.
Cube generate_noise(std::size_t n, const NoiseSpec& spec, std::uint64_t seed);

/// Read-only tensor source with an instrumented pass counter. The
/// factorization pipeline reads its input through faces only; a full sweep
/// of faces is one pass.
class TensorInput {
 public:
  virtual ~TensorInput() = default;
  virtual std::size_t dim() const = 0;
  /// Copy face i (n*n row-major entries at first index i) into buf.
  virtual void load_face(std::size_t i, std::span<double> buf) const = 0;

  std::uint32_t passes() const { return passes_.load(); }
  void note_pass() const { passes_.fetch_add(1); }

 private:
  mutable std::atomic<std::uint32_t> passes_{0};
};

class DenseInput final : public TensorInput {
 public:
  explicit DenseInput(const DenseTensor3& t) : t_(t) {}
  explicit DenseInput(DenseTensor3&&) = delete;
  std::size_t dim() const override { return t_.dim(); }
  void load_face(std::size_t i, std::span<double> buf) const override;

 private:
  const DenseTensor3& t_;
};

/// CP factors plus streamed symmetric noise; faces are assembled on demand
/// so the n^3 tensor is never materialized. Noise values are stored on the
/// i <= j <= k wedge only.
class SyntheticInput final : public TensorInput {
 public:
  SyntheticInput(CpFactors factors, const NoiseSpec& spec, std::uint64_t noise_seed);
  std::size_t dim() const override { return factors_.dim(); }
  void load_face(std::size_t i, std::span<double> buf) const override;
  const CpFactors& truth() const { return factors_; }

 private:
  double noise_at(std::size_t i, std::size_t j, std::size_t k) const;
  CpFactors factors_;
  std::vector<double> wedge_noise_;
};

/// One pass over the faces: nu_i = ||T_i||_F / ||T||_F + 1/sqrt(n),
/// Z = (sum nu^{3/2})^2 and the overall Frobenius norm.
NuStats face_pass(const TensorInput& input);

struct FactorizeOptions {
  std::uint64_t m = 0;     // sample budget; 0 = ceil(10 n^1.5 r)
  std::size_t rank = 1;
  std::size_t iters = 0;   // WALS sweeps; 0 = default formula
  std::uint64_t seed = 0;
  std::size_t rtpm_restarts = 30;
  std::size_t rtpm_iterations = 100;
  bool fresh_samples = false;
};

struct FactorizeResult {
  CpFactors factors;
  NuStats nu;
  std::size_t sample_count = 0;
  std::vector<SweepDiag> sweeps;
  std::uint32_t passes = 0;  // over the tensor input; always 2
};

/// Two-pass approximate factorization: pass one computes face norms, pass
/// two samples entries under the noisy-mixture distribution (fused Bernoulli
/// scan, recording values as it goes). RTPM on the reweighted samples gives
/// the init, thresholded at 2 nu_i, and WALS with the same caps finishes.
/// The input is never touched after the second pass.
FactorizeResult factorize(const TensorInput& input, const FactorizeOptions& opts,
                          const CpFactors* truth = nullptr);

/// Dense tensor container: magic "TNS3", u32 n (little-endian), then n^3
/// little-endian f64 values in (i,j,k) row-major order.
DenseTensor3 load_tensor_bin(const std::string& path);
void save_tensor_bin(const DenseTensor3& t, const std::string& path);

}  // namespace tensamp
