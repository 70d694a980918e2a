#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tensamp/sampling.hpp"
#include "tensamp/tensor.hpp"

namespace tensamp {

/// n x p matrix whose columns are the sample vectors X_i. Stored dense
/// row-major so moment entries reduce to contiguous triple-product sums.
/// Carries an instrumented pass counter: the streaming operations that read
/// the whole matrix bump it, which is how the two-pass contract of
/// sparsify() is enforced in tests.
class SampleMatrix {
 public:
  SampleMatrix(std::size_t n, std::size_t p, std::vector<double> row_major);

  /// CSV input, auto-detected by header: a `row,col,value` first line means
  /// sparse triplets (dimensions from the max indices unless given); any
  /// other first line is parsed as a dense matrix, one row per line.
  static SampleMatrix load_csv(std::istream& in);
  static SampleMatrix load_csv_file(const std::string& path);
  void save_csv(std::ostream& out) const;  // dense layout

  std::size_t dim() const { return n_; }
  std::size_t samples() const { return p_; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * p_, p_};
  }
  std::size_t nnz() const;

  std::uint32_t passes() const { return passes_.load(); }
  void note_pass() const { passes_.fetch_add(1); }

 private:
  std::size_t n_ = 0, p_ = 0;
  std::vector<double> data_;  // row-major n x p
  mutable std::atomic<std::uint32_t> passes_{0};
};

/// Euclidean norm of every row; one streaming pass, O(nnz).
std::vector<double> row_norm_pass(const SampleMatrix& x);

/// Moment-tensor entry sum_l X_il X_jl X_kl, O(p). Point probe; does not
/// count as a pass.
double moment_entry(const SampleMatrix& x, std::size_t i, std::size_t j,
                    std::size_t k);

/// Materialize the full moment tensor sum_l X_l (x) X_l (x) X_l.
/// Desk-scale oracle; refuses n > guard.
DenseTensor3 moment_tensor(const SampleMatrix& x, std::size_t guard = 512);

/// Two-pass sparsification: pass one computes row norms and the row-norm
/// product distribution, pass two evaluates only the drawn entries and
/// attaches weights. Expected output size <= m.
SampledTensor sparsify(const SampleMatrix& x, std::uint64_t m, std::uint64_t seed,
                       SampleMode mode = SampleMode::exact_bernoulli);

/// Comparison harness: sample the moment tensor under any family at budget
/// m. Row-norm families (tensorls, suml3, uniform) stay two-pass; value
/// families (l1, l2, noisy) materialize the dense tensor first.
SampledTensor sample_moment_tensor(const SampleMatrix& x, Family family,
                                   std::uint64_t m, std::uint64_t seed,
                                   SampleMode mode = SampleMode::exact_bernoulli);

/// Paper default budget when the CLI flag is omitted: ceil(10 n^1.5).
std::uint64_t default_budget(std::size_t n);

}  // namespace tensamp
