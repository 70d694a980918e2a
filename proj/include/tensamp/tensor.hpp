#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace tensamp {

/// Number of distinct permutations of an index triple (1, 3 or 6).
int triple_multiplicity(std::size_t i, std::size_t j, std::size_t k);

/// Flat n*n*n buffer, row-major by faces: (i,j,k) -> (i*n + j)*n + k.
/// Plain arithmetic carrier with no symmetry requirement; sampled scatters
/// and error tensors are asymmetric realizations and live here.
class Cube {
 public:
  Cube() = default;
  explicit Cube(std::size_t n) : n_(n), data_(n * n * n, 0.0) {}
  Cube(std::size_t n, std::vector<double> data);

  std::size_t dim() const { return n_; }
  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * n_ + j) * n_ + k];
  }
  double& at(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * n_ + j) * n_ + k];
  }
  std::span<const double> face(std::size_t i) const {
    return {data_.data() + i * n_ * n_, n_ * n_};
  }
  std::span<const double> flat() const { return data_; }
  std::span<double> flat_mut() { return data_; }

  Cube& operator-=(const Cube& other);

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Order-3 symmetric tensor. Entries are invariant under every index
/// permutation; constructors either build from a generator on the
/// i <= j <= k wedge (exact symmetry by mirroring) or validate a full cube.
class DenseTensor3 {
 public:
  /// Evaluate gen on the wedge and mirror to all permutations.
  static DenseTensor3 from_wedge(
      std::size_t n,
      const std::function<double(std::size_t, std::size_t, std::size_t)>& gen);

  /// Validate a full cube. Off-wedge entries must match their wedge
  /// representative to 1e-12 relative; the result is canonicalized from the
  /// wedge so downstream arithmetic sees exact symmetry.
  static DenseTensor3 from_cube(const Cube& c);

  std::size_t dim() const { return cube_.dim(); }
  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return cube_.at(i, j, k);
  }
  const Cube& cube() const { return cube_; }

 private:
  explicit DenseTensor3(Cube c) : cube_(std::move(c)) {}
  Cube cube_;
};

/// Symmetric rank-r representation sum_l sigma_l U_l (x) U_l (x) U_l.
/// Columns of U are unit vectors. sigma entries are positive for validated
/// ground-truth factors; power-method output may carry signed sigma (for odd
/// order a sign cannot be absorbed into the column without negating sigma:
/// (-u)(x)(-u)(x)(-u) = -(u(x)u(x)u)).
class CpFactors {
 public:
  CpFactors() = default;
  CpFactors(std::size_t n, std::size_t r)
      : n_(n), r_(r), u_(n * r, 0.0), sigma_(r, 0.0) {}

  std::size_t dim() const { return n_; }
  std::size_t rank() const { return r_; }
  std::span<double> column(std::size_t l) { return {u_.data() + l * n_, n_}; }
  std::span<const double> column(std::size_t l) const {
    return {u_.data() + l * n_, n_};
  }
  double entry(std::size_t i, std::size_t l) const { return u_[l * n_ + i]; }
  double& sigma(std::size_t l) { return sigma_[l]; }
  double sigma(std::size_t l) const { return sigma_[l]; }
  std::span<const double> sigmas() const { return sigma_; }

  /// max|sigma| / min|sigma|.
  double kappa() const;
  /// Euclidean norm of each row of U.
  std::vector<double> row_norms() const;

  /// Throws unless every column norm is within tol of 1.
  void check_unit_columns(double tol = 1e-12) const;
  /// Throws unless every sigma is strictly positive.
  void check_positive_sigma() const;

 private:
  std::size_t n_ = 0, r_ = 0;
  std::vector<double> u_;      // column-major, column l contiguous
  std::vector<double> sigma_;
};

struct SampleRecord {
  std::uint32_t i, j, k;
  double value;   // raw tensor entry at (i,j,k)
  double p_hat;   // inclusion probability, in (0, 1]
  double weight;  // 1 / p_hat
};

/// Sparse set of observed triples with inclusion probabilities and
/// reweighting factors. Triples are stored as drawn over the full index cube
/// (no symmetrization: entries related by permutation are sampled
/// independently) but kept sorted by (i,j,k) with unique keys.
class SampledTensor {
 public:
  SampledTensor(std::size_t n, std::vector<SampleRecord> records);

  std::size_t dim() const { return n_; }
  std::size_t size() const { return records_.size(); }
  std::span<const SampleRecord> records() const { return records_; }

  /// Add value * weight into a zero-initialized (or accumulating) cube.
  void scatter_reweighted(Cube& out) const;

  /// sqrt(sum_records weight * value^2): unbiased plug-in estimate of the
  /// Frobenius norm of the underlying tensor.
  double frobenius_estimate() const;

  /// Text format: header `i,j,k,value,p_hat`, one record per line,
  /// zero-based indices, 17-significant-digit reals.
  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static SampledTensor load(std::istream& in, std::size_t n);
  static SampledTensor load_file(const std::string& path, std::size_t n);
  /// As load(), with the dimension inferred as max index + 1.
  static SampledTensor load_file_auto(const std::string& path);

 private:
  std::size_t n_ = 0;
  std::vector<SampleRecord> records_;
};

// ---- Contractions -----------------------------------------------------

/// T(I,u,v): n-vector with i-th entry sum_{jk} T_ijk u_j v_k.
std::vector<double> tvp(const Cube& t, std::span<const double> u,
                        std::span<const double> v);
std::vector<double> tvp(const DenseTensor3& t, std::span<const double> u,
                        std::span<const double> v);
/// Sampled variant contracts the reweighted values (value * weight).
std::vector<double> tvp(const SampledTensor& t, std::span<const double> u,
                        std::span<const double> v);
/// CP variant: sum_l sigma_l <U_l,u> <U_l,v> U_l, O(n r).
std::vector<double> tvp(const CpFactors& f, std::span<const double> u,
                        std::span<const double> v);

/// Materialize sum_l sigma_l U_l (x) U_l (x) U_l. Refuses n > guard.
DenseTensor3 cp_reconstruct(const CpFactors& f, std::size_t guard = 512);

// ---- Norms ------------------------------------------------------------

double frobenius_norm(const Cube& t);
double frobenius_norm(const DenseTensor3& t);
/// Frobenius norm of the reweighted sparse tensor (stored entries only).
double frobenius_norm(const SampledTensor& t);
/// Exact Frobenius norm of the represented tensor, via the Gram identity
/// <u^3, w^3>_F = <u,w>^3; equals sqrt(sum sigma^2) for orthonormal columns.
double frobenius_norm(const CpFactors& f);

/// Frobenius norm of face i (the n x n slice at fixed first index).
double face_frobenius(const Cube& t, std::size_t i);

enum class FaceNorm { spectral, frobenius };

struct L22Options {
  FaceNorm face_norm = FaceNorm::spectral;
  double tol = 1e-10;    // relative change stopping rule for power iteration
  int max_iters = 1000;  // per face; non-convergence raises numerical_error
  // Exhausting max_iters without meeting tol happens on faces with near-tied
  // top singular values, where the running estimate is nonetheless within the
  // tie gap of the truth. Comparative sweeps opt into keeping that estimate
  // instead of erroring.
  bool accept_on_max_iters = false;
};

/// Spectral norm of an n x n matrix by power iteration on A^T A with a
/// deterministic seeded start. All-zero matrices short-circuit to 0.
double matrix_spectral_norm(std::span<const double> a, std::size_t n,
                            double tol = 1e-10, int max_iters = 1000,
                            bool accept_on_max_iters = false);

/// sqrt(sum_i norm(face_i)^2) with per-face spectral norms (default) or
/// Frobenius norms.
double l22_norm(const Cube& t, const L22Options& opts = {});
double l22_norm(const DenseTensor3& t, const L22Options& opts = {});

}  // namespace tensamp
