#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tensamp/tensor.hpp"

namespace tensamp {

enum class Family : int {
  uniform,
  l1,
  l2,
  sum_l3,
  prod_l3,
  tensor_ls,
  noisy_mixture,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// Face statistics for the noisy-mixture distribution:
/// nu_i = face_fro_i / fro + 1/sqrt(n), z = (sum_i nu_i^{3/2})^2.
struct NuStats {
  std::vector<double> nu;
  double z = 0.0;
  double fro = 0.0;
};
NuStats nu_stats(std::span<const double> face_fro, double fro);

/// Probability mass over index triples (i,j,k). All seven families are
/// symmetric in the triple and normalized by construction:
///   uniform       p = 1/n^3
///   l1            p = |T_ijk| / sum|T|
///   l2            p = T_ijk^2 / ||T||_F^2
///   sum_l3        p = (a_i + a_j + a_k) / (3 n^2 A),      a_i = r_i^3
///   prod_l3       p = (a_i a_j + a_j a_k + a_k a_i) / (3 n A^2), a_i = r_i^3
///   tensor_ls     same product form with a_i = r_i^3 (row norms of sample
///                 matrix) or a_i = r_i^{3/2} (row norms of U*)
///   noisy_mixture 0.5 * product form over nu_i^{3/2} + 0.5 * T^2/||T||_F^2
/// where r_i is the supplied per-row norm and A = sum_i a_i.
class EntryDistribution {
 public:
  /// Row-norm product distribution built from sample-matrix row norms
  /// (a_i = ||X^i||^3).
  static EntryDistribution from_samples(std::span<const double> row_norms);
  /// Row-norm product distribution built from factor row norms
  /// (a_i = ||(U*)^i||^{3/2}).
  static EntryDistribution from_factor_rows(std::span<const double> row_norms);
  static EntryDistribution sum_l3(std::span<const double> row_norms);
  static EntryDistribution prod_l3(std::span<const double> row_norms);
  static EntryDistribution l1(const DenseTensor3& t);
  static EntryDistribution l2(const DenseTensor3& t);
  static EntryDistribution uniform(std::size_t n);
  static EntryDistribution noisy_mixture(const DenseTensor3& t);

  Family family() const { return family_; }
  std::size_t dim() const { return n_; }
  /// Raw per-row statistic (family-dependent: ||X^i|| / ||(U*)^i|| for the
  /// tensor_ls variants, nu_i for noisy_mixture, r_i^3 for sum/prod L3).
  std::span<const double> row_stat() const { return row_stat_; }
  /// Family normalizer (A = sum a_i for product/sum families, Z for the
  /// noisy mixture, sum|T| for l1, ||T||_F^2 for l2).
  double norm_const() const { return norm_const_; }

  double prob(std::size_t i, std::size_t j, std::size_t k) const;

  /// Effective per-row mass of the product/sum component (empty for pure
  /// value families and uniform).
  std::span<const double> row_mass() const { return a_; }
  double row_mass_sum() const { return a_sum_; }
  bool has_value_component() const { return !values_.empty(); }
  std::span<const double> value_mass() const { return values_; }
  double value_mass_sum() const { return value_mass_sum_; }

 private:
  EntryDistribution() = default;

  Family family_ = Family::uniform;
  std::size_t n_ = 0;
  std::vector<double> row_stat_;
  double norm_const_ = 0.0;
  std::vector<double> a_;       // effective weights, product/sum component
  double a_sum_ = 0.0;
  std::vector<double> values_;  // |T| for l1, T^2 for l2 / noisy_mixture
  double value_mass_sum_ = 0.0;
};

enum class SampleMode { exact_bernoulli, fast_categorical };

/// Draw plan: target budget m, mode, reproducibility seed.
struct SamplePlan {
  std::uint64_t m = 0;
  SampleMode mode = SampleMode::exact_bernoulli;
  std::uint64_t seed = 0;

  /// exact_bernoulli up to n = 200, fast_categorical above.
  static SamplePlan make_auto(std::size_t n, std::uint64_t m, std::uint64_t seed);
};

struct DrawRecord {
  std::uint32_t i, j, k;
  double p_hat;
};

struct DrawResult {
  std::vector<DrawRecord> records;      // sorted by (i,j,k), unique
  std::size_t deterministic_count = 0;  // p_hat == 1 inclusions
  std::size_t random_count = 0;
};

/// Sample a triple set.
///
/// exact_bernoulli: every triple of the cube is included independently with
/// probability p_hat = min(m p, 1); the recorded p_hat is that value.
/// Deterministic inclusions (p_hat = 1) consume no randomness. Faces use
/// counter-based substreams derived from (seed, i) so results do not depend
/// on the thread count.
///
/// fast_categorical: draws m iid triples from the distribution (product and
/// sum families decompose into a uniform mixture of three two-categorical
/// one-uniform products; value families fall back to a categorical over all
/// entries), deduplicates, and records the true inclusion probability
/// p_hat = 1 - (1-p)^m.
DrawResult draw(const EntryDistribution& dist, const SamplePlan& plan);

/// Attach reweighting factors: weight = 1/p_hat, values aligned with draws.
SampledTensor reweight(std::size_t n, const DrawResult& draws,
                       std::span<const double> values);

}  // namespace tensamp
