#include "tensamp/metrics.hpp"

#include <cmath>
#include <limits>

#include "tensamp/errors.hpp"
#include "tensamp/kernels.hpp"

namespace tensamp {

FactorMatch match_factors(const CpFactors& est, const CpFactors& truth) {
  if (est.rank() != truth.rank() || est.dim() != truth.dim())
    throw invalid_input("match_factors: factor shapes differ");
  const std::size_t r = est.rank();
  const std::size_t n = est.dim();

  std::vector<double> gram(r * r);  // gram[l*r + j] = <truth_l, est_j>
  for (std::size_t l = 0; l < r; ++l)
    for (std::size_t j = 0; j < r; ++j)
      gram[l * r + j] =
          kernels::dot(truth.column(l).data(), est.column(j).data(), n);

  FactorMatch match;
  match.perm.assign(r, 0);
  match.sign.assign(r, 1.0);
  std::vector<bool> truth_done(r, false), est_done(r, false);
  for (std::size_t round = 0; round < r; ++round) {
    double best = -1.0;
    std::size_t best_l = 0, best_j = 0;
    for (std::size_t l = 0; l < r; ++l) {
      if (truth_done[l]) continue;
      for (std::size_t j = 0; j < r; ++j) {
        if (est_done[j]) continue;
        if (std::abs(gram[l * r + j]) > best) {
          best = std::abs(gram[l * r + j]);
          best_l = l;
          best_j = j;
        }
      }
    }
    truth_done[best_l] = true;
    est_done[best_j] = true;
    match.perm[best_l] = best_j;
    match.sign[best_l] = gram[best_l * r + best_j] < 0.0 ? -1.0 : 1.0;
  }
  return match;
}

double factor_rmse(const CpFactors& est, const CpFactors& truth) {
  const auto match = match_factors(est, truth);
  const std::size_t n = est.dim(), r = est.rank();
  double acc = 0.0;
  for (std::size_t l = 0; l < r; ++l) {
    const auto e = est.column(match.perm[l]);
    const auto t = truth.column(l);
    const double s = match.sign[l];
    for (std::size_t i = 0; i < n; ++i) {
      const double d = s * e[i] - t[i];
      acc += d * d;
    }
  }
  return std::sqrt(acc / static_cast<double>(n * r));
}

double d_inf(const CpFactors& est, const CpFactors& truth) {
  const auto match = match_factors(est, truth);
  const std::size_t n = est.dim(), r = est.rank();
  double worst = 0.0;
  for (std::size_t l = 0; l < r; ++l) {
    const auto e = est.column(match.perm[l]);
    const auto t = truth.column(l);
    const double s = match.sign[l];
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = s * e[i] - t[i];
      col += d * d;
    }
    const double sigma_true = truth.sigma(l);
    if (!(sigma_true > 0.0))
      throw invalid_input("d_inf: reference sigma must be positive");
    const double delta =
        std::abs(s * est.sigma(match.perm[l]) - sigma_true) / sigma_true;
    worst = std::max(worst, std::sqrt(col) + delta);
  }
  return worst;
}

double l22_error(const Cube& a, const Cube& b, const L22Options& opts) {
  if (a.dim() != b.dim()) throw invalid_input("l22_error: dimension mismatch");
  Cube diff = a;
  diff -= b;
  return l22_norm(diff, opts);
}

double l22_error(const DenseTensor3& a, const DenseTensor3& b,
                 const L22Options& opts) {
  return l22_error(a.cube(), b.cube(), opts);
}

double l22_error(const SampledTensor& a, const DenseTensor3& b,
                 const L22Options& opts) {
  if (a.dim() != b.dim()) throw invalid_input("l22_error: dimension mismatch");
  Cube scattered(a.dim());
  a.scatter_reweighted(scattered);
  return l22_error(scattered, b.cube(), opts);
}

}  // namespace tensamp
