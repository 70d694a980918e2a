#include "tensamp/completion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tensamp/errors.hpp"
#include "tensamp/kernels.hpp"
#include "tensamp/metrics.hpp"
#include "tensamp/rng.hpp"

namespace tensamp {

std::vector<std::vector<std::uint32_t>> split_omega(const SampledTensor& samples,
                                                    std::size_t parts,
                                                    std::uint64_t seed) {
  if (parts == 0) throw invalid_input("split_omega: need at least one part");
  const std::size_t total = samples.size();
  if (total < parts)
    throw invalid_input("split_omega: fewer samples (" + std::to_string(total) +
                        ") than parts (" + std::to_string(parts) + ")");
  std::vector<std::uint32_t> order(total);
  std::iota(order.begin(), order.end(), 0u);
  auto stream = rng::Stream::derive(seed, 0x5b117ull);
  stream.shuffle(order.begin(), order.end());

  const std::size_t base = total / parts;
  const std::size_t extra = total % parts;
  std::vector<std::vector<std::uint32_t>> out(parts);
  std::size_t cursor = 0;
  for (std::size_t part = 0; part < parts; ++part) {
    const std::size_t count = base + (part < extra ? 1 : 0);
    out[part].assign(order.begin() + cursor, order.begin() + cursor + count);
    std::sort(out[part].begin(), out[part].end());
    cursor += count;
  }
  return out;
}

void apply_row_caps(std::span<double> column, std::span<const double> caps,
                    int max_rounds) {
  if (caps.empty()) return;
  if (caps.size() != column.size())
    throw invalid_input("apply_row_caps: cap count does not match dimension");
  for (int round = 0; round < max_rounds; ++round) {
    bool clipped = false;
    for (std::size_t i = 0; i < column.size(); ++i) {
      const double cap = caps[i];
      if (column[i] > cap) {
        column[i] = cap;
        clipped = true;
      } else if (column[i] < -cap) {
        column[i] = -cap;
        clipped = true;
      }
    }
    if (!clipped) return;
    const double norm = std::sqrt(kernels::sumsq(column.data(), column.size()));
    if (!(norm > 0.0))
      throw numerical_error("apply_row_caps: column vanished under caps");
    for (auto& x : column) x /= norm;
  }
  throw numerical_error("apply_row_caps: projection did not stabilize (caps too tight)");
}

namespace {

double reconstruct_at(const CpFactors& f, std::uint32_t i, std::uint32_t j,
                      std::uint32_t k) {
  double acc = 0.0;
  for (std::size_t l = 0; l < f.rank(); ++l)
    acc += f.sigma(l) * f.entry(i, l) * f.entry(j, l) * f.entry(k, l);
  return acc;
}

}  // namespace

double weighted_residual(const SampledTensor& samples, const CpFactors& factors) {
  double acc = 0.0;
  for (const auto& rec : samples.records()) {
    const double d = rec.value - reconstruct_at(factors, rec.i, rec.j, rec.k);
    acc += rec.weight * d * d;
  }
  return acc;
}

void wals_step(const SampledTensor& samples, std::span<const std::uint32_t> subset,
               CpFactors& factors, std::size_t q, std::span<const double> caps) {
  if (subset.empty()) throw invalid_input("wals_step: empty sample subset");
  const std::size_t n = factors.dim();
  const std::size_t r = factors.rank();
  const auto recs = samples.records();

  std::vector<double> num(n, 0.0), den(n, 0.0);
  for (const std::uint32_t idx : subset) {
    const auto& rec = recs[idx];
    double residual = rec.value;
    for (std::size_t l = 0; l < r; ++l) {
      if (l == q) continue;
      residual -= factors.sigma(l) * factors.entry(rec.i, l) *
                  factors.entry(rec.j, l) * factors.entry(rec.k, l);
    }
    const double c = factors.entry(rec.j, q) * factors.entry(rec.k, q);
    num[rec.i] += rec.weight * residual * c;
    den[rec.i] += rec.weight * c * c;
  }

  auto col = factors.column(q);
  const double sigma_old = factors.sigma(q);
  double den_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) den_max = std::max(den_max, den[i]);
  // Faces whose sampled (j,k) pairs all sit on near-dead coordinates of the
  // column carry no usable signal for this solve; the ratio num/den would
  // amplify noise by 1/c. Treat them like untouched faces and keep their
  // recovered mass (relative floor, same rule as an exactly-zero denominator).
  const double den_floor = den_max * 1e-12;
  std::vector<double> update(n);
  for (std::size_t i = 0; i < n; ++i) {
    update[i] = den[i] > den_floor ? num[i] / den[i] : sigma_old * col[i];
    if (!std::isfinite(update[i]))
      throw numerical_error("wals_step: non-finite update at coordinate " +
                            std::to_string(i) + ", column " + std::to_string(q));
  }

  const double norm = std::sqrt(kernels::sumsq(update.data(), n));
  if (!(norm > 0.0))
    throw numerical_error("wals_step: zero update for column " + std::to_string(q));
  // Keep <U_new, U_old> >= 0; the flip moves into sigma so that
  // sigma_q U_q == update exactly and the represented term is unchanged.
  const double align = kernels::dot(update.data(), col.data(), n);
  const double s = align < 0.0 ? -1.0 : 1.0;
  factors.sigma(q) = s * norm;
  for (std::size_t i = 0; i < n; ++i) col[i] = s * update[i] / norm;

  apply_row_caps(col, caps);
}

WalsResult wals(const SampledTensor& samples, const WalsConfig& cfg,
                const CpFactors& init, const CpFactors* truth) {
  if (cfg.rank == 0) throw invalid_input("wals: rank must be >= 1");
  if (init.rank() != cfg.rank || init.dim() != samples.dim())
    throw invalid_input("wals: init shape does not match configuration");
  if (!cfg.row_caps.empty()) {
    if (cfg.row_caps.size() != samples.dim())
      throw invalid_input("wals: cap count does not match dimension");
    for (std::size_t l = 0; l < cfg.rank; ++l) {
      const auto col = init.column(l);
      for (std::size_t i = 0; i < samples.dim(); ++i)
        if (std::abs(col[i]) > cfg.row_caps[i] + 1e-9)
          throw invalid_input("wals: init violates row caps at row " +
                              std::to_string(i));
    }
  }

  std::size_t b = cfg.iters;
  if (b == 0) {
    const double fro = std::max(samples.frobenius_estimate(), cfg.epsilon);
    const double raw =
        4.0 * std::sqrt(static_cast<double>(cfg.rank)) * std::log(fro / cfg.epsilon);
    b = static_cast<std::size_t>(std::clamp(std::ceil(raw), 1.0, 200.0));
  }

  std::vector<std::vector<std::uint32_t>> parts;
  std::vector<std::uint32_t> all;
  if (cfg.fresh_samples) {
    parts = split_omega(samples, cfg.rank * b, cfg.seed);
  } else {
    all.resize(samples.size());
    std::iota(all.begin(), all.end(), 0u);
  }

  WalsResult result;
  result.factors = init;
  result.iters_run = b;
  for (std::size_t t = 0; t < b; ++t) {
    for (std::size_t q = 0; q < cfg.rank; ++q) {
      const auto& subset = cfg.fresh_samples ? parts[t * cfg.rank + q] : all;
      wals_step(samples, subset, result.factors, q, cfg.row_caps);
    }
    SweepDiag diag;
    diag.sweep = t;
    diag.residual = weighted_residual(samples, result.factors);
    if (truth) diag.d_inf = d_inf(result.factors, *truth);
    result.sweeps.push_back(diag);
  }
  // The sign-aligned iteration may settle on the (-sigma, -U) representation
  // of a term; fold back so the output carries positive weights.
  for (std::size_t l = 0; l < cfg.rank; ++l) {
    if (result.factors.sigma(l) < 0.0) {
      result.factors.sigma(l) = -result.factors.sigma(l);
      for (auto& x : result.factors.column(l)) x = -x;
    }
  }
  return result;
}

}  // namespace tensamp
