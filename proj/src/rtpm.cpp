#include "tensamp/rtpm.hpp"

#include <cmath>
#include <limits>

#include "tensamp/errors.hpp"
#include "tensamp/kernels.hpp"
#include "tensamp/parallel.hpp"
#include "tensamp/rng.hpp"

namespace tensamp {

std::vector<double> DenseTvp::tvp(std::span<const double> u,
                                  std::span<const double> v) const {
  return tensamp::tvp(t_, u, v);
}

std::vector<double> SampledTvp::tvp(std::span<const double> u,
                                    std::span<const double> v) const {
  return tensamp::tvp(t_, u, v);
}

std::vector<double> CpTvp::tvp(std::span<const double> u,
                               std::span<const double> v) const {
  return tensamp::tvp(f_, u, v);
}

void DeflatedTvp::deflate(double lambda, std::vector<double> u) {
  lambdas_.push_back(lambda);
  us_.push_back(std::move(u));
}

std::vector<double> DeflatedTvp::tvp(std::span<const double> u,
                                     std::span<const double> v) const {
  std::vector<double> out = base_.tvp(u, v);
  const std::size_t n = out.size();
  for (std::size_t l = 0; l < lambdas_.size(); ++l) {
    const double* col = us_[l].data();
    const double cu = kernels::dot(col, u.data(), n);
    const double cv = kernels::dot(col, v.data(), n);
    kernels::axpy(-lambdas_[l] * cu * cv, col, out.data(), n);
  }
  return out;
}

namespace {

constexpr double kCollapseNorm = 1e-14;
constexpr std::uint64_t kRestartTag = 0x9717u;

// N power iterations from a given start. Returns false if the iterate
// collapses (||T(I,u,u)|| below threshold).
bool power_iterate(const TvpSource& t, std::vector<double>& u, std::size_t iters) {
  const std::size_t n = u.size();
  for (std::size_t it = 0; it < iters; ++it) {
    std::vector<double> w = t.tvp(u, u);
    const double norm = std::sqrt(kernels::sumsq(w.data(), n));
    if (norm < kCollapseNorm) return false;
    for (std::size_t i = 0; i < n; ++i) u[i] = w[i] / norm;
  }
  return true;
}

double rayleigh(const TvpSource& t, std::span<const double> u) {
  const auto w = t.tvp(u, u);
  return kernels::dot(u.data(), w.data(), u.size());
}

}  // namespace

PowerExtractResult power_extract(const TvpSource& t, const RtpmOptions& opts) {
  const std::size_t n = t.dim();
  if (opts.restarts == 0) throw invalid_input("power_extract: need at least one restart");

  struct Candidate {
    double lambda = -std::numeric_limits<double>::infinity();
    std::vector<double> u;
    bool ok = false;
  };
  std::vector<Candidate> candidates(opts.restarts);

  parallel_for(opts.restarts, [&](std::size_t restart) {
    auto stream = rng::Stream::derive(opts.seed, kRestartTag, restart);
    std::vector<double> u = rng::unit_vector(stream, n);
    if (!power_iterate(t, u, opts.iterations)) return;
    candidates[restart].lambda = rayleigh(t, u);
    candidates[restart].u = std::move(u);
    candidates[restart].ok = true;
  });

  // Deterministic argmax: strict improvement, so ties keep the lowest index.
  std::size_t best = opts.restarts;
  for (std::size_t idx = 0; idx < opts.restarts; ++idx) {
    if (!candidates[idx].ok) continue;
    if (best == opts.restarts || candidates[idx].lambda > candidates[best].lambda)
      best = idx;
  }
  if (best == opts.restarts)
    throw numerical_error("power_extract: all restarts collapsed (degenerate tensor)");

  std::vector<double> u = std::move(candidates[best].u);
  if (!power_iterate(t, u, opts.iterations))
    throw numerical_error("power_extract: iterate collapsed during polish");
  return {rayleigh(t, u), std::move(u)};
}

CpFactors rtpm(const TvpSource& t, std::size_t r, const RtpmOptions& opts) {
  if (r < 1) throw invalid_input("rtpm: rank must be >= 1");
  const std::size_t n = t.dim();
  DeflatedTvp deflated(t);
  CpFactors factors(n, r);

  for (std::size_t l = 0; l < r; ++l) {
    RtpmOptions round = opts;
    std::uint64_t state = opts.seed ^ (l * 0x9e3779b97f4a7c15ULL);
    round.seed = rng::splitmix64(state);
    auto [lambda, u] = power_extract(deflated, round);

    // Largest-magnitude coordinate positive; odd order moves the flip into
    // lambda.
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(u[i]) > std::abs(u[arg])) arg = i;
    if (u[arg] < 0.0) {
      for (auto& x : u) x = -x;
      lambda = -lambda;
    }

    factors.sigma(l) = lambda;
    std::copy(u.begin(), u.end(), factors.column(l).begin());
    deflated.deflate(lambda, std::move(u));
  }
  return factors;
}

}  // namespace tensamp
