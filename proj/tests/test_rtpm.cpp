#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "tensamp/errors.hpp"
#include "tensamp/metrics.hpp"
#include "tensamp/rng.hpp"
#include "tensamp/rtpm.hpp"
#include "tensamp/sparsify.hpp"
#include "tensamp/synth.hpp"

using namespace tensamp;

TEST_CASE("power_extract: exact rank-1 fixed point") {
  auto s = rng::Stream(2);
  const auto u = rng::unit_vector(s, 9);
  CpFactors f(9, 1);
  std::copy(u.begin(), u.end(), f.column(0).begin());
  f.sigma(0) = 1.7;
  CpTvp source(f);

  RtpmOptions opts;
  opts.restarts = 5;
  opts.iterations = 5;  // rank-1 is a fixed point; a handful suffices
  opts.seed = 4;
  const auto [lambda, vec] = power_extract(source, opts);
  CHECK(std::abs(lambda) == doctest::Approx(1.7).epsilon(1e-10));
  double ip = 0.0;
  for (std::size_t i = 0; i < 9; ++i) ip += vec[i] * u[i];
  CHECK(std::abs(ip) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("power_extract: top weight of an orthogonal rank-3 tensor") {
  const std::vector<double> sigmas = {3.0, 2.0, 1.0};
  const CpFactors f = gen_orthogonal_factors(12, 3, 0.0, 8, sigmas);
  CpTvp source(f);
  RtpmOptions opts;
  opts.seed = 10;
  const auto [lambda, vec] = power_extract(source, opts);
  CHECK(lambda == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("power_extract: zero tensor is degenerate") {
  const Cube zero(6);
  DenseTvp source(zero);
  RtpmOptions opts;
  opts.restarts = 3;
  opts.iterations = 10;
  CHECK_THROWS_AS(power_extract(source, opts), numerical_error);
}

TEST_CASE("rtpm: exact orthogonal rank-2 recovery") {
  const CpFactors truth = gen_orthogonal_factors(10, 2, 0.5, 3);
  const DenseTensor3 t = cp_reconstruct(truth);
  DenseTvp source(t.cube());
  RtpmOptions opts;
  opts.seed = 77;
  const CpFactors est = rtpm(source, 2, opts);

  const auto match = match_factors(est, truth);
  for (std::size_t l = 0; l < 2; ++l) {
    double ip = 0.0;
    for (std::size_t i = 0; i < 10; ++i)
      ip += est.entry(i, match.perm[l]) * truth.entry(i, l);
    CHECK(std::abs(ip) > 1.0 - 1e-8);
    CHECK(std::abs(est.sigma(match.perm[l])) == doctest::Approx(1.0).epsilon(1e-8));
  }
  // Sigma extracted in decreasing magnitude on exact input.
  CHECK(std::abs(est.sigma(0)) >= std::abs(est.sigma(1)) - 1e-9);

  // Residual after removing both components.
  DeflatedTvp residual(source);
  for (std::size_t l = 0; l < 2; ++l) {
    std::vector<double> col(est.column(l).begin(), est.column(l).end());
    residual.deflate(est.sigma(l), std::move(col));
  }
  auto s = rng::Stream(4);
  const auto probe = rng::unit_vector(s, 10);
  const auto res = residual.tvp(probe, probe);
  double norm = 0.0;
  for (const double x : res) norm += x * x;
  CHECK(std::sqrt(norm) < 1e-8);
}

TEST_CASE("rtpm: r = 1 on rank-1 leaves negligible residual") {
  auto s = rng::Stream(40);
  const auto u = rng::unit_vector(s, 8);
  CpFactors f(8, 1);
  std::copy(u.begin(), u.end(), f.column(0).begin());
  f.sigma(0) = 2.0;
  const DenseTensor3 t = cp_reconstruct(f);
  DenseTvp source(t.cube());
  RtpmOptions opts;
  opts.seed = 5;
  const CpFactors est = rtpm(source, 1, opts);

  DeflatedTvp residual(source);
  std::vector<double> col(est.column(0).begin(), est.column(0).end());
  residual.deflate(est.sigma(0), std::move(col));
  const auto res = residual.tvp(u, u);
  double norm = 0.0;
  for (const double x : res) norm += x * x;
  CHECK(std::sqrt(norm) < 1e-10);
}

TEST_CASE("deflated tvp equals dense deflation oracle") {
  const CpFactors truth = gen_orthogonal_factors(7, 2, 0.0, 6, {{2.0, 1.0}});
  const DenseTensor3 t = cp_reconstruct(truth);
  DenseTvp base(t.cube());

  DeflatedTvp deflated(base);
  std::vector<double> col(truth.column(0).begin(), truth.column(0).end());
  deflated.deflate(2.0, std::move(col));

  // Dense oracle: materialize T - 2 u^3 and contract by triple loop.
  CpFactors remaining(7, 1);
  std::copy(truth.column(1).begin(), truth.column(1).end(),
            remaining.column(0).begin());
  remaining.sigma(0) = 1.0;
  const Cube dense_rest = oracles::cp_triple_loop(remaining);

  auto s = rng::Stream(9);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> u(7), v(7);
    for (auto& x : u) x = s.gaussian();
    for (auto& x : v) x = s.gaussian();
    const auto got = deflated.tvp(u, v);
    const auto want = oracles::tvp_triple_loop(dense_rest, u, v);
    for (std::size_t i = 0; i < 7; ++i)
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
  }
}

TEST_CASE("rtpm: sign convention and unit columns") {
  const CpFactors truth = gen_orthogonal_factors(9, 2, 0.0, 14, {{2.5, 1.5}});
  const DenseTensor3 t = cp_reconstruct(truth);
  DenseTvp source(t.cube());
  RtpmOptions opts;
  opts.seed = 3;
  const CpFactors est = rtpm(source, 2, opts);
  est.check_unit_columns(1e-10);
  for (std::size_t l = 0; l < 2; ++l) {
    const auto col = est.column(l);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < 9; ++i)
      if (std::abs(col[i]) > std::abs(col[arg])) arg = i;
    CHECK(col[arg] > 0.0);
  }
}

TEST_CASE("rtpm init quality on a sparsified rank-20 tensor (frozen fixture)") {
  // n = 50, 20 orthonormalized sample columns (rank-20, unit weights),
  // m = 20 n^1.5. All weights equal is the hardest extraction regime and the
  // initialization bounds' premise (spectral error << sigma_min / r) is out
  // of reach at this budget, so the thresholds below are frozen from pilot
  // runs at exactly these parameters: worst matched-column error was in
  // [0.57, 1.42] across 20 seeds and the median column error never exceeded
  // 0.49.
  const std::size_t n = 50, p = 20;
  const auto m = static_cast<std::uint64_t>(std::ceil(20.0 * std::pow(50.0, 1.5)));
  int worst_ok = 0;
  double max_median = 0.0;
  for (int seed = 1; seed <= 20; ++seed) {
    const CpFactors truth = gen_orthogonal_factors(n, p, 0.0, seed);
    std::vector<double> rows(n * p);
    for (std::size_t l = 0; l < p; ++l)
      for (std::size_t i = 0; i < n; ++i) rows[i * p + l] = truth.entry(i, l);
    const SampleMatrix x(n, p, std::move(rows));
    const SampledTensor s = sparsify(x, m, seed);
    SampledTvp source(s);
    RtpmOptions opts;
    opts.seed = static_cast<std::uint64_t>(seed);
    const CpFactors est = rtpm(source, p, opts);
    const auto match = match_factors(est, truth);
    std::vector<double> errs;
    for (std::size_t l = 0; l < p; ++l) {
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d =
            match.sign[l] * est.entry(i, match.perm[l]) - truth.entry(i, l);
        err += d * d;
      }
      errs.push_back(std::sqrt(err));
    }
    std::sort(errs.begin(), errs.end());
    worst_ok += errs.back() < 1.6;
    max_median = std::max(max_median, errs[errs.size() / 2]);
  }
  CHECK(worst_ok >= 18);       // >= 90% of seeds
  CHECK(max_median < 0.6);
}

TEST_CASE("rtpm is deterministic per seed") {
  const CpFactors truth = gen_orthogonal_factors(8, 2, 0.5, 21);
  const DenseTensor3 t = cp_reconstruct(truth);
  DenseTvp source(t.cube());
  RtpmOptions opts;
  opts.restarts = 8;
  opts.iterations = 40;
  opts.seed = 1234;
  const CpFactors a = rtpm(source, 2, opts);
  const CpFactors b = rtpm(source, 2, opts);
  for (std::size_t l = 0; l < 2; ++l) {
    CHECK(a.sigma(l) == b.sigma(l));
    for (std::size_t i = 0; i < 8; ++i)
      CHECK(a.entry(i, l) == b.entry(i, l));
  }
}
