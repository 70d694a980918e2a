#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "oracles.hpp"
#include "tensamp/errors.hpp"
#include "tensamp/factorize.hpp"
#include "tensamp/metrics.hpp"
#include "tensamp/rng.hpp"
#include "tensamp/synth.hpp"

using namespace tensamp;

TEST_CASE("face_pass: all-ones and basis-vector examples (n = 4)") {
  const DenseTensor3 ones = DenseTensor3::from_wedge(
      4, [](std::size_t, std::size_t, std::size_t) { return 1.0; });
  DenseInput input(ones);
  const NuStats stats = face_pass(input);
  for (const double nu : stats.nu) CHECK(nu == doctest::Approx(1.0));
  CHECK(stats.z == doctest::Approx(16.0));
  CHECK(input.passes() == 1);

  CpFactors f(4, 1);
  f.column(0)[0] = 1.0;
  f.sigma(0) = 1.0;
  const DenseTensor3 basis_tensor = cp_reconstruct(f);
  DenseInput basis_input(basis_tensor);
  const NuStats basis = face_pass(basis_input);
  CHECK(basis.nu[0] == doctest::Approx(1.5));
  CHECK(basis.nu[1] == doctest::Approx(0.5));
  const double z = std::pow(std::pow(1.5, 1.5) + 3.0 * std::pow(0.5, 1.5), 2.0);
  CHECK(basis.z == doctest::Approx(z).epsilon(1e-12));
}

TEST_CASE("face_pass: Z <= 8 sqrt(n) on random tensors") {
  // Sharp bound: equal-face tensors reach nu_i = 2/sqrt(n) exactly, giving
  // Z = (n (2/sqrt(n))^{3/2})^2 = 8 sqrt(n).
  for (const std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    auto s = rng::Stream(seed);
    const std::size_t n = 6 + 2 * seed;
    const DenseTensor3 t = DenseTensor3::from_wedge(
        n, [&](std::size_t, std::size_t, std::size_t) { return s.gaussian(); });
    DenseInput input(t);
    CHECK(face_pass(input).z <= 8.0 * std::sqrt(static_cast<double>(n)) + 1e-12);
  }
}

TEST_CASE("generate_noise: exact frobenius target, symmetric, cap satisfied") {
  NoiseSpec spec;
  spec.frobenius_level = 0.25;
  const Cube noise = generate_noise(12, spec, 7);
  CHECK(frobenius_norm(noise) == doctest::Approx(0.25).epsilon(1e-12));

  const double cap = spec.flatness_constant * 0.25 / std::pow(12.0, 1.5);
  double max_abs = 0.0;
  for (const double v : noise.flat()) max_abs = std::max(max_abs, std::abs(v));
  CHECK(max_abs <= cap + 1e-15);

  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = i; j < 12; ++j)
      for (std::size_t k = j; k < 12; ++k) {
        CHECK(noise.at(i, j, k) == noise.at(k, j, i));
        CHECK(noise.at(i, j, k) == noise.at(j, k, i));
      }

  const Cube again = generate_noise(12, spec, 7);
  for (std::size_t idx = 0; idx < noise.flat().size(); ++idx)
    CHECK(noise.flat()[idx] == again.flat()[idx]);
}

TEST_CASE("generate_noise: literal flatness cap is unattainable for gaussians") {
  NoiseSpec spec;
  spec.frobenius_level = 1.0;
  spec.flatness_constant = 1.0;  // cap equals the RMS entry
  CHECK_THROWS_AS(generate_noise(10, spec, 3), numerical_error);
}

TEST_CASE("noise spec: compliant frobenius budget") {
  NoiseSpec spec;
  CHECK(spec.max_frobenius(2.0, 4) == doctest::Approx(2.0 / 400.0));
}

TEST_CASE("synthetic input streams the same faces as the dense assembly") {
  const CpFactors truth = gen_orthogonal_factors(9, 2, 0.5, 5, {{1.5, 1.0}});
  NoiseSpec spec;
  spec.frobenius_level = 0.01;
  const std::uint64_t noise_seed = 11;
  SyntheticInput input(truth, spec, noise_seed);

  Cube dense = cp_reconstruct(truth).cube();
  const Cube noise = generate_noise(9, spec, noise_seed);
  for (std::size_t idx = 0; idx < dense.flat().size(); ++idx)
    dense.flat_mut()[idx] += noise.flat()[idx];

  std::vector<double> buf(81);
  for (std::size_t i = 0; i < 9; ++i) {
    input.load_face(i, buf);
    const auto face = dense.face(i);
    for (std::size_t idx = 0; idx < 81; ++idx)
      CHECK(buf[idx] == doctest::Approx(face[idx]).epsilon(1e-12));
  }
}

TEST_CASE("factorize: exactly two passes and exact-rank recovery at zero noise") {
  const std::size_t n = 24, r = 2;
  const CpFactors truth = gen_orthogonal_factors(n, r, 0.5, 3, {{1.4, 1.0}});
  SyntheticInput input(truth, NoiseSpec{}, 0);

  FactorizeOptions opts;
  opts.rank = r;
  opts.iters = 25;
  opts.seed = 5;
  opts.rtpm_restarts = 12;
  opts.rtpm_iterations = 60;
  const FactorizeResult result = factorize(input, opts, &truth);
  CHECK(result.passes == 2);
  CHECK(factor_rmse(result.factors, truth) < 1e-3);
  // Init thresholds carried through WALS.
  for (std::size_t l = 0; l < r; ++l)
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(result.factors.entry(i, l)) <= 2.0 * result.nu.nu[i] + 1e-12);
}

TEST_CASE("factorize: budget decay does not hurt (two budgets, fixed noise)") {
  const std::size_t n = 16, r = 2;
  const CpFactors truth = gen_orthogonal_factors(n, r, 0.5, 9, {{1.2, 1.0}});
  NoiseSpec spec;
  spec.frobenius_level = 0.002;

  auto median_rmse = [&](std::uint64_t m) {
    std::vector<double> errs;
    for (std::uint64_t seed = 1; seed <= 7; ++seed) {
      SyntheticInput input(truth, spec, seed);
      FactorizeOptions opts;
      opts.m = m;
      opts.rank = r;
      opts.iters = 20;
      opts.seed = seed;
      opts.rtpm_restarts = 10;
      opts.rtpm_iterations = 50;
      errs.push_back(factor_rmse(factorize(input, opts, &truth).factors, truth));
    }
    std::sort(errs.begin(), errs.end());
    return errs[errs.size() / 2];
  };

  const auto base = static_cast<std::uint64_t>(
      std::ceil(10.0 * std::pow(static_cast<double>(n), 1.5) * r));
  CHECK(median_rmse(2 * base) <= median_rmse(base) * 1.5 + 1e-6);
}

TEST_CASE("tensor bin round trip and error paths") {
  const CpFactors f = gen_orthogonal_factors(6, 2, 0.0, 21, {{2.0, 1.0}});
  const DenseTensor3 t = cp_reconstruct(f);
  const std::string path = "test_tensor_roundtrip.bin";
  save_tensor_bin(t, path);
  const DenseTensor3 loaded = load_tensor_bin(path);
  REQUIRE(loaded.dim() == 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      for (std::size_t k = 0; k < 6; ++k)
        CHECK(loaded.at(i, j, k) == t.at(i, j, k));
  std::remove(path.c_str());

  const std::string bad = "test_tensor_bad.bin";
  {
    std::ofstream out(bad, std::ios::binary);
    out << "NOPE";
  }
  CHECK_THROWS_AS(load_tensor_bin(bad), invalid_input);
  std::remove(bad.c_str());
}
