#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "tensamp/errors.hpp"
#include "tensamp/rng.hpp"
#include "tensamp/sampling.hpp"
#include "tensamp/synth.hpp"

using namespace tensamp;

namespace {

double exhaustive_mass(const EntryDistribution& d) {
  const std::size_t n = d.dim();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) acc += d.prob(i, j, k);
  return acc;
}

std::vector<double> random_norms(std::size_t n, std::uint64_t seed) {
  auto s = rng::Stream(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = 0.05 + s.u01();
  return out;
}

DenseTensor3 random_dense(std::size_t n, std::uint64_t seed) {
  auto s = rng::Stream(seed);
  return DenseTensor3::from_wedge(
      n, [&](std::size_t, std::size_t, std::size_t) { return s.gaussian(); });
}

}  // namespace

TEST_CASE("normalization: every family sums to one exhaustively") {
  for (const std::size_t n : {5u, 10u, 20u}) {
    for (const std::uint64_t seed : {1u, 2u, 3u}) {
      const auto norms = random_norms(n, seed * 10 + n);
      const DenseTensor3 t = random_dense(n, seed * 100 + n);
      const std::vector<EntryDistribution> dists = {
          EntryDistribution::uniform(n),
          EntryDistribution::l1(t),
          EntryDistribution::l2(t),
          EntryDistribution::sum_l3(norms),
          EntryDistribution::prod_l3(norms),
          EntryDistribution::from_samples(norms),
          EntryDistribution::from_factor_rows(norms),
          EntryDistribution::noisy_mixture(t),
      };
      for (const auto& d : dists)
        CHECK(exhaustive_mass(d) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("symmetry: p is invariant under all six index permutations") {
  const std::size_t n = 6;
  const auto norms = random_norms(n, 9);
  const DenseTensor3 t = random_dense(n, 10);
  const std::vector<EntryDistribution> dists = {
      EntryDistribution::uniform(n),       EntryDistribution::l1(t),
      EntryDistribution::l2(t),            EntryDistribution::sum_l3(norms),
      EntryDistribution::prod_l3(norms),   EntryDistribution::from_samples(norms),
      EntryDistribution::noisy_mixture(t),
  };
  for (const auto& d : dists)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          const double p = d.prob(i, j, k);
          CHECK(d.prob(i, k, j) == doctest::Approx(p).epsilon(1e-14));
          CHECK(d.prob(j, i, k) == doctest::Approx(p).epsilon(1e-14));
          CHECK(d.prob(k, j, i) == doctest::Approx(p).epsilon(1e-14));
        }
}

TEST_CASE("from_samples: single nonzero row") {
  const std::vector<double> norms = {1.0, 0.0, 0.0};
  const auto d = EntryDistribution::from_samples(norms);
  CHECK(d.prob(0, 0, 0) == doctest::Approx(1.0 / 3.0));
  CHECK(d.prob(0, 1, 2) == 0.0);
}

TEST_CASE("from_samples: equal rows are uniform") {
  const std::vector<double> norms(4, 0.7);
  const auto d = EntryDistribution::from_samples(norms);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(d.prob(i, (i + 1) % 4, (i + 2) % 4) == doctest::Approx(1.0 / 64.0));
  CHECK(exhaustive_mass(d) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("from_samples: n=4 norms (1,2,3,4) normalize exactly") {
  const std::vector<double> norms = {1, 2, 3, 4};
  CHECK(exhaustive_mass(EntryDistribution::from_samples(norms)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("from_factor_rows: uniform rows and one-hot") {
  const std::vector<double> flat(5, 1.0);
  const auto uniform_like = EntryDistribution::from_factor_rows(flat);
  CHECK(uniform_like.prob(0, 3, 4) == doctest::Approx(1.0 / 125.0));

  const std::vector<double> onehot = {1.0, 0.0, 0.0, 0.0, 0.0};
  const auto d = EntryDistribution::from_factor_rows(onehot);
  CHECK(d.prob(0, 0, 0) == doctest::Approx(1.0 / 5.0));

  const auto power = random_norms(10, 77);
  CHECK(exhaustive_mass(EntryDistribution::from_factor_rows(power)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sum_l3 and prod_l3: one-hot rows") {
  const std::size_t n = 4;
  std::vector<double> onehot(n, 0.0);
  onehot[0] = 1.0;
  const auto sum_d = EntryDistribution::sum_l3(onehot);
  // Entries with the hot row in exactly one slot keep 1/(3 n^2).
  CHECK(sum_d.prob(0, 1, 2) == doctest::Approx(1.0 / (3.0 * n * n)));
  CHECK(sum_d.prob(1, 2, 3) == 0.0);
  CHECK(exhaustive_mass(sum_d) == doctest::Approx(1.0).epsilon(1e-12));

  const auto prod_d = EntryDistribution::prod_l3(onehot);
  CHECK(prod_d.prob(0, 0, 0) == doctest::Approx(1.0 / n));
  // Two hot slots keep the single a_0 a_0 product term; triples touching the
  // hot row in at most one slot carry no mass.
  CHECK(prod_d.prob(0, 0, 1) == doctest::Approx(1.0 / (3.0 * n)));
  CHECK(prod_d.prob(0, 1, 2) == 0.0);
  CHECK(prod_d.prob(1, 2, 3) == 0.0);
  CHECK(exhaustive_mass(prod_d) == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> flat(n, 0.3);
  CHECK(EntryDistribution::sum_l3(flat).prob(1, 2, 3) == doctest::Approx(1.0 / 64.0));
  CHECK(EntryDistribution::prod_l3(flat).prob(1, 2, 3) == doctest::Approx(1.0 / 64.0));
}

TEST_CASE("l1 / l2 / uniform examples") {
  // Single-entry tensor: that triple takes all the mass under l2.
  DenseTensor3 single = DenseTensor3::from_wedge(
      3, [](std::size_t i, std::size_t j, std::size_t k) {
        return i == 1 && j == 1 && k == 1 ? 2.0 : 0.0;
      });
  CHECK(EntryDistribution::l2(single).prob(1, 1, 1) == doctest::Approx(1.0));

  const auto uni = EntryDistribution::uniform(2);
  CHECK(uni.prob(0, 1, 0) == doctest::Approx(1.0 / 8.0));

  DenseTensor3 ones = DenseTensor3::from_wedge(
      2, [](std::size_t, std::size_t, std::size_t) { return 1.0; });
  CHECK(EntryDistribution::l1(ones).prob(1, 0, 1) == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("l1/l2 reject the zero tensor") {
  DenseTensor3 zero = DenseTensor3::from_wedge(
      3, [](std::size_t, std::size_t, std::size_t) { return 0.0; });
  CHECK_THROWS_AS(EntryDistribution::l1(zero), invalid_input);
  CHECK_THROWS_AS(EntryDistribution::l2(zero), invalid_input);
  CHECK_THROWS_AS(EntryDistribution::noisy_mixture(zero), invalid_input);
}

TEST_CASE("all-zero row norms rejected") {
  const std::vector<double> zeros(4, 0.0);
  CHECK_THROWS_AS(EntryDistribution::from_samples(zeros), invalid_input);
}

TEST_CASE("noisy mixture: rank-1 basis tensor example (n=4)") {
  CpFactors f(4, 1);
  f.column(0)[0] = 1.0;
  f.sigma(0) = 1.0;
  const DenseTensor3 t = cp_reconstruct(f);
  const auto d = EntryDistribution::noisy_mixture(t);

  // nu = (1.5, 0.5, 0.5, 0.5), Z = (1.5^1.5 + 3 * 0.5^1.5)^2.
  CHECK(d.row_stat()[0] == doctest::Approx(1.5));
  CHECK(d.row_stat()[1] == doctest::Approx(0.5));
  const double z = std::pow(std::pow(1.5, 1.5) + 3.0 * std::pow(0.5, 1.5), 2.0);
  CHECK(d.norm_const() == doctest::Approx(z).epsilon(1e-12));
  const double p000 = 0.5 * 3.0 * std::pow(1.5, 3.0) / (3.0 * 4.0 * z) + 0.5;
  CHECK(d.prob(0, 0, 0) == doctest::Approx(p000).epsilon(1e-12));
  CHECK(exhaustive_mass(d) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("noisy mixture: constant tensor reduces to uniform") {
  DenseTensor3 ones = DenseTensor3::from_wedge(
      4, [](std::size_t, std::size_t, std::size_t) { return 1.0; });
  const auto d = EntryDistribution::noisy_mixture(ones);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(d.prob(i, 0, 3) == doctest::Approx(1.0 / 64.0).epsilon(1e-12));
}

TEST_CASE("AM-GM floor for the factor-row distribution") {
  // p >= ||U^i|| ||U^j|| ||U^k|| / (n (sum ||U^i||^{3/2})^2), exhaustively.
  const std::size_t n = 15;
  const auto norms = random_norms(n, 4);
  const auto d = EntryDistribution::from_factor_rows(norms);
  double a_sum = 0.0;
  for (const double r : norms) a_sum += std::pow(r, 1.5);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double floor =
            norms[i] * norms[j] * norms[k] / (n * a_sum * a_sum);
        CHECK(d.prob(i, j, k) >= floor - 1e-15);
      }
}

TEST_CASE("draw: p_hat = 1 triples always included in bernoulli mode") {
  CpFactors f(5, 1);
  f.column(0)[0] = 1.0;
  f.sigma(0) = 1.0;
  const auto d = EntryDistribution::from_factor_rows(f.row_norms());
  // p(0,0,0) = 1/n, so m = n forces p_hat = 1 there; triples with the hot
  // row in two slots keep mass 1/(3n) and may or may not be drawn.
  SamplePlan plan{5, SampleMode::exact_bernoulli, 123};
  const auto result = draw(d, plan);
  bool found = false;
  for (const auto& rec : result.records)
    if (rec.i == 0 && rec.j == 0 && rec.k == 0) {
      found = true;
      CHECK(rec.p_hat == 1.0);
    }
  CHECK(found);
  CHECK(result.deterministic_count == 1);
  CHECK(result.deterministic_count + result.random_count == result.records.size());

  // Certainty across seeds.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SamplePlan p2{5, SampleMode::exact_bernoulli, seed};
    const auto r2 = draw(d, p2);
    bool present = false;
    for (const auto& rec : r2.records)
      present = present || (rec.i == 0 && rec.j == 0 && rec.k == 0);
    CHECK(present);
  }
}

TEST_CASE("draw: count concentration over seeds") {
  const std::size_t n = 20;
  const auto norms = random_norms(n, 17);
  const auto d = EntryDistribution::from_samples(norms);
  const std::uint64_t m = 500;

  double expected = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        expected += std::min(static_cast<double>(m) * d.prob(i, j, k), 1.0);

  double total = 0.0;
  const int runs = 200;
  for (int run = 0; run < runs; ++run) {
    SamplePlan plan{m, SampleMode::exact_bernoulli, static_cast<std::uint64_t>(run)};
    total += static_cast<double>(draw(d, plan).records.size());
  }
  const double mean = total / runs;
  CHECK(std::abs(mean - expected) / expected < 0.05);
}

TEST_CASE("draw: modes agree within the analytic p_hat bound") {
  // 1 - (1-p)^m differs from min(mp, 1) by at most (mp)^2 / 2.
  const std::size_t n = 12;
  const auto norms = random_norms(n, 3);
  const auto d = EntryDistribution::from_samples(norms);
  const std::uint64_t m = 200;
  SamplePlan cat{m, SampleMode::fast_categorical, 5};
  const auto result = draw(d, cat);
  REQUIRE(result.records.size() > 10);
  for (const auto& rec : result.records) {
    const double p = d.prob(rec.i, rec.j, rec.k);
    const double mp = std::min(static_cast<double>(m) * p, 1.0);
    CHECK(rec.p_hat <= mp + 1e-12);
    CHECK(mp - rec.p_hat <= 0.5 * mp * mp + 1e-12);
  }
}

TEST_CASE("draw is deterministic per seed and thread-independent layout") {
  const std::size_t n = 10;
  const auto norms = random_norms(n, 30);
  const auto d = EntryDistribution::from_samples(norms);
  SamplePlan plan{100, SampleMode::exact_bernoulli, 999};
  const auto a = draw(d, plan);
  const auto b = draw(d, plan);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t idx = 0; idx < a.records.size(); ++idx) {
    CHECK(a.records[idx].i == b.records[idx].i);
    CHECK(a.records[idx].p_hat == b.records[idx].p_hat);
  }
}

TEST_CASE("reweight: weights and unbiasedness") {
  DrawResult draws;
  draws.records = {{0, 0, 0, 1.0}, {1, 0, 1, 0.25}};
  const std::vector<double> values = {2.0, 3.0};
  const auto sampled = reweight(2, draws, values);
  CHECK(sampled.records()[0].weight == doctest::Approx(1.0));
  CHECK(sampled.records()[1].weight == doctest::Approx(4.0));

  // Monte-Carlo unbiasedness of value*weight on a small instance.
  const std::size_t n = 4;
  const DenseTensor3 t = random_dense(n, 8);
  const auto d = EntryDistribution::l2(t);
  const std::uint64_t m = 20;
  const int runs = 2000;
  Cube mean(n);
  for (int run = 0; run < runs; ++run) {
    SamplePlan plan{m, SampleMode::exact_bernoulli, static_cast<std::uint64_t>(run)};
    const auto draws_run = draw(d, plan);
    for (const auto& rec : draws_run.records)
      mean.at(rec.i, rec.j, rec.k) += t.at(rec.i, rec.j, rec.k) / rec.p_hat / runs;
  }
  std::size_t outside = 0, checked = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double p_hat =
            std::min(static_cast<double>(m) * d.prob(i, j, k), 1.0);
        if (p_hat <= 0.0) continue;
        const double value = t.at(i, j, k);
        const double variance =
            value * value * (1.0 - p_hat) / p_hat / runs;
        ++checked;
        if (std::abs(mean.at(i, j, k) - value) > 3.0 * std::sqrt(variance) + 1e-12)
          ++outside;
      }
  // 3-sigma two-sided leaves ~0.3% expected misses.
  CHECK(static_cast<double>(outside) <= 0.02 * static_cast<double>(checked) + 2.0);
}
