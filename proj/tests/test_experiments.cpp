#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tensamp/errors.hpp"
#include "tensamp/experiments.hpp"

using namespace tensamp;

TEST_CASE("KvConfig parses key=value with comments") {
  std::stringstream in("# comment\nn = 12\ndists = uniform, l2\n\nm_grid=10,20\n");
  const KvConfig cfg = KvConfig::parse(in);
  CHECK(cfg.get_size("n", 0) == 12);
  CHECK(cfg.get_strings("dists", {}) == std::vector<std::string>{"uniform", "l2"});
  CHECK(cfg.get_doubles("m_grid", {}) == std::vector<double>{10, 20});
  CHECK(cfg.get_double("missing", 1.5) == 1.5);

  std::stringstream bad("this is not a pair\n");
  CHECK_THROWS_AS(KvConfig::parse(bad), invalid_input);
}

TEST_CASE("fig1: tiny run produces one row per cell, deterministically") {
  SparsifySweepParams params;
  params.n = 12;
  params.p = 6;
  params.a = 0.5;
  params.dists = {Family::uniform, Family::tensor_ls};
  params.m_grid = {60, 240};
  params.seeds = seed_range(3);

  const auto rows = run_fig1(params);
  REQUIRE(rows.size() == 2 * 2 * 3);
  std::ostringstream a, b;
  write_fig1_csv(params, rows, a);
  write_fig1_csv(params, run_fig1(params), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("dist,m,seed,l22_error") != std::string::npos);

  // Errors are finite and nonnegative.
  for (const auto& row : rows) {
    CHECK(row.l22_error >= 0.0);
    CHECK(std::isfinite(row.l22_error));
  }
}

TEST_CASE("fig1: empty distribution set is a usage error") {
  SparsifySweepParams params;
  params.dists.clear();
  params.m_grid = {10};
  params.seeds = seed_range(1);
  CHECK_THROWS_AS(run_fig1(params), invalid_input);
}

TEST_CASE("fig1: nonpositive m rejected") {
  SparsifySweepParams params;
  params.n = 8;
  params.p = 4;
  params.m_grid = {0};
  params.seeds = seed_range(1);
  CHECK_THROWS_AS(run_fig1(params), invalid_input);
}

TEST_CASE("fig2: error grows with p on biased inputs (statistical trend)") {
  SparsifySweepParams params;
  params.n = 16;
  params.a = 0.5;
  params.dists = {Family::tensor_ls};
  params.p_grid = {4, 32};
  params.m_fixed = 640;
  params.seeds = seed_range(8);

  const auto rows = run_fig2(params);
  auto median_at = [&](std::uint64_t p) {
    std::vector<double> errs;
    for (const auto& row : rows)
      if (row.x == p) errs.push_back(row.l22_error);
    std::sort(errs.begin(), errs.end());
    return errs[errs.size() / 2];
  };
  CHECK(median_at(32) > median_at(4));
}

TEST_CASE("completion_trial_rmse: proposed sampling recovers a small instance") {
  CompletionTrialParams params;
  params.n = 20;
  params.r = 2;
  params.a = 0.5;
  params.dist = Family::tensor_ls;
  params.wals_iters = 25;
  params.rtpm_restarts = 10;
  params.rtpm_iterations = 50;
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    hits += completion_trial_rmse(params, seed) < 0.01;
  CHECK(hits >= 4);
}

TEST_CASE("fig3a: proposed sampling's threshold is flat in the bias, l2's grows") {
  Fig3aParams params;
  params.n = 24;
  params.r = 2;
  params.a_grid = {0.0, 1.5};
  params.dists = {Family::l2, Family::tensor_ls};
  params.seeds = seed_range(6);
  params.wals_iters = 20;
  params.m_min = 24;
  const auto rows = run_fig3a(params);

  auto find = [&](Family f, double a) {
    for (const auto& row : rows)
      if (row.dist == f && row.a == a) return row.m_star;
    return std::optional<std::uint64_t>{};
  };
  const auto ls_flat = find(Family::tensor_ls, 0.0);
  const auto ls_biased = find(Family::tensor_ls, 1.5);
  const auto l2_flat = find(Family::l2, 0.0);
  const auto l2_biased = find(Family::l2, 1.5);

  REQUIRE(ls_flat.has_value());
  REQUIRE(ls_biased.has_value());
  const double hi = static_cast<double>(std::max(*ls_flat, *ls_biased));
  const double lo = static_cast<double>(std::min(*ls_flat, *ls_biased));
  CHECK(hi / lo <= 2.0);

  REQUIRE(l2_flat.has_value());
  // Strong bias pushes l2 past 2x its unbiased budget or out of range.
  CHECK((!l2_biased.has_value() || *l2_biased > 2 * *l2_flat));

  std::ostringstream csv;
  write_fig3a_csv(params, rows, csv);
  CHECK(csv.str().find("dist,a,m_star") != std::string::npos);
}

TEST_CASE("fig3b config defaults") {
  std::stringstream in("n=10\nseeds=2\nnoise_grid=0.001,0.002\n");
  const auto params = fig3b_from_config(KvConfig::parse(in));
  CHECK(params.n == 10);
  CHECK(params.seeds.size() == 2);
  REQUIRE(params.noise_grid.size() == 2);
  CHECK(params.dists.size() == 3);
}
