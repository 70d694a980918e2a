#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tensamp/factorize.hpp"
#include "tensamp/sampling.hpp"

namespace tensamp {

/// key=value configuration, one pair per line, '#' starts a comment.
class KvConfig {
 public:
  static KvConfig parse(std::istream& in);
  static KvConfig parse_file(const std::string& path);

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_doubles(const std::string& key,
                                  const std::vector<double>& fallback) const;
  std::vector<std::string> get_strings(const std::string& key,
                                       const std::vector<std::string>& fallback) const;
  void set(const std::string& key, const std::string& value);

 private:
  std::map<std::string, std::string> values_;
};

/// Seeds 1..count shifted by base.
std::vector<std::uint64_t> seed_range(std::size_t count, std::uint64_t base = 0);

// ---- Sparsification error sweeps (figure family 1 and 2) ----------------

struct SparsifySweepParams {
  std::size_t n = 100;
  std::size_t p = 50;
  double a = 0.5;
  std::vector<Family> dists = {Family::uniform, Family::l2, Family::sum_l3,
                               Family::tensor_ls};
  std::vector<std::uint64_t> m_grid;  // default {2,4,8,16,32} * n^1.5
  std::vector<std::uint64_t> p_grid;  // fig2 only; default {10,20,40,80}
  std::uint64_t m_fixed = 0;          // fig2 only; default ceil(10 n^1.5)
  std::vector<std::uint64_t> seeds;   // default 1..20
  SampleMode mode = SampleMode::exact_bernoulli;
  FaceNorm face_norm = FaceNorm::spectral;  // per-face norm in the error metric
};

struct SweepRow {
  Family dist;
  std::uint64_t x;  // m for fig1, p for fig2
  std::uint64_t seed;
  double l22_error;
};

std::vector<SweepRow> run_fig1(const SparsifySweepParams& params);
std::vector<SweepRow> run_fig2(const SparsifySweepParams& params);
void write_fig1_csv(const SparsifySweepParams&, const std::vector<SweepRow>&,
                    std::ostream&);
void write_fig2_csv(const SparsifySweepParams&, const std::vector<SweepRow>&,
                    std::ostream&);
SparsifySweepParams sweep_params_from_config(const KvConfig& cfg, bool fig2);

// ---- Completion / factorization trials (figure family 3) ----------------

struct CompletionTrialParams {
  std::size_t n = 50;
  std::size_t r = 3;
  double a = 0.5;
  Family dist = Family::tensor_ls;
  std::uint64_t m = 0;  // 0 = ceil(10 n^1.5 r)
  std::size_t wals_iters = 30;
  std::size_t rtpm_restarts = 30;
  std::size_t rtpm_iterations = 100;
  SampleMode mode = SampleMode::exact_bernoulli;
};

/// One seeded exact-completion run: biased orthogonal truth, sampling under
/// the chosen family, RTPM init thresholded at 2||(U*)^i||, WALS with the
/// same caps. Returns the matched factor RMSE.
double completion_trial_rmse(const CompletionTrialParams& params, std::uint64_t seed);

struct NoisyTrialParams {
  std::size_t n = 40;
  std::size_t r = 5;
  double a = 0.5;
  double noise_fro = 0.0;
  double flatness_constant = 4.5;
  double c_constant = 1.0;
  Family dist = Family::noisy_mixture;  // or uniform / l2 baselines
  std::uint64_t m = 0;
  std::size_t wals_iters = 30;
  std::size_t rtpm_restarts = 30;
  std::size_t rtpm_iterations = 100;
};

/// One seeded noisy-factorization run. The proposed distribution goes
/// through the two-pass pipeline; uniform/l2 baselines sample the same noisy
/// tensor with the same budget and share the nu-based caps.
double noisy_trial_rmse(const NoisyTrialParams& params, std::uint64_t seed);

struct Fig3aParams {
  std::size_t n = 50;
  std::size_t r = 5;
  std::vector<double> a_grid = {0.0, 0.5, 1.0, 1.5};
  std::vector<Family> dists = {Family::l2, Family::tensor_ls};
  std::vector<std::uint64_t> seeds;  // default 1..20
  double rmse_threshold = 0.01;
  double success_target = 0.8;
  std::uint64_t m_min = 0;  // default n
  std::uint64_t m_max = 0;  // default n^3
  std::size_t wals_iters = 30;
};

struct Fig3aRow {
  Family dist;
  double a;
  std::optional<std::uint64_t> m_star;  // empty when not reached within range
};

std::vector<Fig3aRow> run_fig3a(const Fig3aParams& params);
void write_fig3a_csv(const Fig3aParams&, const std::vector<Fig3aRow>&, std::ostream&);
Fig3aParams fig3a_from_config(const KvConfig& cfg);

struct Fig3bParams {
  std::size_t n = 40;
  std::size_t r = 5;
  double a = 0.5;
  std::vector<double> noise_grid;  // absolute ||E||_F values
  std::vector<Family> dists = {Family::noisy_mixture, Family::uniform, Family::l2};
  std::vector<std::uint64_t> seeds;  // default 1..20
  double flatness_constant = 4.5;
  std::uint64_t m = 0;
  std::size_t wals_iters = 30;
};

struct Fig3bRow {
  Family dist;
  double noise_fro;
  std::uint64_t seed;
  double factor_rmse;
};

std::vector<Fig3bRow> run_fig3b(const Fig3bParams& params);
void write_fig3b_csv(const Fig3bParams&, const std::vector<Fig3bRow>&, std::ostream&);
Fig3bParams fig3b_from_config(const KvConfig& cfg);

}  // namespace tensamp
