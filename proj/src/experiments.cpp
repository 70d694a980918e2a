#include "tensamp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "tensamp/errors.hpp"
#include "tensamp/metrics.hpp"
#include "tensamp/parallel.hpp"
#include "tensamp/rng.hpp"
#include "tensamp/sparsify.hpp"
#include "tensamp/synth.hpp"

namespace tensamp {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    const std::string field = trim(s.substr(pos, comma - pos));
    if (!field.empty()) out.push_back(field);
    pos = comma + 1;
    if (comma == s.size()) break;
  }
  return out;
}

std::uint64_t scaled_budget(std::size_t n, double multiple) {
  return static_cast<std::uint64_t>(
      std::ceil(multiple * std::pow(static_cast<double>(n), 1.5)));
}

}  // namespace

KvConfig KvConfig::parse(std::istream& in) {
  KvConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw invalid_input("config line " + std::to_string(lineno) +
                          ": expected key=value");
    cfg.values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return cfg;
}

KvConfig KvConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open config: " + path);
  return parse(in);
}

bool KvConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KvConfig::get(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KvConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw invalid_input("config key '" + key + "': bad number '" + it->second + "'");
  }
}

std::size_t KvConfig::get_size(const std::string& key, std::size_t fallback) const {
  return static_cast<std::size_t>(get_u64(key, fallback));
}

std::uint64_t KvConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw invalid_input("config key '" + key + "': bad integer '" + it->second + "'");
  }
}

std::vector<double> KvConfig::get_doubles(const std::string& key,
                                          const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const auto& field : split_commas(it->second)) {
    try {
      out.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw invalid_input("config key '" + key + "': bad number '" + field + "'");
    }
  }
  return out;
}

std::vector<std::string> KvConfig::get_strings(
    const std::string& key, const std::vector<std::string>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return split_commas(it->second);
}

void KvConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

std::vector<std::uint64_t> seed_range(std::size_t count, std::uint64_t base) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = base + i + 1;
  return seeds;
}

// ---- fig1 / fig2 ---------------------------------------------------------

namespace {

struct SweepCell {
  Family dist;
  std::uint64_t x;
  std::uint64_t seed;
};

// Error of sampling the seeded moment tensor with (dist, m) at this seed.
// The tensor_ls arm follows the figures' definition of the proposed
// distribution: the 3/2-exponent row-norm product (the completion form)
// applied to the sample-matrix row norms. The cubed-exponent variant is the
// sparsification algorithm's own distribution and stays behind sparsify().
double sparsify_cell_error(std::size_t n, std::size_t p, double a,
                           std::uint64_t seed, Family dist, std::uint64_t m,
                           SampleMode mode, FaceNorm face_norm) {
  const SampleMatrix x = gen_samples(n, p, a, seed);
  const DenseTensor3 t = moment_tensor(x);
  const SampledTensor sampled = [&] {
    if (dist != Family::tensor_ls) return sample_moment_tensor(x, dist, m, seed, mode);
    const auto d = EntryDistribution::from_factor_rows(row_norm_pass(x));
    SamplePlan plan{m, mode, seed};
    const auto draws = draw(d, plan);
    std::vector<double> values(draws.records.size());
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
      const auto& rec = draws.records[idx];
      values[idx] = moment_entry(x, rec.i, rec.j, rec.k);
    }
    return reweight(n, draws, values);
  }();
  // Error faces can carry near-tied singular values; keep the power-method
  // estimate when the iteration budget runs out (it sits within the tie gap).
  L22Options opts;
  opts.face_norm = face_norm;
  opts.accept_on_max_iters = true;
  return l22_error(sampled, t, opts);
}

std::vector<SweepRow> run_sweep(const SparsifySweepParams& params, bool fig2) {
  std::vector<SweepCell> cells;
  if (params.dists.empty()) throw invalid_input("sweep: empty distribution set");
  if (params.seeds.empty()) throw invalid_input("sweep: empty seed set");
  if (!fig2) {
    if (params.m_grid.empty()) throw invalid_input("fig1: empty m grid");
    for (const auto m : params.m_grid)
      if (m < 1) throw invalid_input("fig1: nonpositive m in grid");
    for (const Family dist : params.dists)
      for (const auto m : params.m_grid)
        for (const auto seed : params.seeds) cells.push_back({dist, m, seed});
  } else {
    if (params.p_grid.empty()) throw invalid_input("fig2: empty p grid");
    for (const auto p : params.p_grid)
      if (p < 1) throw invalid_input("fig2: nonpositive p in grid");
    if (params.m_fixed < 1) throw invalid_input("fig2: nonpositive m");
    for (const Family dist : params.dists)
      for (const auto p : params.p_grid)
        for (const auto seed : params.seeds) cells.push_back({dist, p, seed});
  }

  std::vector<SweepRow> rows(cells.size());
  parallel_for(cells.size(), [&](std::size_t idx) {
    const auto& cell = cells[idx];
    const std::size_t p = fig2 ? cell.x : params.p;
    const std::uint64_t m = fig2 ? params.m_fixed : cell.x;
    rows[idx] = {cell.dist, cell.x, cell.seed,
                 sparsify_cell_error(params.n, p, params.a, cell.seed, cell.dist,
                                     m, params.mode, params.face_norm)};
  });
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.dist, a.x, a.seed) < std::tie(b.dist, b.x, b.seed);
  });
  return rows;
}

void write_sweep_csv(const SparsifySweepParams& params,
                     const std::vector<SweepRow>& rows, std::ostream& out,
                     bool fig2) {
  out << "# tensamp " << (fig2 ? "fig2" : "fig1") << " sweep\n";
  out << "# n=" << params.n;
  if (!fig2) out << " p=" << params.p;
  out << " a=" << g17(params.a) << " seeds=" << params.seeds.size() << " mode="
      << (params.mode == SampleMode::exact_bernoulli ? "bernoulli" : "categorical")
      << " face_norm="
      << (params.face_norm == FaceNorm::spectral ? "spectral" : "frobenius")
      << "\n";
  if (fig2) out << "# m=" << params.m_fixed << "\n";
  out << "dist," << (fig2 ? "p" : "m") << ",seed,l22_error\n";
  for (const auto& row : rows)
    out << family_name(row.dist) << ',' << row.x << ',' << row.seed << ','
        << g17(row.l22_error) << '\n';
}

}  // namespace

std::vector<SweepRow> run_fig1(const SparsifySweepParams& params) {
  return run_sweep(params, false);
}

std::vector<SweepRow> run_fig2(const SparsifySweepParams& params) {
  return run_sweep(params, true);
}

void write_fig1_csv(const SparsifySweepParams& params,
                    const std::vector<SweepRow>& rows, std::ostream& out) {
  write_sweep_csv(params, rows, out, false);
}

void write_fig2_csv(const SparsifySweepParams& params,
                    const std::vector<SweepRow>& rows, std::ostream& out) {
  write_sweep_csv(params, rows, out, true);
}

SparsifySweepParams sweep_params_from_config(const KvConfig& cfg, bool fig2) {
  SparsifySweepParams params;
  params.n = cfg.get_size("n", 100);
  params.p = cfg.get_size("p", 50);
  params.a = cfg.get_double("a", 0.5);
  std::vector<std::string> dist_names;
  for (const Family f : params.dists) dist_names.push_back(family_name(f));
  params.dists.clear();
  for (const auto& name : cfg.get_strings("dists", dist_names))
    params.dists.push_back(family_from_name(name));
  params.seeds = seed_range(cfg.get_size("seeds", 20), cfg.get_u64("seed_base", 0));
  const std::string mode = cfg.get("mode", "auto");
  if (mode == "bernoulli")
    params.mode = SampleMode::exact_bernoulli;
  else if (mode == "categorical")
    params.mode = SampleMode::fast_categorical;
  else if (mode == "auto")
    params.mode = SamplePlan::make_auto(params.n, 1, 0).mode;
  else
    throw invalid_input("config: mode must be bernoulli, categorical or auto");
  const std::string face_norm = cfg.get("face_norm", "spectral");
  if (face_norm == "spectral")
    params.face_norm = FaceNorm::spectral;
  else if (face_norm == "frobenius")
    params.face_norm = FaceNorm::frobenius;
  else
    throw invalid_input("config: face_norm must be spectral or frobenius");

  if (!fig2) {
    if (cfg.has("m_grid")) {
      params.m_grid.clear();
      for (const double m : cfg.get_doubles("m_grid", {}))
        params.m_grid.push_back(static_cast<std::uint64_t>(m));
    } else {
      for (const double mult : {2.0, 4.0, 8.0, 16.0, 32.0})
        params.m_grid.push_back(scaled_budget(params.n, mult));
    }
  } else {
    params.p_grid.clear();
    for (const double p : cfg.get_doubles("p_grid", {10, 20, 40, 80}))
      params.p_grid.push_back(static_cast<std::uint64_t>(p));
    params.m_fixed = cfg.get_u64("m", scaled_budget(params.n, 10.0));
  }
  return params;
}

// ---- completion trials (fig3a) -------------------------------------------

namespace {

EntryDistribution completion_dist(Family family, const CpFactors& truth) {
  switch (family) {
    case Family::tensor_ls:
      return EntryDistribution::from_factor_rows(truth.row_norms());
    case Family::sum_l3:
      return EntryDistribution::sum_l3(truth.row_norms());
    case Family::prod_l3:
      return EntryDistribution::prod_l3(truth.row_norms());
    case Family::uniform:
      return EntryDistribution::uniform(truth.dim());
    case Family::l1:
      return EntryDistribution::l1(cp_reconstruct(truth));
    case Family::l2:
      return EntryDistribution::l2(cp_reconstruct(truth));
    case Family::noisy_mixture:
      return EntryDistribution::noisy_mixture(cp_reconstruct(truth));
  }
  throw invalid_input("completion trial: unknown family");
}

double cp_entry(const CpFactors& f, std::uint32_t i, std::uint32_t j, std::uint32_t k) {
  double acc = 0.0;
  for (std::size_t l = 0; l < f.rank(); ++l)
    acc += f.sigma(l) * f.entry(i, l) * f.entry(j, l) * f.entry(k, l);
  return acc;
}

CpFactors thresholded_rtpm_init(const SampledTensor& samples, std::size_t r,
                                std::span<const double> caps,
                                std::size_t restarts, std::size_t iterations,
                                std::uint64_t seed) {
  RtpmOptions opts;
  opts.restarts = restarts;
  opts.iterations = iterations;
  std::uint64_t state = seed ^ 0x1247ull;
  opts.seed = rng::splitmix64(state);
  SampledTvp source(samples);
  CpFactors init = rtpm(source, r, opts);
  for (std::size_t l = 0; l < r; ++l) {
    if (init.sigma(l) < 0.0) {
      init.sigma(l) = -init.sigma(l);
      for (auto& x : init.column(l)) x = -x;
    }
    apply_row_caps(init.column(l), caps);
  }
  return init;
}

}  // namespace

double completion_trial_rmse(const CompletionTrialParams& params, std::uint64_t seed) {
  const CpFactors truth = gen_orthogonal_factors(params.n, params.r, params.a, seed);
  const EntryDistribution dist = completion_dist(params.dist, truth);

  std::uint64_t m = params.m;
  if (m == 0)
    m = static_cast<std::uint64_t>(
        std::ceil(10.0 * std::pow(static_cast<double>(params.n), 1.5) *
                  static_cast<double>(params.r)));
  SamplePlan plan{m, params.mode, seed};
  const DrawResult draws = draw(dist, plan);
  std::vector<double> values(draws.records.size());
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    const auto& d = draws.records[idx];
    values[idx] = cp_entry(truth, d.i, d.j, d.k);
  }
  const SampledTensor samples = reweight(params.n, draws, values);
  if (samples.size() == 0) return std::numeric_limits<double>::infinity();

  std::vector<double> caps;
  for (const double rn : truth.row_norms()) caps.push_back(2.0 * rn);

  // Degenerate extractions at starved budgets mean the trial failed to
  // recover; the threshold search treats that as an unsuccessful run.
  try {
    const CpFactors init =
        thresholded_rtpm_init(samples, params.r, caps, params.rtpm_restarts,
                              params.rtpm_iterations, seed);
    WalsConfig cfg;
    cfg.rank = params.r;
    cfg.iters = params.wals_iters;
    cfg.row_caps = caps;
    cfg.seed = seed ^ 0x3a1d5ull;
    const WalsResult result = wals(samples, cfg, init);
    return factor_rmse(result.factors, truth);
  } catch (const numerical_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

double noisy_trial_rmse(const NoisyTrialParams& params, std::uint64_t seed) {
  const CpFactors truth = gen_orthogonal_factors(params.n, params.r, params.a, seed);
  NoiseSpec spec;
  spec.frobenius_level = params.noise_fro;
  spec.flatness_constant = params.flatness_constant;
  spec.c_constant = params.c_constant;
  const std::uint64_t noise_seed = seed ^ 0xe015ull;

  std::uint64_t m = params.m;
  if (m == 0)
    m = static_cast<std::uint64_t>(
        std::ceil(10.0 * std::pow(static_cast<double>(params.n), 1.5) *
                  static_cast<double>(params.r)));

  if (params.dist == Family::noisy_mixture) {
    // Proposed pipeline: streamed faces, never a dense cube.
    SyntheticInput input(truth, params.noise_fro > 0.0 ? spec : NoiseSpec{}, noise_seed);
    FactorizeOptions opts;
    opts.m = m;
    opts.rank = params.r;
    opts.iters = params.wals_iters;
    opts.seed = seed;
    opts.rtpm_restarts = params.rtpm_restarts;
    opts.rtpm_iterations = params.rtpm_iterations;
    const FactorizeResult result = factorize(input, opts, &truth);
    return factor_rmse(result.factors, truth);
  }

  // Baselines need the dense noisy tensor for their distributions; the noise
  // realization matches the proposed arm (same seed and spec).
  Cube cube = cp_reconstruct(truth).cube();
  if (params.noise_fro > 0.0) {
    const Cube noise = generate_noise(params.n, spec, noise_seed);
    for (std::size_t idx = 0; idx < cube.flat().size(); ++idx)
      cube.flat_mut()[idx] += noise.flat()[idx];
  }
  const DenseTensor3 noisy = DenseTensor3::from_cube(cube);

  EntryDistribution dist = params.dist == Family::uniform
                               ? EntryDistribution::uniform(params.n)
                               : EntryDistribution::l2(noisy);
  SamplePlan plan{m, SampleMode::exact_bernoulli, seed};
  const DrawResult draws = draw(dist, plan);
  std::vector<double> values(draws.records.size());
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    const auto& d = draws.records[idx];
    values[idx] = noisy.at(d.i, d.j, d.k);
  }
  const SampledTensor samples = reweight(params.n, draws, values);
  if (samples.size() == 0) return std::numeric_limits<double>::infinity();

  // Same nu-based caps as the proposed arm, so only the sampling differs.
  std::vector<double> face_fro(params.n);
  for (std::size_t i = 0; i < params.n; ++i)
    face_fro[i] = face_frobenius(noisy.cube(), i);
  const NuStats stats = nu_stats(face_fro, frobenius_norm(noisy));
  std::vector<double> caps(params.n);
  for (std::size_t i = 0; i < params.n; ++i) caps[i] = 2.0 * stats.nu[i];

  try {
    const CpFactors init =
        thresholded_rtpm_init(samples, params.r, caps, params.rtpm_restarts,
                              params.rtpm_iterations, seed);
    WalsConfig cfg;
    cfg.rank = params.r;
    cfg.iters = params.wals_iters;
    cfg.row_caps = caps;
    cfg.seed = seed ^ 0x3a1d5ull;
    const WalsResult result = wals(samples, cfg, init);
    return factor_rmse(result.factors, truth);
  } catch (const numerical_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

// ---- fig3a ----------------------------------------------------------------

std::vector<Fig3aRow> run_fig3a(const Fig3aParams& params) {
  if (params.dists.empty()) throw invalid_input("fig3a: empty distribution set");
  if (params.seeds.empty()) throw invalid_input("fig3a: empty seed set");
  const std::uint64_t m_min = params.m_min ? params.m_min : params.n;
  const std::uint64_t m_max = params.m_max
                                  ? params.m_max
                                  : static_cast<std::uint64_t>(params.n) * params.n * params.n;
  if (m_min < 1 || m_max < m_min) throw invalid_input("fig3a: bad m search range");

  auto success = [&](Family dist, double a, std::uint64_t m) {
    std::vector<double> rmse(params.seeds.size());
    parallel_for(params.seeds.size(), [&](std::size_t idx) {
      CompletionTrialParams trial;
      trial.n = params.n;
      trial.r = params.r;
      trial.a = a;
      trial.dist = dist;
      trial.m = m;
      trial.wals_iters = params.wals_iters;
      rmse[idx] = completion_trial_rmse(trial, params.seeds[idx]);
    });
    std::size_t hits = 0;
    for (const double e : rmse) hits += e < params.rmse_threshold;
    return static_cast<double>(hits) >=
           params.success_target * static_cast<double>(params.seeds.size());
  };

  std::vector<Fig3aRow> rows;
  for (const Family dist : params.dists)
    for (const double a : params.a_grid) {
      // Geometric bracket, then bisection on the integer budget.
      std::uint64_t lo = m_min, hi = m_min;
      bool found = false;
      while (hi <= m_max) {
        if (success(dist, a, hi)) {
          found = true;
          break;
        }
        lo = hi;
        if (hi > m_max / 2) break;
        hi *= 2;
      }
      if (!found) {
        rows.push_back({dist, a, std::nullopt});
        continue;
      }
      while (hi - lo > std::max<std::uint64_t>(1, hi / 20)) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (success(dist, a, mid))
          hi = mid;
        else
          lo = mid;
      }
      rows.push_back({dist, a, hi});
    }
  return rows;
}

void write_fig3a_csv(const Fig3aParams& params, const std::vector<Fig3aRow>& rows,
                     std::ostream& out) {
  out << "# tensamp fig3a recovery thresholds\n";
  out << "# n=" << params.n << " r=" << params.r << " seeds=" << params.seeds.size()
      << " rmse_threshold=" << g17(params.rmse_threshold) << " success_target="
      << g17(params.success_target) << "\n";
  out << "dist,a,m_star\n";
  for (const auto& row : rows) {
    out << family_name(row.dist) << ',' << g17(row.a) << ',';
    if (row.m_star)
      out << *row.m_star;
    else
      out << "nan";
    out << '\n';
  }
}

Fig3aParams fig3a_from_config(const KvConfig& cfg) {
  Fig3aParams params;
  params.n = cfg.get_size("n", 50);
  params.r = cfg.get_size("r", 5);
  params.a_grid = cfg.get_doubles("a_grid", params.a_grid);
  std::vector<std::string> dist_names;
  for (const Family f : params.dists) dist_names.push_back(family_name(f));
  params.dists.clear();
  for (const auto& name : cfg.get_strings("dists", dist_names))
    params.dists.push_back(family_from_name(name));
  params.seeds = seed_range(cfg.get_size("seeds", 20), cfg.get_u64("seed_base", 0));
  params.rmse_threshold = cfg.get_double("rmse_threshold", 0.01);
  params.success_target = cfg.get_double("success_target", 0.8);
  params.m_min = cfg.get_u64("m_min", 0);
  params.m_max = cfg.get_u64("m_max", 0);
  params.wals_iters = cfg.get_size("wals_iters", 30);
  return params;
}

// ---- fig3b ----------------------------------------------------------------

std::vector<Fig3bRow> run_fig3b(const Fig3bParams& params) {
  if (params.dists.empty()) throw invalid_input("fig3b: empty distribution set");
  if (params.seeds.empty()) throw invalid_input("fig3b: empty seed set");
  if (params.noise_grid.empty()) throw invalid_input("fig3b: empty noise grid");

  struct Cell {
    Family dist;
    double noise;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const Family dist : params.dists)
    for (const double noise : params.noise_grid)
      for (const auto seed : params.seeds) cells.push_back({dist, noise, seed});

  std::vector<Fig3bRow> rows(cells.size());
  parallel_for(cells.size(), [&](std::size_t idx) {
    const auto& cell = cells[idx];
    NoisyTrialParams trial;
    trial.n = params.n;
    trial.r = params.r;
    trial.a = params.a;
    trial.noise_fro = cell.noise;
    trial.flatness_constant = params.flatness_constant;
    trial.dist = cell.dist;
    trial.m = params.m;
    trial.wals_iters = params.wals_iters;
    rows[idx] = {cell.dist, cell.noise, cell.seed, noisy_trial_rmse(trial, cell.seed)};
  });
  std::sort(rows.begin(), rows.end(), [](const Fig3bRow& a, const Fig3bRow& b) {
    return std::tie(a.dist, a.noise_fro, a.seed) < std::tie(b.dist, b.noise_fro, b.seed);
  });
  return rows;
}

void write_fig3b_csv(const Fig3bParams& params, const std::vector<Fig3bRow>& rows,
                     std::ostream& out) {
  out << "# tensamp fig3b noise sweep\n";
  out << "# n=" << params.n << " r=" << params.r << " a=" << g17(params.a)
      << " seeds=" << params.seeds.size() << " flatness_constant="
      << g17(params.flatness_constant) << "\n";
  out << "dist,noise_fro,seed,factor_rmse\n";
  for (const auto& row : rows)
    out << family_name(row.dist) << ',' << g17(row.noise_fro) << ',' << row.seed
        << ',' << g17(row.factor_rmse) << '\n';
}

Fig3bParams fig3b_from_config(const KvConfig& cfg) {
  Fig3bParams params;
  params.n = cfg.get_size("n", 40);
  params.r = cfg.get_size("r", 5);
  params.a = cfg.get_double("a", 0.5);
  params.noise_grid =
      cfg.get_doubles("noise_grid", {0.0125, 0.025, 0.05, 0.1, 0.2});
  std::vector<std::string> dist_names;
  for (const Family f : params.dists) dist_names.push_back(family_name(f));
  params.dists.clear();
  for (const auto& name : cfg.get_strings("dists", dist_names))
    params.dists.push_back(family_from_name(name));
  params.seeds = seed_range(cfg.get_size("seeds", 20), cfg.get_u64("seed_base", 0));
  params.flatness_constant = cfg.get_double("flatness_constant", 4.5);
  params.m = cfg.get_u64("m", 0);
  params.wals_iters = cfg.get_size("wals_iters", 30);
  return params;
}

}  // namespace tensamp
