// tensamp: biased entry sampling of symmetric order-3 tensors.
// Subcommands: sparsify, complete, factorize, synth, experiment.
// Exit codes: 0 success, 2 usage or input error, 3 numerical failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "tensamp/errors.hpp"
#include "tensamp/experiments.hpp"
#include "tensamp/factorize.hpp"
#include "tensamp/factors_io.hpp"
#include "tensamp/kernels.hpp"
#include "tensamp/metrics.hpp"
#include "tensamp/parallel.hpp"
#include "tensamp/sparsify.hpp"
#include "tensamp/synth.hpp"

namespace {

using namespace tensamp;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw invalid_input("cannot open for writing: " + path);
  return out;
}

SampleMode parse_mode(const std::string& mode, std::size_t n) {
  if (mode == "bernoulli") return SampleMode::exact_bernoulli;
  if (mode == "categorical") return SampleMode::fast_categorical;
  if (mode == "auto") return SamplePlan::make_auto(n, 1, 0).mode;
  throw invalid_input("--mode must be bernoulli, categorical or auto");
}

void write_diag_json(const std::vector<SweepDiag>& sweeps, const std::string& path) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : sweeps) {
    nlohmann::json row;
    row["sweep"] = d.sweep;
    row["residual"] = d.residual;
    if (d.d_inf) row["d_inf"] = *d.d_inf;
    out.push_back(row);
  }
  auto stream = open_out(path);
  stream << out.dump(2) << '\n';
}

struct SparsifyArgs {
  std::string input, out, dist = "tensorls", mode = "auto";
  std::uint64_t samples = 0, seed = 0;
};

int run_sparsify(const SparsifyArgs& args) {
  const SampleMatrix x = SampleMatrix::load_csv_file(args.input);
  const std::uint64_t m = args.samples ? args.samples : default_budget(x.dim());
  const Family family = family_from_name(args.dist);
  const SampleMode mode = parse_mode(args.mode, x.dim());
  const SampledTensor result = sample_moment_tensor(x, family, m, args.seed, mode);
  result.save_file(args.out);
  std::cerr << "sparsify: " << result.size() << " of " << m
            << " budgeted entries written to " << args.out << "\n";
  return 0;
}

struct CompleteArgs {
  std::string omega, out, caps, diag, truth;
  std::size_t rank = 1, iters = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t rtpm_restarts = 30, rtpm_iters = 100;
  bool fresh_samples = false;
};

int run_complete(const CompleteArgs& args) {
  const SampledTensor samples = args.n
                                    ? SampledTensor::load_file(args.omega, args.n)
                                    : SampledTensor::load_file_auto(args.omega);
  WalsConfig cfg;
  cfg.rank = args.rank;
  cfg.iters = args.iters;
  cfg.fresh_samples = args.fresh_samples;
  cfg.seed = args.seed;
  if (!args.caps.empty())
    cfg.row_caps = load_caps_csv_file(args.caps, samples.dim());

  RtpmOptions rtpm_opts;
  rtpm_opts.restarts = args.rtpm_restarts;
  rtpm_opts.iterations = args.rtpm_iters;
  rtpm_opts.seed = args.seed ^ 0x1247ull;
  SampledTvp source(samples);
  CpFactors init = rtpm(source, args.rank, rtpm_opts);
  for (std::size_t l = 0; l < init.rank(); ++l) {
    if (init.sigma(l) < 0.0) {
      init.sigma(l) = -init.sigma(l);
      for (auto& v : init.column(l)) v = -v;
    }
    apply_row_caps(init.column(l), cfg.row_caps);
  }

  CpFactors truth;
  const CpFactors* truth_ptr = nullptr;
  if (!args.truth.empty()) {
    truth = load_factors_csv_file(args.truth);
    truth_ptr = &truth;
  }

  const WalsResult result = wals(samples, cfg, init, truth_ptr);
  save_factors_csv_file(result.factors, args.out);
  if (!args.diag.empty()) write_diag_json(result.sweeps, args.diag);
  std::cerr << "complete: " << result.iters_run << " sweeps, final residual "
            << (result.sweeps.empty() ? 0.0 : result.sweeps.back().residual) << "\n";
  return 0;
}

struct FactorizeArgs {
  std::string input, factors, out, diag;
  double noise_fro = 0.0;
  double flatness_constant = 4.5;
  std::uint64_t noise_seed = 0, seed = 0, samples = 0;
  std::size_t rank = 1, iters = 0;
  std::size_t rtpm_restarts = 30, rtpm_iters = 100;
  bool fresh_samples = false;
};

int run_factorize(const FactorizeArgs& args) {
  if (args.input.empty() == args.factors.empty())
    throw invalid_input("factorize: provide exactly one of --input or --factors");

  FactorizeOptions opts;
  opts.m = args.samples;
  opts.rank = args.rank;
  opts.iters = args.iters;
  opts.seed = args.seed;
  opts.rtpm_restarts = args.rtpm_restarts;
  opts.rtpm_iterations = args.rtpm_iters;
  opts.fresh_samples = args.fresh_samples;

  FactorizeResult result = [&] {
    if (!args.input.empty()) {
      const DenseTensor3 t = load_tensor_bin(args.input);
      DenseInput input(t);
      return factorize(input, opts);
    }
    const CpFactors truth = load_factors_csv_file(args.factors);
    NoiseSpec spec;
    spec.frobenius_level = args.noise_fro;
    spec.flatness_constant = args.flatness_constant;
    SyntheticInput input(truth, args.noise_fro > 0.0 ? spec : NoiseSpec{},
                         args.noise_seed);
    return factorize(input, opts, &truth);
  }();

  save_factors_csv_file(result.factors, args.out);
  if (!args.diag.empty()) write_diag_json(result.sweeps, args.diag);
  std::cerr << "factorize: " << result.sample_count << " samples, "
            << result.passes << " passes over the input\n";
  return 0;
}

int run_experiment(const std::string& fig, const std::string& config_path,
                   const std::string& out_path, const std::string& face_norm) {
  KvConfig cfg;
  if (!config_path.empty()) cfg = KvConfig::parse_file(config_path);
  if (!face_norm.empty()) cfg.set("face_norm", face_norm);
  auto out = open_out(out_path);
  if (fig == "1") {
    const auto params = sweep_params_from_config(cfg, false);
    write_fig1_csv(params, run_fig1(params), out);
  } else if (fig == "2") {
    const auto params = sweep_params_from_config(cfg, true);
    write_fig2_csv(params, run_fig2(params), out);
  } else if (fig == "3a") {
    const auto params = fig3a_from_config(cfg);
    write_fig3a_csv(params, run_fig3a(params), out);
  } else if (fig == "3b") {
    const auto params = fig3b_from_config(cfg);
    write_fig3b_csv(params, run_fig3b(params), out);
  } else {
    throw invalid_input("--fig must be one of 1, 2, 3a, 3b");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"biased entry sampling for symmetric order-3 tensors"};
  app.require_subcommand(1);

  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = auto)");

  SparsifyArgs sparsify_args;
  auto* sp = app.add_subcommand("sparsify", "two-pass moment-tensor sparsification");
  sp->add_option("--input", sparsify_args.input, "sample matrix CSV")->required();
  sp->add_option("--samples", sparsify_args.samples, "budget m (default ceil(10 n^1.5))");
  sp->add_option("--dist", sparsify_args.dist, "sampling family");
  sp->add_option("--mode", sparsify_args.mode, "bernoulli | categorical | auto");
  sp->add_option("--seed", sparsify_args.seed, "RNG seed");
  sp->add_option("--out", sparsify_args.out, "output omega.csv")->required();

  CompleteArgs complete_args;
  auto* co = app.add_subcommand("complete", "weighted-ALS tensor completion");
  co->add_option("--omega", complete_args.omega, "sampled tensor CSV")->required();
  co->add_option("--n", complete_args.n, "dimension (default: inferred)");
  co->add_option("--rank", complete_args.rank, "CP rank")->required();
  co->add_option("--iters", complete_args.iters, "WALS sweeps (0 = default formula)");
  co->add_flag("--fresh-samples", complete_args.fresh_samples,
               "split omega into r*b disjoint subsets");
  co->add_option("--caps", complete_args.caps, "row caps CSV");
  co->add_option("--truth", complete_args.truth, "reference factors for diagnostics");
  co->add_option("--seed", complete_args.seed, "RNG seed");
  co->add_option("--rtpm-restarts", complete_args.rtpm_restarts, "RTPM restarts");
  co->add_option("--rtpm-iters", complete_args.rtpm_iters, "RTPM iterations");
  co->add_option("--out", complete_args.out, "output factors.csv")->required();
  co->add_option("--diag", complete_args.diag, "per-sweep diagnostics JSON");

  FactorizeArgs factorize_args;
  auto* fa = app.add_subcommand("factorize", "two-pass noisy factorization");
  fa->add_option("--input", factorize_args.input, "dense tensor (TNS3 binary)");
  fa->add_option("--factors", factorize_args.factors,
                 "synthetic input: ground-truth factors CSV");
  fa->add_option("--noise-fro", factorize_args.noise_fro,
                 "synthetic input: noise Frobenius norm");
  fa->add_option("--noise-seed", factorize_args.noise_seed, "synthetic noise seed");
  fa->add_option("--flatness-constant", factorize_args.flatness_constant,
                 "noise flatness slack");
  fa->add_option("--samples", factorize_args.samples, "budget m (0 = 10 n^1.5 r)");
  fa->add_option("--rank", factorize_args.rank, "CP rank")->required();
  fa->add_option("--iters", factorize_args.iters, "WALS sweeps");
  fa->add_option("--seed", factorize_args.seed, "RNG seed");
  fa->add_option("--rtpm-restarts", factorize_args.rtpm_restarts, "RTPM restarts");
  fa->add_option("--rtpm-iters", factorize_args.rtpm_iters, "RTPM iterations");
  fa->add_flag("--fresh-samples", factorize_args.fresh_samples, "disjoint subsets");
  fa->add_option("--out", factorize_args.out, "output factors.csv")->required();
  fa->add_option("--diag", factorize_args.diag, "per-sweep diagnostics JSON");

  auto* sy = app.add_subcommand("synth", "synthetic generators");
  sy->require_subcommand(1);
  struct {
    std::size_t n = 100, p = 50, r = 5, block = 0;
    double a = 0.0;
    std::uint64_t seed = 0;
    std::string out, out_tensor, out_factors, sigmas;
  } synth_args;
  auto* sy_samples = sy->add_subcommand("samples", "power-law biased sample matrix");
  sy_samples->add_option("--n", synth_args.n, "dimension")->required();
  sy_samples->add_option("--p", synth_args.p, "sample count")->required();
  sy_samples->add_option("--a", synth_args.a, "bias exponent");
  sy_samples->add_option("--seed", synth_args.seed, "RNG seed");
  sy_samples->add_option("--out", synth_args.out, "output X.csv")->required();
  auto* sy_factors = sy->add_subcommand("factors", "biased orthogonal factors");
  sy_factors->add_option("--n", synth_args.n, "dimension")->required();
  sy_factors->add_option("--r", synth_args.r, "rank")->required();
  sy_factors->add_option("--a", synth_args.a, "bias exponent");
  sy_factors->add_option("--sigmas", synth_args.sigmas, "comma-separated weights");
  sy_factors->add_option("--seed", synth_args.seed, "RNG seed");
  sy_factors->add_option("--out", synth_args.out, "output factors.csv")->required();
  auto* sy_claim = sy->add_subcommand("claim", "block-diagonal counterexample tensor");
  sy_claim->add_option("--n", synth_args.n, "dimension")->required();
  sy_claim->add_option("--block", synth_args.block, "first block size (default ceil(ln n))");
  sy_claim->add_option("--out-tensor", synth_args.out_tensor, "output T.bin");
  sy_claim->add_option("--out-factors", synth_args.out_factors, "output factors.csv");

  std::string fig, exp_config, exp_out, exp_face_norm;
  auto* ex = app.add_subcommand("experiment", "figure-style sweep harness");
  ex->add_option("--fig", fig, "1 | 2 | 3a | 3b")->required();
  ex->add_option("--config", exp_config, "key=value config file");
  ex->add_option("--face-norm", exp_face_norm,
                 "spectral | frobenius (error metric face norm)");
  ex->add_option("--out", exp_out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  tensamp::set_thread_count(threads);

  try {
    if (sp->parsed()) return run_sparsify(sparsify_args);
    if (co->parsed()) return run_complete(complete_args);
    if (fa->parsed()) return run_factorize(factorize_args);
    if (ex->parsed()) return run_experiment(fig, exp_config, exp_out, exp_face_norm);
    if (sy->parsed()) {
      if (sy_samples->parsed()) {
        const SampleMatrix x =
            gen_samples(synth_args.n, synth_args.p, synth_args.a, synth_args.seed);
        auto out = open_out(synth_args.out);
        x.save_csv(out);
        return 0;
      }
      if (sy_factors->parsed()) {
        std::vector<double> sigmas;
        if (!synth_args.sigmas.empty()) {
          std::stringstream ss(synth_args.sigmas);
          std::string field;
          while (std::getline(ss, field, ',')) sigmas.push_back(std::stod(field));
        }
        const CpFactors f = gen_orthogonal_factors(synth_args.n, synth_args.r,
                                                   synth_args.a, synth_args.seed,
                                                   sigmas);
        save_factors_csv_file(f, synth_args.out);
        return 0;
      }
      if (sy_claim->parsed()) {
        if (synth_args.out_tensor.empty() && synth_args.out_factors.empty())
          throw invalid_input("synth claim: need --out-tensor and/or --out-factors");
        const ClaimTensor claim = claim_tensor(synth_args.n, synth_args.block);
        if (!synth_args.out_tensor.empty())
          save_tensor_bin(claim.tensor, synth_args.out_tensor);
        if (!synth_args.out_factors.empty())
          save_factors_csv_file(claim.factors, synth_args.out_factors);
        return 0;
      }
    }
    throw invalid_input("no subcommand selected");
  } catch (const invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
