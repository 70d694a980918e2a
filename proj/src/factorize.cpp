#include "tensamp/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "tensamp/errors.hpp"
#include "tensamp/kernels.hpp"
#include "tensamp/parallel.hpp"
#include "tensamp/rng.hpp"

namespace tensamp {

double NoiseSpec::max_frobenius(double sigma_min, std::size_t r) const {
  return c_constant * sigma_min / (100.0 * static_cast<double>(r));
}

namespace {

std::size_t wedge_size(std::size_t n) { return n * (n + 1) * (n + 2) / 6; }

// Linear index of (i,j,k), i <= j <= k, in wedge enumeration order.
std::size_t wedge_index(std::size_t n, std::size_t i, std::size_t j, std::size_t k) {
  // Entries before first index i, then before row j inside block i.
  const std::size_t before_i = wedge_size(n) - wedge_size(n - i);
  const std::size_t bi = n - i;            // block side
  const std::size_t dj = j - i;
  const std::size_t before_j = dj * bi - dj * (dj - 1) / 2;
  return before_i + before_j + (k - j);
}

void sort3(std::size_t& i, std::size_t& j, std::size_t& k) {
  if (i > j) std::swap(i, j);
  if (j > k) std::swap(j, k);
  if (i > j) std::swap(i, j);
}

}  // namespace

Cube generate_noise(std::size_t n, const NoiseSpec& spec, std::uint64_t seed) {
  if (n == 0) throw invalid_input("generate_noise: dimension must be positive");
  if (!(spec.frobenius_level > 0.0))
    throw invalid_input("generate_noise: frobenius level must be positive");

  const std::size_t w = wedge_size(n);
  std::vector<double> raw(w);
  {
    auto stream = rng::Stream::derive(seed, 0x4015eull, 0);
    for (auto& x : raw) x = stream.gaussian();
  }

  const double n15 = std::pow(static_cast<double>(n), 1.5);
  const double cap = spec.flatness_constant * spec.frobenius_level / n15;
  double scale = 0.0;
  for (int round = 0;; ++round) {
    // Exact target norm; multiplicity accounts for the mirrored entries.
    double acc = 0.0;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        for (std::size_t k = j; k < n; ++k, ++idx)
          acc += triple_multiplicity(i, j, k) * raw[idx] * raw[idx];
    if (!(acc > 0.0)) throw numerical_error("generate_noise: degenerate draw");
    scale = spec.frobenius_level / std::sqrt(acc);

    std::vector<std::size_t> violators;
    for (std::size_t v = 0; v < w; ++v)
      if (std::abs(scale * raw[v]) > cap) violators.push_back(v);
    if (violators.empty()) break;
    if (round >= 3)
      throw numerical_error("generate_noise: flatness cap still violated after 3 "
                            "resampling rounds (" + std::to_string(violators.size()) +
                            " entries); raise flatness_constant");
    auto stream = rng::Stream::derive(seed, 0x4015eull, round + 1);
    for (std::size_t v : violators) raw[v] = stream.gaussian();
  }

  Cube out(n);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k, ++idx) {
        const double v = scale * raw[idx];
        out.at(i, j, k) = v;
        out.at(i, k, j) = v;
        out.at(j, i, k) = v;
        out.at(j, k, i) = v;
        out.at(k, i, j) = v;
        out.at(k, j, i) = v;
      }
  return out;
}

void DenseInput::load_face(std::size_t i, std::span<double> buf) const {
  const auto face = t_.cube().face(i);
  std::copy(face.begin(), face.end(), buf.begin());
}

SyntheticInput::SyntheticInput(CpFactors factors, const NoiseSpec& spec,
                               std::uint64_t noise_seed)
    : factors_(std::move(factors)) {
  const std::size_t n = factors_.dim();
  if (spec.frobenius_level > 0.0) {
    // Reuse the cube generator's draw/rescale/cap logic, then keep only the
    // wedge. Memory stays O(n^2) once this constructor returns.
    Cube noise = generate_noise(n, spec, noise_seed);
    wedge_noise_.resize(wedge_size(n));
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        for (std::size_t k = j; k < n; ++k, ++idx)
          wedge_noise_[idx] = noise.at(i, j, k);
  }
}

double SyntheticInput::noise_at(std::size_t i, std::size_t j, std::size_t k) const {
  if (wedge_noise_.empty()) return 0.0;
  sort3(i, j, k);
  return wedge_noise_[wedge_index(factors_.dim(), i, j, k)];
}

void SyntheticInput::load_face(std::size_t i, std::span<double> buf) const {
  const std::size_t n = factors_.dim();
  std::fill(buf.begin(), buf.end(), 0.0);
  for (std::size_t l = 0; l < factors_.rank(); ++l) {
    const auto col = factors_.column(l);
    const double c = factors_.sigma(l) * col[i];
    for (std::size_t j = 0; j < n; ++j)
      kernels::axpy(c * col[j], col.data(), buf.data() + j * n, n);
  }
  if (!wedge_noise_.empty())
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) buf[j * n + k] += noise_at(i, j, k);
}

NuStats face_pass(const TensorInput& input) {
  input.note_pass();
  const std::size_t n = input.dim();
  std::vector<double> face_fro(n);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> buf(n * n);
    input.load_face(i, buf);
    face_fro[i] = std::sqrt(kernels::sumsq(buf.data(), buf.size()));
  });
  double total = 0.0;
  for (double f : face_fro) total += f * f;
  const double fro = std::sqrt(total);
  if (!(fro > 0.0)) throw invalid_input("face_pass: zero tensor");
  return nu_stats(face_fro, fro);
}

namespace {

// Pass two of the factorization: Bernoulli scan under the noisy-mixture
// distribution, computing each entry's probability from the streamed value
// so no separate value pass is needed.
SampledTensor mixture_scan(const TensorInput& input, const NuStats& stats,
                           std::uint64_t m, std::uint64_t seed) {
  input.note_pass();
  const std::size_t n = input.dim();
  std::vector<double> a(n);
  double a_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = std::pow(stats.nu[i], 1.5);
    a_sum += a[i];
  }
  const double fro2 = stats.fro * stats.fro;
  const double md = static_cast<double>(m);
  const double prod_denom = 3.0 * static_cast<double>(n) * a_sum * a_sum;

  std::vector<std::vector<SampleRecord>> slabs(n);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> face(n * n);
    input.load_face(i, face);
    auto stream = rng::Stream::derive(seed, 0xbe52u, i);
    auto& slab = slabs[i];
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double value = face[j * n + k];
        const double p = 0.5 * (a[i] * a[j] + a[j] * a[k] + a[k] * a[i]) / prod_denom +
                         0.5 * value * value / fro2;
        if (!(p > 0.0)) continue;
        const double p_hat = std::min(md * p, 1.0);
        bool keep;
        if (p_hat >= 1.0)
          keep = true;  // deterministic, consumes no randomness
        else
          keep = stream.u01() < p_hat;
        if (keep)
          slab.push_back({static_cast<std::uint32_t>(i),
                          static_cast<std::uint32_t>(j),
                          static_cast<std::uint32_t>(k), value, p_hat,
                          1.0 / p_hat});
      }
  });

  std::vector<SampleRecord> records;
  std::size_t total = 0;
  for (const auto& s : slabs) total += s.size();
  records.reserve(total);
  for (const auto& s : slabs) records.insert(records.end(), s.begin(), s.end());
  return SampledTensor(n, std::move(records));
}

}  // namespace

FactorizeResult factorize(const TensorInput& input, const FactorizeOptions& opts,
                          const CpFactors* truth) {
  if (opts.rank < 1) throw invalid_input("factorize: rank must be >= 1");
  const std::size_t n = input.dim();
  std::uint64_t m = opts.m;
  if (m == 0)
    m = static_cast<std::uint64_t>(
        std::ceil(10.0 * std::pow(static_cast<double>(n), 1.5) *
                  static_cast<double>(opts.rank)));

  FactorizeResult result;
  result.nu = face_pass(input);                           // pass 1
  SampledTensor samples = mixture_scan(input, result.nu, m, opts.seed);  // pass 2
  result.sample_count = samples.size();

  std::vector<double> caps(n);
  for (std::size_t i = 0; i < n; ++i) caps[i] = 2.0 * result.nu.nu[i];

  RtpmOptions rtpm_opts;
  rtpm_opts.restarts = opts.rtpm_restarts;
  rtpm_opts.iterations = opts.rtpm_iterations;
  std::uint64_t state = opts.seed ^ 0x1247ull;
  rtpm_opts.seed = rng::splitmix64(state);

  SampledTvp source(samples);
  CpFactors init = rtpm(source, opts.rank, rtpm_opts);
  // (sigma, u) ~ (-sigma, -u) for odd order; fold negative weights so WALS
  // starts from positive sigma without changing the represented tensor.
  for (std::size_t l = 0; l < init.rank(); ++l) {
    if (init.sigma(l) < 0.0) {
      init.sigma(l) = -init.sigma(l);
      for (auto& x : init.column(l)) x = -x;
    }
    apply_row_caps(init.column(l), caps);
  }

  WalsConfig cfg;
  cfg.rank = opts.rank;
  cfg.iters = opts.iters;
  cfg.fresh_samples = opts.fresh_samples;
  cfg.row_caps = caps;
  cfg.seed = opts.seed ^ 0x3a1d5ull;
  WalsResult wals_result = wals(samples, cfg, init, truth);

  result.factors = std::move(wals_result.factors);
  result.sweeps = std::move(wals_result.sweeps);
  result.passes = input.passes();
  return result;
}

DenseTensor3 load_tensor_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot open: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "TNS3", 4) != 0)
    throw invalid_input("tensor file missing TNS3 magic: " + path);
  std::uint32_t n32 = 0;
  in.read(reinterpret_cast<char*>(&n32), sizeof(n32));
  if (!in || n32 == 0) throw invalid_input("tensor file has bad dimension: " + path);
  const std::size_t n = n32;
  std::vector<double> data(n * n * n);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!in) throw invalid_input("tensor file truncated: " + path);
  return DenseTensor3::from_cube(Cube(n, std::move(data)));
}

void save_tensor_bin(const DenseTensor3& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("cannot open for writing: " + path);
  out.write("TNS3", 4);
  const std::uint32_t n32 = static_cast<std::uint32_t>(t.dim());
  out.write(reinterpret_cast<const char*>(&n32), sizeof(n32));
  const auto flat = t.cube().flat();
  out.write(reinterpret_cast<const char*>(flat.data()),
            static_cast<std::streamsize>(flat.size() * sizeof(double)));
}

}  // namespace tensamp
