#include "tensamp/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <tuple>

#include "tensamp/errors.hpp"
#include "tensamp/kernels.hpp"
#include "tensamp/rng.hpp"

namespace tensamp {

namespace {

void check_finite(std::span<const double> xs, const char* what) {
  for (double x : xs)
    if (!std::isfinite(x)) throw invalid_input(std::string(what) + ": non-finite entry");
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

int triple_multiplicity(std::size_t i, std::size_t j, std::size_t k) {
  if (i == j && j == k) return 1;
  if (i == j || j == k || i == k) return 3;
  return 6;
}

Cube::Cube(std::size_t n, std::vector<double> data) : n_(n), data_(std::move(data)) {
  if (data_.size() != n * n * n)
    throw invalid_input("Cube: data size does not match dimension");
}

Cube& Cube::operator-=(const Cube& other) {
  if (other.dim() != n_) throw invalid_input("Cube: dimension mismatch");
  for (std::size_t idx = 0; idx < data_.size(); ++idx) data_[idx] -= other.data_[idx];
  return *this;
}

DenseTensor3 DenseTensor3::from_wedge(
    std::size_t n,
    const std::function<double(std::size_t, std::size_t, std::size_t)>& gen) {
  if (n == 0) throw invalid_input("DenseTensor3: dimension must be positive");
  Cube c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        const double v = gen(i, j, k);
        if (!std::isfinite(v)) throw invalid_input("DenseTensor3: non-finite entry");
        c.at(i, j, k) = v;
        c.at(i, k, j) = v;
        c.at(j, i, k) = v;
        c.at(j, k, i) = v;
        c.at(k, i, j) = v;
        c.at(k, j, i) = v;
      }
  return DenseTensor3(std::move(c));
}

DenseTensor3 DenseTensor3::from_cube(const Cube& c) {
  const std::size_t n = c.dim();
  if (n == 0) throw invalid_input("DenseTensor3: dimension must be positive");
  check_finite(c.flat(), "DenseTensor3");
  double scale = 0.0;
  for (double v : c.flat()) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(scale, 1e-300);
  return from_wedge(n, [&](std::size_t i, std::size_t j, std::size_t k) {
    const double v = c.at(i, j, k);
    const std::array<double, 5> others = {c.at(i, k, j), c.at(j, i, k),
                                          c.at(j, k, i), c.at(k, i, j),
                                          c.at(k, j, i)};
    for (double o : others)
      if (std::abs(o - v) > tol)
        throw invalid_input("DenseTensor3: entries are not permutation-symmetric");
    return v;
  });
}

double CpFactors::kappa() const {
  if (r_ == 0) return 1.0;
  double lo = std::abs(sigma_[0]), hi = lo;
  for (double s : sigma_) {
    lo = std::min(lo, std::abs(s));
    hi = std::max(hi, std::abs(s));
  }
  if (lo == 0.0) throw numerical_error("CpFactors: zero weight, kappa undefined");
  return hi / lo;
}

std::vector<double> CpFactors::row_norms() const {
  std::vector<double> out(n_, 0.0);
  for (std::size_t l = 0; l < r_; ++l) {
    const double* col = u_.data() + l * n_;
    for (std::size_t i = 0; i < n_; ++i) out[i] += col[i] * col[i];
  }
  for (auto& x : out) x = std::sqrt(x);
  return out;
}

void CpFactors::check_unit_columns(double tol) const {
  for (std::size_t l = 0; l < r_; ++l) {
    const double norm = std::sqrt(kernels::sumsq(column(l).data(), n_));
    if (std::abs(norm - 1.0) > tol)
      throw invalid_input("CpFactors: column " + std::to_string(l) +
                          " is not unit norm (|norm-1| = " +
                          std::to_string(std::abs(norm - 1.0)) + ")");
  }
}

void CpFactors::check_positive_sigma() const {
  for (std::size_t l = 0; l < r_; ++l)
    if (!(sigma_[l] > 0.0))
      throw invalid_input("CpFactors: sigma " + std::to_string(l) +
                          " is not strictly positive");
}

SampledTensor::SampledTensor(std::size_t n, std::vector<SampleRecord> records)
    : n_(n), records_(std::move(records)) {
  if (n == 0) throw invalid_input("SampledTensor: dimension must be positive");
  for (const auto& r : records_) {
    if (r.i >= n || r.j >= n || r.k >= n)
      throw invalid_input("SampledTensor: index out of range");
    if (!(r.p_hat > 0.0) || r.p_hat > 1.0)
      throw invalid_input("SampledTensor: p_hat outside (0, 1]");
    if (!std::isfinite(r.value) || !std::isfinite(r.weight))
      throw invalid_input("SampledTensor: non-finite record");
    if (std::abs(r.weight * r.p_hat - 1.0) > 1e-12)
      throw invalid_input("SampledTensor: weight is not 1/p_hat");
  }
  std::sort(records_.begin(), records_.end(),
            [](const SampleRecord& a, const SampleRecord& b) {
              return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
            });
  for (std::size_t idx = 1; idx < records_.size(); ++idx) {
    const auto& a = records_[idx - 1];
    const auto& b = records_[idx];
    if (a.i == b.i && a.j == b.j && a.k == b.k)
      throw invalid_input("SampledTensor: duplicate (i,j,k) key");
  }
}

void SampledTensor::scatter_reweighted(Cube& out) const {
  if (out.dim() != n_) throw invalid_input("scatter_reweighted: dimension mismatch");
  for (const auto& r : records_) out.at(r.i, r.j, r.k) += r.value * r.weight;
}

double SampledTensor::frobenius_estimate() const {
  double acc = 0.0;
  for (const auto& r : records_) acc += r.weight * r.value * r.value;
  return std::sqrt(acc);
}

void SampledTensor::save(std::ostream& out) const {
  out << "i,j,k,value,p_hat\n";
  for (const auto& r : records_)
    out << r.i << ',' << r.j << ',' << r.k << ',' << format_g17(r.value) << ','
        << format_g17(r.p_hat) << '\n';
}

void SampledTensor::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw invalid_input("cannot open for writing: " + path);
  save(out);
}

SampledTensor SampledTensor::load(std::istream& in, std::size_t n) {
  std::string line;
  if (!std::getline(in, line) || line != "i,j,k,value,p_hat")
    throw invalid_input("SampledTensor: missing `i,j,k,value,p_hat` header");
  std::vector<SampleRecord> recs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    SampleRecord r{};
    unsigned long i, j, k;
    double value, p_hat;
    if (std::sscanf(line.c_str(), "%lu,%lu,%lu,%lf,%lf", &i, &j, &k, &value,
                    &p_hat) != 5)
      throw invalid_input("SampledTensor: malformed line " + std::to_string(lineno));
    r.i = static_cast<std::uint32_t>(i);
    r.j = static_cast<std::uint32_t>(j);
    r.k = static_cast<std::uint32_t>(k);
    r.value = value;
    r.p_hat = p_hat;
    r.weight = p_hat > 0.0 ? 1.0 / p_hat : 0.0;
    recs.push_back(r);
  }
  return SampledTensor(n, std::move(recs));
}

SampledTensor SampledTensor::load_file(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open: " + path);
  return load(in, n);
}

SampledTensor SampledTensor::load_file_auto(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) throw invalid_input("cannot open: " + path);
  std::string line;
  std::getline(probe, line);  // header, validated by load()
  std::size_t n = 0;
  while (std::getline(probe, line)) {
    if (line.empty()) continue;
    unsigned long i, j, k;
    if (std::sscanf(line.c_str(), "%lu,%lu,%lu", &i, &j, &k) == 3)
      n = std::max({n, static_cast<std::size_t>(i) + 1,
                    static_cast<std::size_t>(j) + 1,
                    static_cast<std::size_t>(k) + 1});
  }
  if (n == 0) throw invalid_input("SampledTensor: no records in " + path);
  return load_file(path, n);
}

// ---- Contractions -----------------------------------------------------

namespace {

void check_tvp_dims(std::size_t n, std::span<const double> u,
                    std::span<const double> v) {
  if (u.size() != n || v.size() != n)
    throw invalid_input("tvp: vector length does not match tensor dimension");
}

}  // namespace

std::vector<double> tvp(const Cube& t, std::span<const double> u,
                        std::span<const double> v) {
  const std::size_t n = t.dim();
  check_tvp_dims(n, u, v);
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* face = t.face(i).data();
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      acc += u[j] * kernels::dot(face + j * n, v.data(), n);
    out[i] = acc;
  }
  return out;
}

std::vector<double> tvp(const DenseTensor3& t, std::span<const double> u,
                        std::span<const double> v) {
  return tvp(t.cube(), u, v);
}

std::vector<double> tvp(const SampledTensor& t, std::span<const double> u,
                        std::span<const double> v) {
  const std::size_t n = t.dim();
  check_tvp_dims(n, u, v);
  std::vector<double> out(n, 0.0);
  // Records are sorted, so (i,j) groups are contiguous; accumulating per
  // (i,j) row mirrors the dense reference loop shape.
  const auto recs = t.records();
  std::size_t idx = 0;
  while (idx < recs.size()) {
    const std::uint32_t i = recs[idx].i, j = recs[idx].j;
    double row_acc = 0.0;
    while (idx < recs.size() && recs[idx].i == i && recs[idx].j == j) {
      const auto& r = recs[idx];
      row_acc += (r.value * r.weight) * v[r.k];
      ++idx;
    }
    out[i] += u[j] * row_acc;
  }
  return out;
}

std::vector<double> tvp(const CpFactors& f, std::span<const double> u,
                        std::span<const double> v) {
  const std::size_t n = f.dim();
  check_tvp_dims(n, u, v);
  std::vector<double> out(n, 0.0);
  for (std::size_t l = 0; l < f.rank(); ++l) {
    const auto col = f.column(l);
    const double cu = kernels::dot(col.data(), u.data(), n);
    const double cv = kernels::dot(col.data(), v.data(), n);
    kernels::axpy(f.sigma(l) * cu * cv, col.data(), out.data(), n);
  }
  return out;
}

DenseTensor3 cp_reconstruct(const CpFactors& f, std::size_t guard) {
  const std::size_t n = f.dim();
  if (n > guard)
    throw invalid_input("cp_reconstruct: n = " + std::to_string(n) +
                        " exceeds materialization guard " + std::to_string(guard) +
                        " (" + std::to_string(n * n * n) + " entries)");
  return DenseTensor3::from_wedge(n, [&](std::size_t i, std::size_t j, std::size_t k) {
    double acc = 0.0;
    for (std::size_t l = 0; l < f.rank(); ++l)
      acc += f.sigma(l) * f.entry(i, l) * f.entry(j, l) * f.entry(k, l);
    return acc;
  });
}

// ---- Norms ------------------------------------------------------------

double frobenius_norm(const Cube& t) {
  return std::sqrt(kernels::sumsq(t.flat().data(), t.flat().size()));
}

double frobenius_norm(const DenseTensor3& t) { return frobenius_norm(t.cube()); }

double frobenius_norm(const SampledTensor& t) {
  double acc = 0.0;
  for (const auto& r : t.records()) {
    const double rw = r.value * r.weight;
    acc += rw * rw;
  }
  return std::sqrt(acc);
}

double frobenius_norm(const CpFactors& f) {
  const std::size_t n = f.dim();
  double acc = 0.0;
  for (std::size_t l = 0; l < f.rank(); ++l)
    for (std::size_t m = 0; m < f.rank(); ++m) {
      const double ip = kernels::dot(f.column(l).data(), f.column(m).data(), n);
      acc += f.sigma(l) * f.sigma(m) * ip * ip * ip;
    }
  if (acc < 0.0) acc = 0.0;  // roundoff on near-orthogonal cross terms
  return std::sqrt(acc);
}

double face_frobenius(const Cube& t, std::size_t i) {
  if (i >= t.dim()) throw invalid_input("face_frobenius: face index out of range");
  const auto f = t.face(i);
  return std::sqrt(kernels::sumsq(f.data(), f.size()));
}

double matrix_spectral_norm(std::span<const double> a, std::size_t n,
                            double tol, int max_iters, bool accept_on_max_iters) {
  if (a.size() != n * n) throw invalid_input("matrix_spectral_norm: bad size");
  if (kernels::sumsq(a.data(), a.size()) == 0.0) return 0.0;

  // Fixed-seed start so repeated evaluations agree bit-for-bit. The estimate
  // sigma_t = ||A v_t|| is nondecreasing under iteration on A^T A.
  rng::Stream stream(0x5eeded5717a27ULL);
  std::vector<double> v = rng::unit_vector(stream, n);
  std::vector<double> w(n), z(n);

  double sigma_prev = 0.0;
  for (int iter = 0; iter < max_iters; ++iter) {
    kernels::matvec(a.data(), n, n, v.data(), w.data());      // w = A v
    const double sigma = std::sqrt(kernels::sumsq(w.data(), n));
    // z = A^T w, accumulated row by row.
    std::fill(z.begin(), z.end(), 0.0);
    for (std::size_t r = 0; r < n; ++r)
      kernels::axpy(w[r], a.data() + r * n, z.data(), n);
    const double zn = std::sqrt(kernels::sumsq(z.data(), n));
    if (zn == 0.0)
      throw numerical_error("matrix_spectral_norm: start vector fell in the null space");
    for (std::size_t i = 0; i < n; ++i) v[i] = z[i] / zn;

    if (iter > 0 && std::abs(sigma - sigma_prev) <= tol * std::max(sigma, 1e-300))
      return sigma;
    sigma_prev = sigma;
  }
  kernels::matvec(a.data(), n, n, v.data(), w.data());
  const double sigma = std::sqrt(kernels::sumsq(w.data(), n));
  if (accept_on_max_iters) return sigma;
  const double residual = std::abs(sigma - sigma_prev) / std::max(sigma, 1e-300);
  throw numerical_error("matrix_spectral_norm: no convergence in " +
                        std::to_string(max_iters) + " iterations (final residual " +
                        std::to_string(residual) + ")");
}

double l22_norm(const Cube& t, const L22Options& opts) {
  const std::size_t n = t.dim();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double face_norm =
        opts.face_norm == FaceNorm::spectral
            ? matrix_spectral_norm(t.face(i), n, opts.tol, opts.max_iters,
                                   opts.accept_on_max_iters)
            : face_frobenius(t, i);
    acc += face_norm * face_norm;
  }
  return std::sqrt(acc);
}

double l22_norm(const DenseTensor3& t, const L22Options& opts) {
  return l22_norm(t.cube(), opts);
}

}  // namespace tensamp
