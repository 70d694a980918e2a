#include "tensamp/sparsify.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tensamp/errors.hpp"
#include "tensamp/kernels.hpp"
#include "tensamp/parallel.hpp"

namespace tensamp {

SampleMatrix::SampleMatrix(std::size_t n, std::size_t p, std::vector<double> row_major)
    : n_(n), p_(p), data_(std::move(row_major)) {
  if (n == 0 || p == 0) throw invalid_input("SampleMatrix: empty dimensions");
  if (data_.size() != n * p) throw invalid_input("SampleMatrix: data size mismatch");
  bool any = false;
  for (double v : data_) {
    if (!std::isfinite(v)) throw invalid_input("SampleMatrix: non-finite entry");
    any = any || v != 0.0;
  }
  if (!any) throw invalid_input("SampleMatrix: all columns zero");
}

std::size_t SampleMatrix::nnz() const {
  std::size_t count = 0;
  for (double v : data_) count += v != 0.0;
  return count;
}

namespace {

std::vector<double> parse_csv_row(const std::string& line, std::size_t lineno) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    const std::string field = line.substr(pos, comma - pos);
    try {
      out.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw invalid_input("CSV: bad number '" + field + "' on line " +
                          std::to_string(lineno));
    }
    pos = comma + 1;
    if (comma == line.size()) break;
  }
  return out;
}

}  // namespace

SampleMatrix SampleMatrix::load_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw invalid_input("SampleMatrix: empty input");

  if (line == "row,col,value") {
    struct Triplet { std::size_t r, c; double v; };
    std::vector<Triplet> triplets;
    std::size_t n = 0, p = 0, lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      unsigned long r, c;
      double v;
      if (std::sscanf(line.c_str(), "%lu,%lu,%lf", &r, &c, &v) != 3)
        throw invalid_input("SampleMatrix: malformed triplet on line " +
                            std::to_string(lineno));
      triplets.push_back({r, c, v});
      n = std::max(n, static_cast<std::size_t>(r) + 1);
      p = std::max(p, static_cast<std::size_t>(c) + 1);
    }
    if (triplets.empty()) throw invalid_input("SampleMatrix: no triplets");
    std::vector<double> data(n * p, 0.0);
    for (const auto& t : triplets) data[t.r * p + t.c] = t.v;
    return SampleMatrix(n, p, std::move(data));
  }

  // Dense: first line is already a data row.
  std::vector<double> data;
  std::size_t p = 0, lineno = 0;
  do {
    ++lineno;
    if (line.empty()) continue;
    const auto row = parse_csv_row(line, lineno);
    if (p == 0) p = row.size();
    if (row.size() != p)
      throw invalid_input("SampleMatrix: ragged row on line " + std::to_string(lineno));
    data.insert(data.end(), row.begin(), row.end());
  } while (std::getline(in, line));
  const std::size_t n = data.size() / p;
  return SampleMatrix(n, p, std::move(data));
}

SampleMatrix SampleMatrix::load_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open: " + path);
  return load_csv(in);
}

void SampleMatrix::save_csv(std::ostream& out) const {
  char buf[40];
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t l = 0; l < p_; ++l) {
      std::snprintf(buf, sizeof(buf), "%.17g", data_[i * p_ + l]);
      out << (l ? "," : "") << buf;
    }
    out << '\n';
  }
}

std::vector<double> row_norm_pass(const SampleMatrix& x) {
  x.note_pass();
  const std::size_t n = x.dim();
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i)
    norms[i] = std::sqrt(kernels::sumsq(x.row(i).data(), x.samples()));
  return norms;
}

double moment_entry(const SampleMatrix& x, std::size_t i, std::size_t j,
                    std::size_t k) {
  if (i >= x.dim() || j >= x.dim() || k >= x.dim())
    throw invalid_input("moment_entry: index out of range");
  return kernels::dot3(x.row(i).data(), x.row(j).data(), x.row(k).data(),
                       x.samples());
}

DenseTensor3 moment_tensor(const SampleMatrix& x, std::size_t guard) {
  const std::size_t n = x.dim();
  if (n > guard)
    throw invalid_input("moment_tensor: n = " + std::to_string(n) +
                        " exceeds materialization guard " + std::to_string(guard));
  return DenseTensor3::from_wedge(n, [&](std::size_t i, std::size_t j, std::size_t k) {
    return moment_entry(x, i, j, k);
  });
}

namespace {

// Pass two: evaluate the drawn entries. Grouped by i (records are sorted) so
// each face's row slice stays hot.
SampledTensor evaluate_drawn_entries(const SampleMatrix& x, const DrawResult& draws) {
  x.note_pass();
  std::vector<double> values(draws.records.size());
  parallel_for(draws.records.size(), [&](std::size_t idx) {
    const auto& d = draws.records[idx];
    values[idx] = kernels::dot3(x.row(d.i).data(), x.row(d.j).data(),
                                x.row(d.k).data(), x.samples());
  });
  return reweight(x.dim(), draws, values);
}

}  // namespace

SampledTensor sparsify(const SampleMatrix& x, std::uint64_t m, std::uint64_t seed,
                       SampleMode mode) {
  if (m < 1) throw invalid_input("sparsify: budget m must be >= 1");
  const auto norms = row_norm_pass(x);  // pass 1
  const auto dist = EntryDistribution::from_samples(norms);
  SamplePlan plan{m, mode, seed};
  const auto draws = draw(dist, plan);
  return evaluate_drawn_entries(x, draws);  // pass 2
}

SampledTensor sample_moment_tensor(const SampleMatrix& x, Family family,
                                   std::uint64_t m, std::uint64_t seed,
                                   SampleMode mode) {
  if (m < 1) throw invalid_input("sample_moment_tensor: budget m must be >= 1");
  SamplePlan plan{m, mode, seed};
  switch (family) {
    case Family::tensor_ls:
      return sparsify(x, m, seed, mode);
    case Family::uniform: {
      const auto draws = draw(EntryDistribution::uniform(x.dim()), plan);
      return evaluate_drawn_entries(x, draws);
    }
    case Family::sum_l3: {
      const auto norms = row_norm_pass(x);
      const auto draws = draw(EntryDistribution::sum_l3(norms), plan);
      return evaluate_drawn_entries(x, draws);
    }
    case Family::prod_l3: {
      const auto norms = row_norm_pass(x);
      const auto draws = draw(EntryDistribution::prod_l3(norms), plan);
      return evaluate_drawn_entries(x, draws);
    }
    case Family::l1:
    case Family::l2:
    case Family::noisy_mixture: {
      const DenseTensor3 t = moment_tensor(x);
      const auto dist = family == Family::l1   ? EntryDistribution::l1(t)
                        : family == Family::l2 ? EntryDistribution::l2(t)
                                               : EntryDistribution::noisy_mixture(t);
      const auto draws = draw(dist, plan);
      std::vector<double> values(draws.records.size());
      for (std::size_t idx = 0; idx < values.size(); ++idx) {
        const auto& d = draws.records[idx];
        values[idx] = t.at(d.i, d.j, d.k);
      }
      return reweight(x.dim(), draws, values);
    }
  }
  throw invalid_input("sample_moment_tensor: unknown family");
}

std::uint64_t default_budget(std::size_t n) {
  return static_cast<std::uint64_t>(
      std::ceil(10.0 * std::pow(static_cast<double>(n), 1.5)));
}

}  // namespace tensamp
