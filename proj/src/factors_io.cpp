#include "tensamp/factors_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>

#include "tensamp/errors.hpp"

namespace tensamp {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void save_factors_csv(const CpFactors& f, std::ostream& out) {
  out << "col,sigma\n";
  for (std::size_t l = 0; l < f.rank(); ++l)
    out << l << ',' << g17(f.sigma(l)) << '\n';
  out << "row,col,value\n";
  for (std::size_t l = 0; l < f.rank(); ++l) {
    const auto col = f.column(l);
    for (std::size_t i = 0; i < f.dim(); ++i)
      out << i << ',' << l << ',' << g17(col[i]) << '\n';
  }
}

void save_factors_csv_file(const CpFactors& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw invalid_input("cannot open for writing: " + path);
  save_factors_csv(f, out);
}

CpFactors load_factors_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "col,sigma")
    throw invalid_input("factors.csv: missing `col,sigma` header");

  std::vector<double> sigmas;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line == "row,col,value") break;
    if (line.empty()) continue;
    unsigned long col;
    double sigma;
    if (std::sscanf(line.c_str(), "%lu,%lf", &col, &sigma) != 2)
      throw invalid_input("factors.csv: malformed sigma line " + std::to_string(lineno));
    if (col != sigmas.size())
      throw invalid_input("factors.csv: sigma rows must be in column order");
    sigmas.push_back(sigma);
  }
  if (sigmas.empty()) throw invalid_input("factors.csv: no sigma rows");

  struct Entry { std::size_t row, col; double value; };
  std::vector<Entry> entries;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    unsigned long row, col;
    double value;
    if (std::sscanf(line.c_str(), "%lu,%lu,%lf", &row, &col, &value) != 3)
      throw invalid_input("factors.csv: malformed U line " + std::to_string(lineno));
    if (col >= sigmas.size())
      throw invalid_input("factors.csv: column index out of range on line " +
                          std::to_string(lineno));
    entries.push_back({row, col, value});
    n = std::max(n, static_cast<std::size_t>(row) + 1);
  }
  if (entries.empty()) throw invalid_input("factors.csv: no U entries");

  CpFactors f(n, sigmas.size());
  for (std::size_t l = 0; l < sigmas.size(); ++l) f.sigma(l) = sigmas[l];
  for (const auto& e : entries) f.column(e.col)[e.row] = e.value;
  return f;
}

CpFactors load_factors_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open: " + path);
  return load_factors_csv(in);
}

void save_caps_csv(const std::vector<double>& caps, std::ostream& out) {
  out << "row,cap\n";
  for (std::size_t i = 0; i < caps.size(); ++i)
    out << i << ',' << g17(caps[i]) << '\n';
}

std::vector<double> load_caps_csv(std::istream& in, std::size_t n) {
  std::string line;
  if (!std::getline(in, line) || line != "row,cap")
    throw invalid_input("caps.csv: missing `row,cap` header");
  std::map<std::size_t, double> caps;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    unsigned long row;
    double cap;
    if (std::sscanf(line.c_str(), "%lu,%lf", &row, &cap) != 2)
      throw invalid_input("caps.csv: malformed line " + std::to_string(lineno));
    if (cap < 0.0) throw invalid_input("caps.csv: caps must be nonnegative");
    caps[row] = cap;
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = caps.find(i);
    if (it == caps.end())
      throw invalid_input("caps.csv: missing row " + std::to_string(i));
    out[i] = it->second;
  }
  return out;
}

std::vector<double> load_caps_csv_file(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open: " + path);
  return load_caps_csv(in, n);
}

}  // namespace tensamp
