#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tensamp/tensor.hpp"

namespace tensamp {

/// factors.csv: a `col,sigma` section listing the r weights, then a
/// `row,col,value` section listing the entries of U.
void save_factors_csv(const CpFactors& f, std::ostream& out);
void save_factors_csv_file(const CpFactors& f, const std::string& path);
CpFactors load_factors_csv(std::istream& in);
CpFactors load_factors_csv_file(const std::string& path);

/// caps.csv: header `row,cap`, one bound per row index.
void save_caps_csv(const std::vector<double>& caps, std::ostream& out);
std::vector<double> load_caps_csv(std::istream& in, std::size_t n);
std::vector<double> load_caps_csv_file(const std::string& path, std::size_t n);

}  // namespace tensamp
