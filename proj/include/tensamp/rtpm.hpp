#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "tensamp/tensor.hpp"

namespace tensamp {

/// Anything that can contract against two vectors. The power method only
/// ever touches a tensor through this surface, so sparse inputs stay sparse.
class TvpSource {
 public:
  virtual ~TvpSource() = default;
  virtual std::size_t dim() const = 0;
  virtual std::vector<double> tvp(std::span<const double> u,
                                  std::span<const double> v) const = 0;
};

class DenseTvp final : public TvpSource {
 public:
  explicit DenseTvp(const Cube& t) : t_(t) {}
  explicit DenseTvp(Cube&&) = delete;
  std::size_t dim() const override { return t_.dim(); }
  std::vector<double> tvp(std::span<const double> u,
                          std::span<const double> v) const override;

 private:
  const Cube& t_;
};

class SampledTvp final : public TvpSource {
 public:
  explicit SampledTvp(const SampledTensor& t) : t_(t) {}
  explicit SampledTvp(SampledTensor&&) = delete;
  std::size_t dim() const override { return t_.dim(); }
  std::vector<double> tvp(std::span<const double> u,
                          std::span<const double> v) const override;

 private:
  const SampledTensor& t_;
};

class CpTvp final : public TvpSource {
 public:
  explicit CpTvp(const CpFactors& f) : f_(f) {}
  explicit CpTvp(CpFactors&&) = delete;
  std::size_t dim() const override { return f_.dim(); }
  std::vector<double> tvp(std::span<const double> u,
                          std::span<const double> v) const override;

 private:
  const CpFactors& f_;
};

/// base minus already-extracted rank-1 terms, applied implicitly:
/// tvp(u,v) = base.tvp(u,v) - sum_l lambda_l <u_l,u> <u_l,v> u_l.
class DeflatedTvp final : public TvpSource {
 public:
  explicit DeflatedTvp(const TvpSource& base) : base_(base) {}
  void deflate(double lambda, std::vector<double> u);
  std::size_t dim() const override { return base_.dim(); }
  std::vector<double> tvp(std::span<const double> u,
                          std::span<const double> v) const override;

 private:
  const TvpSource& base_;
  std::vector<double> lambdas_;
  std::vector<std::vector<double>> us_;
};

struct RtpmOptions {
  std::size_t restarts = 30;   // independent seeded starts
  std::size_t iterations = 100;  // power iterations per start (and per polish)
  std::uint64_t seed = 0;
};

/// One component: L restarts of u <- T(I,u,u)/||.||, candidate with largest
/// lambda = <u, T(I,u,u)> wins (ties to the lowest restart index) and gets a
/// final polish of another N iterations. Throws numerical_error when every
/// restart collapses (degenerate tensor).
struct PowerExtractResult {
  double lambda;
  std::vector<double> u;
};
PowerExtractResult power_extract(const TvpSource& t, const RtpmOptions& opts);

/// r rounds of power_extract with implicit deflation in between. Columns are
/// sign-normalized so the largest-magnitude coordinate is positive; for odd
/// order that flips the sign of lambda, so the returned sigma are signed.
CpFactors rtpm(const TvpSource& t, std::size_t r, const RtpmOptions& opts);

}  // namespace tensamp
