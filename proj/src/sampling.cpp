#include "tensamp/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "tensamp/errors.hpp"
#include "tensamp/parallel.hpp"
#include "tensamp/rng.hpp"

namespace tensamp {

namespace {

constexpr std::uint64_t kBernoulliTag = 0xbe52u;
constexpr std::uint64_t kCategoricalTag = 0xca7u;
constexpr std::uint64_t kChunk = 16384;  // fixed draw-count partition

void check_row_norms(std::span<const double> row_norms) {
  if (row_norms.empty())
    throw invalid_input("entry distribution: empty row norms");
  bool any = false;
  for (double r : row_norms) {
    if (!(r >= 0.0) || !std::isfinite(r))
      throw invalid_input("entry distribution: row norms must be finite and nonnegative");
    any = any || r > 0.0;
  }
  if (!any)
    throw invalid_input("entry distribution: all row norms zero, distribution undefined");
}

std::vector<double> powed(std::span<const double> xs, double e) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = std::pow(xs[i], e);
  return out;
}

double sum(std::span<const double> xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc;
}

// Index of the cumulative cell containing u in [0, total).
std::size_t categorical_index(const std::vector<double>& cum, double u) {
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  std::size_t idx = static_cast<std::size_t>(it - cum.begin());
  if (idx >= cum.size()) idx = cum.size() - 1;
  return idx;
}

std::vector<double> cumulative(std::span<const double> xs) {
  std::vector<double> cum(xs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    acc += xs[i];
    cum[i] = acc;
  }
  return cum;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::uniform: return "uniform";
    case Family::l1: return "l1";
    case Family::l2: return "l2";
    case Family::sum_l3: return "suml3";
    case Family::prod_l3: return "prodl3";
    case Family::tensor_ls: return "tensorls";
    case Family::noisy_mixture: return "noisy";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  if (name == "uniform") return Family::uniform;
  if (name == "l1") return Family::l1;
  if (name == "l2") return Family::l2;
  if (name == "suml3") return Family::sum_l3;
  if (name == "prodl3") return Family::prod_l3;
  if (name == "tensorls") return Family::tensor_ls;
  if (name == "noisy") return Family::noisy_mixture;
  throw invalid_input("unknown distribution family: " + name);
}

NuStats nu_stats(std::span<const double> face_fro, double fro) {
  if (!(fro > 0.0)) throw invalid_input("nu_stats: zero tensor");
  NuStats s;
  s.fro = fro;
  const double floor = 1.0 / std::sqrt(static_cast<double>(face_fro.size()));
  s.nu.resize(face_fro.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < face_fro.size(); ++i) {
    s.nu[i] = face_fro[i] / fro + floor;
    acc += std::pow(s.nu[i], 1.5);
  }
  s.z = acc * acc;
  return s;
}

EntryDistribution EntryDistribution::from_samples(std::span<const double> row_norms) {
  check_row_norms(row_norms);
  EntryDistribution d;
  d.family_ = Family::tensor_ls;
  d.n_ = row_norms.size();
  d.row_stat_.assign(row_norms.begin(), row_norms.end());
  d.a_ = powed(row_norms, 3.0);
  d.a_sum_ = sum(d.a_);
  d.norm_const_ = d.a_sum_;  // ||X||_3
  return d;
}

EntryDistribution EntryDistribution::from_factor_rows(std::span<const double> row_norms) {
  check_row_norms(row_norms);
  EntryDistribution d;
  d.family_ = Family::tensor_ls;
  d.n_ = row_norms.size();
  d.row_stat_.assign(row_norms.begin(), row_norms.end());
  d.a_ = powed(row_norms, 1.5);
  d.a_sum_ = sum(d.a_);
  d.norm_const_ = d.a_sum_ * d.a_sum_;  // (sum ||U^i||^{3/2})^2
  return d;
}

EntryDistribution EntryDistribution::sum_l3(std::span<const double> row_norms) {
  check_row_norms(row_norms);
  EntryDistribution d;
  d.family_ = Family::sum_l3;
  d.n_ = row_norms.size();
  d.a_ = powed(row_norms, 3.0);
  d.row_stat_ = d.a_;
  d.a_sum_ = sum(d.a_);
  d.norm_const_ = d.a_sum_;
  return d;
}

EntryDistribution EntryDistribution::prod_l3(std::span<const double> row_norms) {
  check_row_norms(row_norms);
  EntryDistribution d;
  d.family_ = Family::prod_l3;
  d.n_ = row_norms.size();
  d.a_ = powed(row_norms, 3.0);
  d.row_stat_ = d.a_;
  d.a_sum_ = sum(d.a_);
  d.norm_const_ = d.a_sum_ * d.a_sum_;
  return d;
}

EntryDistribution EntryDistribution::l1(const DenseTensor3& t) {
  EntryDistribution d;
  d.family_ = Family::l1;
  d.n_ = t.dim();
  const auto flat = t.cube().flat();
  d.values_.resize(flat.size());
  double acc = 0.0;
  for (std::size_t idx = 0; idx < flat.size(); ++idx) {
    d.values_[idx] = std::abs(flat[idx]);
    acc += d.values_[idx];
  }
  if (!(acc > 0.0)) throw invalid_input("l1 distribution: zero tensor");
  d.value_mass_sum_ = acc;
  d.norm_const_ = acc;
  return d;
}

EntryDistribution EntryDistribution::l2(const DenseTensor3& t) {
  EntryDistribution d;
  d.family_ = Family::l2;
  d.n_ = t.dim();
  const auto flat = t.cube().flat();
  d.values_.resize(flat.size());
  double acc = 0.0;
  for (std::size_t idx = 0; idx < flat.size(); ++idx) {
    d.values_[idx] = flat[idx] * flat[idx];
    acc += d.values_[idx];
  }
  if (!(acc > 0.0)) throw invalid_input("l2 distribution: zero tensor");
  d.value_mass_sum_ = acc;
  d.norm_const_ = acc;
  return d;
}

EntryDistribution EntryDistribution::uniform(std::size_t n) {
  if (n == 0) throw invalid_input("uniform distribution: dimension must be positive");
  EntryDistribution d;
  d.family_ = Family::uniform;
  d.n_ = n;
  d.norm_const_ = 1.0;
  return d;
}

EntryDistribution EntryDistribution::noisy_mixture(const DenseTensor3& t) {
  EntryDistribution d;
  d.family_ = Family::noisy_mixture;
  d.n_ = t.dim();
  std::vector<double> face_fro(d.n_);
  for (std::size_t i = 0; i < d.n_; ++i) face_fro[i] = face_frobenius(t.cube(), i);
  const double fro = frobenius_norm(t);
  const NuStats stats = nu_stats(face_fro, fro);

  d.row_stat_ = stats.nu;
  d.a_ = powed(stats.nu, 1.5);
  d.a_sum_ = sum(d.a_);
  d.norm_const_ = stats.z;

  const auto flat = t.cube().flat();
  d.values_.resize(flat.size());
  double acc = 0.0;
  for (std::size_t idx = 0; idx < flat.size(); ++idx) {
    d.values_[idx] = flat[idx] * flat[idx];
    acc += d.values_[idx];
  }
  d.value_mass_sum_ = acc;
  return d;
}

double EntryDistribution::prob(std::size_t i, std::size_t j, std::size_t k) const {
  const double n = static_cast<double>(n_);
  switch (family_) {
    case Family::uniform:
      return 1.0 / (n * n * n);
    case Family::l1:
    case Family::l2:
      return values_[(i * n_ + j) * n_ + k] / value_mass_sum_;
    case Family::sum_l3:
      return (a_[i] + a_[j] + a_[k]) / (3.0 * n * n * a_sum_);
    case Family::prod_l3:
    case Family::tensor_ls:
      return (a_[i] * a_[j] + a_[j] * a_[k] + a_[k] * a_[i]) /
             (3.0 * n * a_sum_ * a_sum_);
    case Family::noisy_mixture:
      return 0.5 * (a_[i] * a_[j] + a_[j] * a_[k] + a_[k] * a_[i]) /
                 (3.0 * n * a_sum_ * a_sum_) +
             0.5 * values_[(i * n_ + j) * n_ + k] / value_mass_sum_;
  }
  return 0.0;
}

SamplePlan SamplePlan::make_auto(std::size_t n, std::uint64_t m, std::uint64_t seed) {
  SamplePlan plan;
  plan.m = m;
  plan.seed = seed;
  plan.mode = n <= 200 ? SampleMode::exact_bernoulli : SampleMode::fast_categorical;
  return plan;
}

namespace {

DrawResult draw_bernoulli(const EntryDistribution& dist, const SamplePlan& plan) {
  const std::size_t n = dist.dim();
  const double m = static_cast<double>(plan.m);
  std::vector<std::vector<DrawRecord>> slabs(n);
  std::vector<std::pair<std::size_t, std::size_t>> counts(n, {0, 0});

  parallel_for(n, [&](std::size_t i) {
    auto stream = rng::Stream::derive(plan.seed, kBernoulliTag, i);
    auto& slab = slabs[i];
    auto& [det, rnd] = counts[i];
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double p = dist.prob(i, j, k);
        if (!(p > 0.0)) continue;
        const double p_hat = std::min(m * p, 1.0);
        if (p_hat >= 1.0) {
          // Deterministic inclusion: consumes no randomness.
          slab.push_back({static_cast<std::uint32_t>(i),
                          static_cast<std::uint32_t>(j),
                          static_cast<std::uint32_t>(k), 1.0});
          ++det;
        } else if (stream.u01() < p_hat) {
          slab.push_back({static_cast<std::uint32_t>(i),
                          static_cast<std::uint32_t>(j),
                          static_cast<std::uint32_t>(k), p_hat});
          ++rnd;
        }
      }
  });

  DrawResult out;
  std::size_t total = 0;
  for (const auto& slab : slabs) total += slab.size();
  out.records.reserve(total);
  for (std::size_t i = 0; i < n; ++i) {
    out.records.insert(out.records.end(), slabs[i].begin(), slabs[i].end());
    out.deterministic_count += counts[i].first;
    out.random_count += counts[i].second;
  }
  return out;
}

// One iid triple from the distribution.
struct CategoricalTables {
  std::vector<double> row_cum;    // over row masses a_i
  double row_total = 0.0;
  std::vector<double> value_cum;  // over entry masses (value families)
  double value_total = 0.0;
};

std::array<std::uint32_t, 3> draw_triple(const EntryDistribution& dist,
                                         const CategoricalTables& tables,
                                         rng::Stream& stream) {
  const std::size_t n = dist.dim();
  auto cat_row = [&] {
    return static_cast<std::uint32_t>(
        categorical_index(tables.row_cum, stream.u01() * tables.row_total));
  };
  auto unif = [&] { return static_cast<std::uint32_t>(stream.below(n)); };
  auto cat_value = [&] {
    const std::size_t flat =
        categorical_index(tables.value_cum, stream.u01() * tables.value_total);
    return std::array<std::uint32_t, 3>{
        static_cast<std::uint32_t>(flat / (n * n)),
        static_cast<std::uint32_t>((flat / n) % n),
        static_cast<std::uint32_t>(flat % n)};
  };
  auto product_triple = [&] {
    // Uniform mixture of three (cat, cat, unif) slot arrangements.
    const std::uint64_t comp = stream.below(3);
    std::array<std::uint32_t, 3> t{};
    switch (comp) {
      case 0: t = {cat_row(), cat_row(), unif()}; break;
      case 1: t = {unif(), cat_row(), cat_row()}; break;
      default: t = {cat_row(), unif(), cat_row()}; break;
    }
    return t;
  };
  auto sum_triple = [&] {
    const std::uint64_t comp = stream.below(3);
    std::array<std::uint32_t, 3> t = {unif(), unif(), unif()};
    t[comp] = cat_row();
    return t;
  };

  switch (dist.family()) {
    case Family::uniform:
      return {unif(), unif(), unif()};
    case Family::l1:
    case Family::l2:
      return cat_value();
    case Family::sum_l3:
      return sum_triple();
    case Family::prod_l3:
    case Family::tensor_ls:
      return product_triple();
    case Family::noisy_mixture:
      return stream.u01() < 0.5 ? product_triple() : cat_value();
  }
  return {0, 0, 0};
}

DrawResult draw_categorical(const EntryDistribution& dist, const SamplePlan& plan) {
  const std::size_t n = dist.dim();
  CategoricalTables tables;
  if (!dist.row_mass().empty()) {
    tables.row_cum = cumulative(dist.row_mass());
    tables.row_total = tables.row_cum.back();
  }
  if (dist.has_value_component()) {
    tables.value_cum = cumulative(dist.value_mass());
    tables.value_total = tables.value_cum.back();
  }

  const std::uint64_t chunks = (plan.m + kChunk - 1) / kChunk;
  std::vector<std::vector<std::uint64_t>> keys(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    auto stream = rng::Stream::derive(plan.seed, kCategoricalTag, c);
    const std::uint64_t count = std::min(kChunk, plan.m - c * kChunk);
    auto& out = keys[c];
    out.reserve(count);
    for (std::uint64_t t = 0; t < count; ++t) {
      const auto [i, j, k] = draw_triple(dist, tables, stream);
      out.push_back((static_cast<std::uint64_t>(i) * n + j) * n + k);
    }
  });

  std::vector<std::uint64_t> all;
  all.reserve(plan.m);
  for (const auto& chunk : keys) all.insert(all.end(), chunk.begin(), chunk.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  DrawResult out;
  out.records.reserve(all.size());
  const double m = static_cast<double>(plan.m);
  for (std::uint64_t key : all) {
    const auto i = static_cast<std::uint32_t>(key / (n * n));
    const auto j = static_cast<std::uint32_t>((key / n) % n);
    const auto k = static_cast<std::uint32_t>(key % n);
    const double p = dist.prob(i, j, k);
    // True inclusion probability of a fixed triple over m iid draws.
    double p_hat = p >= 1.0 ? 1.0 : -std::expm1(m * std::log1p(-p));
    p_hat = std::min(p_hat, 1.0);
    out.records.push_back({i, j, k, p_hat});
    if (p_hat >= 1.0)
      ++out.deterministic_count;
    else
      ++out.random_count;
  }
  return out;
}

}  // namespace

DrawResult draw(const EntryDistribution& dist, const SamplePlan& plan) {
  if (plan.m < 1) throw invalid_input("draw: sample budget m must be >= 1");
  if (plan.mode == SampleMode::exact_bernoulli) return draw_bernoulli(dist, plan);
  return draw_categorical(dist, plan);
}

SampledTensor reweight(std::size_t n, const DrawResult& draws,
                       std::span<const double> values) {
  if (values.size() != draws.records.size())
    throw invalid_input("reweight: values not aligned with draws");
  std::vector<SampleRecord> recs;
  recs.reserve(draws.records.size());
  for (std::size_t idx = 0; idx < draws.records.size(); ++idx) {
    const auto& d = draws.records[idx];
    if (!(d.p_hat > 0.0)) throw invalid_input("reweight: p_hat must be positive");
    recs.push_back({d.i, d.j, d.k, values[idx], d.p_hat, 1.0 / d.p_hat});
  }
  return SampledTensor(n, std::move(recs));
}

}  // namespace tensamp
