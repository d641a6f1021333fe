#ifndef PAIRDESIGN_DESIGNS_HPP
#define PAIRDESIGN_DESIGNS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pairdesign/matrix.hpp"
#include "pairdesign/model.hpp"

namespace pairdesign {

inline constexpr double kWeightSumTolerance = 1e-12;

/// Diagonal values of the information matrix of an invariant design: one
/// value per effect block (main, first-order, second-order interactions).
struct DiagonalInfo {
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
};

/// An invariant approximate design, identified by its weights over the
/// comparison depths 1..K. Depth 0 carries no information and is rejected.
class DepthDesign {
 public:
  DepthDesign(int k_count, std::map<int, double> weights)
      : attribute_count_(k_count), weights_(std::move(weights)) {
    if (k_count < 1) throw std::domain_error("DepthDesign: K must be >= 1");
    if (weights_.empty()) throw std::domain_error("DepthDesign: empty support");
    double sum = 0.0;
    for (auto it = weights_.begin(); it != weights_.end();) {
      const auto [d, w] = *it;
      if (d < 1 || d > k_count)
        throw std::domain_error("DepthDesign: depth " + std::to_string(d) +
                                " outside 1.." + std::to_string(k_count));
      if (w < 0.0) throw std::domain_error("DepthDesign: negative weight");
      sum += w;
      it = (w == 0.0) ? weights_.erase(it) : std::next(it);
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance)
      throw std::domain_error("DepthDesign: weights sum to " + std::to_string(sum) +
                              ", expected 1");
    if (weights_.empty()) throw std::domain_error("DepthDesign: empty support");
  }

  static DepthDesign point_mass(int k_count, int d) {
    return DepthDesign(k_count, {{d, 1.0}});
  }

  int attribute_count() const { return attribute_count_; }
  const std::map<int, double>& weights() const { return weights_; }
  double weight(int d) const {
    auto it = weights_.find(d);
    return it == weights_.end() ? 0.0 : it->second;
  }
  std::vector<int> support() const {
    std::vector<int> out;
    out.reserve(weights_.size());
    for (const auto& [d, w] : weights_) out.push_back(d);
    return out;
  }

 private:
  int attribute_count_;
  std::map<int, double> weights_;
};

/// A discrete probability measure on ordered pairs of profiles.
class PairDesign {
 public:
  PairDesign(int k_count, std::map<PairedComparison, double> support)
      : attribute_count_(k_count), support_(std::move(support)) {
    if (support_.empty()) throw std::domain_error("PairDesign: empty support");
    double sum = 0.0;
    for (const auto& [pair, w] : support_) {
      if (pair.first.size() != k_count)
        throw std::domain_error("PairDesign: pair length does not match K");
      if (w < 0.0) throw std::domain_error("PairDesign: negative weight");
      sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance)
      throw std::domain_error("PairDesign: weights must sum to 1");
  }

  int attribute_count() const { return attribute_count_; }
  const std::map<PairedComparison, double>& support() const { return support_; }

 private:
  int attribute_count_;
  std::map<PairedComparison, double> support_;
};

/// A finite design: N comparisons listed with multiplicity.
struct ExactDesign {
  int attribute_count = 0;
  std::vector<PairedComparison> pairs;

  std::int64_t total() const { return static_cast<std::int64_t>(pairs.size()); }
};

/// Closed-form diagonal information values of the uniform design on the
/// depth-d orbit:
///   h1 = 4d/K
///   h2 = 8d(K-d) / (K(K-1))
///   h3 = 4d(3K^2 - 6dK + 4d^2 - 3K + 2) / (K(K-1)(K-2))
/// Integer numerators and denominators are formed exactly and divided last.
inline DiagonalInfo h_values(int d, int k_count) {
  if (k_count < 3)
    throw std::domain_error("h_values: K must be >= 3 (second-order block undefined)");
  if (d < 0 || d > k_count) throw std::domain_error("h_values: depth out of range");
  const std::int64_t k = k_count, dd = d;
  DiagonalInfo h;
  h.h1 = static_cast<double>(4 * dd) / static_cast<double>(k);
  h.h2 = static_cast<double>(8 * dd * (k - dd)) / static_cast<double>(k * (k - 1));
  const std::int64_t q = 3 * k * k - 6 * dd * k + 4 * dd * dd - 3 * k + 2;
  h.h3 = static_cast<double>(4 * dd * q) / static_cast<double>(k * (k - 1) * (k - 2));
  return h;
}

/// Diagonal information of a depth-weight mixture: the convex combination of
/// the per-depth values.
inline DiagonalInfo info_diagonal(const DepthDesign& design) {
  DiagonalInfo acc;
  for (const auto& [d, w] : design.weights()) {
    const DiagonalInfo h = h_values(d, design.attribute_count());
    acc.h1 += w * h.h1;
    acc.h2 += w * h.h2;
    acc.h3 += w * h.h3;
  }
  return acc;
}

/// Full p x p information matrix M(xi) = sum of weighted outer products of
/// pair difference vectors. Accumulates in extended precision in a fixed
/// order so results are deterministic.
inline DenseMatrix info_matrix_full(const PairDesign& design, const ModelSpec& spec) {
  if (design.attribute_count() != spec.attribute_count)
    throw std::domain_error("info_matrix_full: design and model disagree on K");
  const int p = static_cast<int>(spec.p_total);
  std::vector<long double> acc(static_cast<std::size_t>(p) * static_cast<std::size_t>(p), 0.0L);
  for (const auto& [pair, w] : design.support()) {
    const std::vector<double> diff = difference_vector(pair, spec);
    for (int r = 0; r < p; ++r) {
      const long double wr = static_cast<long double>(w) * diff[static_cast<std::size_t>(r)];
      if (wr == 0.0L) continue;
      for (int c = 0; c < p; ++c)
        acc[static_cast<std::size_t>(r) * p + c] += wr * diff[static_cast<std::size_t>(c)];
    }
  }
  DenseMatrix m(p);
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < p; ++c)
      m(r, c) = static_cast<double>(acc[static_cast<std::size_t>(r) * p + c]);
  return m;
}

/// log det M of an invariant design, computed blockwise from the diagonal:
/// p1*ln(h1) + p2*ln(h2) + p3*ln(h3). A vanishing block with positive
/// dimension makes the design singular; that is reported as a flagged value
/// rather than an error so optimizers can reject candidates smoothly.
struct LogDetValue {
  double value = -std::numeric_limits<double>::infinity();
  bool singular = true;
};

inline LogDetValue log_det(const DepthDesign& design) {
  const ModelSpec spec(design.attribute_count());
  const DiagonalInfo h = info_diagonal(design);
  const double hs[3] = {h.h1, h.h2, h.h3};
  const std::int64_t ps[3] = {spec.p_main, spec.p_first_order, spec.p_second_order};
  double value = 0.0;
  for (int r = 0; r < 3; ++r) {
    if (ps[r] == 0) continue;
    if (hs[r] <= 0.0) return {};
    value += static_cast<double>(ps[r]) * std::log(hs[r]);
  }
  return {value, false};
}

/// Spreads each depth weight w_d uniformly over the N_d ordered pairs of its
/// orbit. Requires K within the enumeration cap.
inline PairDesign depth_to_pair_design(const DepthDesign& design) {
  const ModelSpec spec(design.attribute_count());
  detail::require_enumerable(spec.attribute_count, "depth_to_pair_design");
  std::map<PairedComparison, double> support;
  for (const auto& [d, w] : design.weights()) {
    const double per_pair = w / static_cast<double>(orbit_size(spec.attribute_count, d));
    for_each_orbit_pair(spec, d, [&](const PairedComparison& pair) {
      support.emplace(pair, per_pair);
    });
  }
  return PairDesign(design.attribute_count(), std::move(support));
}

/// Result of rounding an approximate design to N comparisons.
/// `support_truncated` flags N smaller than the support size, in which case
/// some support pairs necessarily receive no replicate.
struct RealizedDesign {
  ExactDesign design;
  bool support_truncated = false;
};

/// Largest-remainder apportionment of N replicates over the support of the
/// expanded pair design: floor(N w) copies each, remaining copies to the
/// largest fractional parts, ties broken by pair order.
inline RealizedDesign realize_exact(const DepthDesign& design, std::int64_t n_total) {
  if (n_total < 1) throw std::domain_error("realize_exact: N must be >= 1");
  const PairDesign pairs = depth_to_pair_design(design);
  const std::size_t support_size = pairs.support().size();

  struct Entry {
    const PairedComparison* pair;
    std::int64_t base;
    double remainder;
    std::size_t order;
  };
  std::vector<Entry> entries;
  entries.reserve(support_size);
  std::int64_t assigned = 0;
  std::size_t order = 0;
  for (const auto& [pair, w] : pairs.support()) {
    const double target = static_cast<double>(n_total) * w;
    std::int64_t base = static_cast<std::int64_t>(std::floor(target));
    double rem = target - static_cast<double>(base);
    if (rem > 1.0 - 1e-9) {  // target was integral up to float noise
      base += 1;
      rem = 0.0;
    }
    assigned += base;
    entries.push_back({&pair, base, rem, order++});
  }
  std::int64_t leftover = n_total - assigned;
  if (leftover < 0) throw std::logic_error("realize_exact: apportionment overshoot");

  std::vector<std::size_t> by_remainder(entries.size());
  std::iota(by_remainder.begin(), by_remainder.end(), std::size_t{0});
  std::stable_sort(by_remainder.begin(), by_remainder.end(),
                   [&](std::size_t a, std::size_t b) {
                     return entries[a].remainder > entries[b].remainder;
                   });
  for (std::int64_t i = 0; i < leftover; ++i)
    entries[by_remainder[static_cast<std::size_t>(i)]].base += 1;

  ExactDesign out;
  out.attribute_count = design.attribute_count();
  out.pairs.reserve(static_cast<std::size_t>(n_total));
  for (const Entry& e : entries)
    for (std::int64_t c = 0; c < e.base; ++c) out.pairs.push_back(*e.pair);
  return {std::move(out), static_cast<std::int64_t>(support_size) > n_total};
}

/// Empirical measure of an exact design: multiplicity / N per distinct pair.
inline PairDesign to_pair_design(const ExactDesign& design) {
  if (design.pairs.empty()) throw std::domain_error("to_pair_design: empty design");
  std::map<PairedComparison, double> support;
  const double unit = 1.0 / static_cast<double>(design.total());
  for (const PairedComparison& pair : design.pairs) {
    auto [it, inserted] = support.emplace(pair, unit);
    if (!inserted) it->second += unit;
  }
  return PairDesign(design.attribute_count, std::move(support));
}

/// Per-observation information matrix M(xi_N) of an exact design.
inline DenseMatrix info_matrix_exact(const ExactDesign& design, const ModelSpec& spec) {
  return info_matrix_full(to_pair_design(design), spec);
}

}  // namespace pairdesign

#endif  // PAIRDESIGN_DESIGNS_HPP
