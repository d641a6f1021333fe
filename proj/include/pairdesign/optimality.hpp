#ifndef PAIRDESIGN_OPTIMALITY_HPP
#define PAIRDESIGN_OPTIMALITY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pairdesign/designs.hpp"
#include "pairdesign/model.hpp"

namespace pairdesign {

inline constexpr double kCertificationTolerance = 1e-9;   // relative, on v/p
inline constexpr double kSupportEqualityTolerance = 1e-6; // relative, on v/p
inline constexpr double kWeightTolerance = 1e-12;
inline constexpr double kGradientTolerance = 1e-10;

namespace detail {

// 3K^2 - 6dK + 4d^2 - 3K + 2, the depth polynomial of the second-order block.
inline std::int64_t second_order_depth_poly(std::int64_t d, std::int64_t k) {
  return 3 * k * k - 6 * d * k + 4 * d * d - 3 * k + 2;
}

inline void require_nonsingular_blocks(const DiagonalInfo& h, const ModelSpec& spec,
                                       const char* where) {
  const double hs[3] = {h.h1, h.h2, h.h3};
  const std::int64_t ps[3] = {spec.p_main, spec.p_first_order, spec.p_second_order};
  static const char* names[3] = {"main", "first-order", "second-order"};
  for (int r = 0; r < 3; ++r)
    if (ps[r] > 0 && hs[r] <= 0.0)
      throw SingularError(std::string(where) + ": h" + std::to_string(r + 1) +
                              " = 0 (" + names[r] + " block)",
                          names[r]);
}

// Variance at depth d of an invariant design with diagonal values h.
inline double variance_from_diagonal(int d, const DiagonalInfo& h, int k_count) {
  const std::int64_t q = second_order_depth_poly(d, k_count);
  return 4.0 * d *
         (1.0 / h.h1 + static_cast<double>(k_count - d) / h.h2 +
          static_cast<double>(q) / (6.0 * h.h3));
}

}  // namespace detail

/// Variance function v(d, xi) of an invariant design at comparison depth d:
///   v = 4d * ( 1/h1 + (K-d)/h2 + (3K^2-6dK+4d^2-3K+2)/(6 h3) ).
inline double variance_function(int d, const DepthDesign& design) {
  const int k_count = design.attribute_count();
  if (d < 0 || d > k_count) throw std::domain_error("variance_function: depth out of range");
  const ModelSpec spec(k_count);
  const DiagonalInfo h = info_diagonal(design);
  detail::require_nonsingular_blocks(h, spec, "variance_function");
  return detail::variance_from_diagonal(d, h, k_count);
}

/// Variance function of the uniform design on a single depth d', written
/// directly in the block dimensions:
///   (d/d') * ( p1 + p2 (K-d)/(K-d') + p3 Q(d)/Q(d') ).
inline double variance_single_depth(int d, int d_prime, int k_count) {
  if (k_count < 3) throw std::domain_error("variance_single_depth: K must be >= 3");
  if (d < 0 || d > k_count) throw std::domain_error("variance_single_depth: d out of range");
  if (d_prime < 1 || d_prime > k_count)
    throw std::domain_error("variance_single_depth: d' out of range");
  if (d_prime == k_count)
    throw SingularError("variance_single_depth: h2(K) = 0, first-order term divides by zero",
                        "first-order");
  const std::int64_t q_prime = detail::second_order_depth_poly(d_prime, k_count);
  if (q_prime == 0)
    throw SingularError("variance_single_depth: h3(d') = 0, second-order term divides by zero",
                        "second-order");
  const ModelSpec spec(k_count);
  const std::int64_t q = detail::second_order_depth_poly(d, k_count);
  const double ratio = static_cast<double>(d) / static_cast<double>(d_prime);
  return ratio * (static_cast<double>(spec.p_main) +
                  static_cast<double>(spec.p_first_order) *
                      (static_cast<double>(k_count - d) / static_cast<double>(k_count - d_prime)) +
                  static_cast<double>(spec.p_second_order) *
                      (static_cast<double>(q) / static_cast<double>(q_prime)));
}

/// Variance function evaluated at every depth 0..K.
struct VarianceProfile {
  int attribute_count = 0;
  std::int64_t parameter_count = 0;
  std::vector<double> values;  // index = depth, 0..K

  double at(int d) const { return values[static_cast<std::size_t>(d)]; }
  double normalized(int d) const {
    return at(d) / static_cast<double>(parameter_count);
  }
};

/// Kiefer-Wolfowitz check: an invariant design is D-optimal exactly when its
/// variance function stays below the parameter count at every depth.
struct KwCertification {
  VarianceProfile profile;
  double kw_max = 0.0;               // max over d of v(d)/p
  bool certified = false;            // kw_max <= 1 + 1e-9
  std::vector<int> equality_depths;  // depths with v(d)/p = 1 within 1e-6
};

inline KwCertification kw_certify(const DepthDesign& design) {
  const int k_count = design.attribute_count();
  const ModelSpec spec(k_count);
  const DiagonalInfo h = info_diagonal(design);
  detail::require_nonsingular_blocks(h, spec, "kw_certify");

  KwCertification out;
  out.profile.attribute_count = k_count;
  out.profile.parameter_count = spec.p_total;
  out.profile.values.resize(static_cast<std::size_t>(k_count) + 1);
  const double p = static_cast<double>(spec.p_total);
  for (int d = 0; d <= k_count; ++d) {
    const double v = detail::variance_from_diagonal(d, h, k_count);
    out.profile.values[static_cast<std::size_t>(d)] = v;
    out.kw_max = std::max(out.kw_max, v / p);
    if (std::abs(v / p - 1.0) <= kSupportEqualityTolerance)
      out.equality_depths.push_back(d);
  }
  out.certified = out.kw_max <= 1.0 + kCertificationTolerance;
  return out;
}

/// Depth maximizing the main-effect information h1(d) = 4d/K.
inline int optimal_depth_main(int k_count) {
  if (k_count < 1) throw std::domain_error("optimal_depth_main: K must be >= 1");
  return k_count;
}

/// Depths maximizing the first-order information h2: K/2 for even K, the two
/// adjacent integers for odd K. Smaller depth listed first.
inline std::vector<int> optimal_depth_first_order(int k_count) {
  if (k_count < 2) throw std::domain_error("optimal_depth_first_order: K must be >= 2");
  if (k_count % 2 == 0) return {k_count / 2};
  return {(k_count - 1) / 2, (k_count + 1) / 2};
}

/// Depths maximizing the second-order information h3: {1, 3} for K = 3 and
/// {K} for K >= 4.
inline std::vector<int> optimal_depth_second_order(int k_count) {
  if (k_count < 3) throw std::domain_error("optimal_depth_second_order: K must be >= 3");
  if (k_count == 3) return {1, 3};
  return {k_count};
}

/// Closed-form weight of the full-depth component of the two-depth optimal
/// design, as available for K = 4..10.
struct AnalyticWeight {
  int intermediate_depth = 0;  // d*
  double full_depth_weight = 0.0;  // w_K; the intermediate depth gets 1 - w_K
};

inline std::optional<AnalyticWeight> analytic_weight(int k_count) {
  if (k_count < 4 || k_count > 10) return std::nullopt;
  const double k = k_count;
  AnalyticWeight out;
  if (k_count == 5 || k_count == 7 || k_count == 9) {
    out.intermediate_depth = (k_count - 1) / 2;
    const double radicand = std::pow(k, 6) - 12 * std::pow(k, 5) + 64 * std::pow(k, 4) -
                            198 * std::pow(k, 3) + 448 * k * k - 636 * k + 369;
    out.full_depth_weight =
        (2 * std::pow(k, 3) - 6 * k * k + 7 * k - k * std::sqrt(radicand) + 15) /
        (-std::pow(k, 4) + 2 * std::pow(k, 3) - 2 * k * k + 10 * k + 15);
  } else if (k_count == 4 || k_count == 6) {
    out.intermediate_depth = k_count / 2;
    out.full_depth_weight = (k * k - 6 * k + 11) / (k * k + 5);
  } else {  // K = 8 or 10
    out.intermediate_depth = k_count / 2 - 1;
    const double radicand =
        std::pow(k, 4) - 10 * std::pow(k, 3) + 37 * k * k - 60 * k + 180;
    out.full_depth_weight =
        (std::pow(k, 3) + 5 * k + (k - k * k) * std::sqrt(radicand) + 30) /
        (-std::pow(k, 4) + std::pow(k, 3) + k * k + 5 * k + 30);
  }
  return out;
}

namespace detail {

struct HTriple {
  double h[3] = {0.0, 0.0, 0.0};
};

inline HTriple h_triple(int d, int k_count) {
  const DiagonalInfo hv = h_values(d, k_count);
  return {{hv.h1, hv.h2, hv.h3}};
}

inline HTriple mix(const std::vector<HTriple>& hs, const std::vector<double>& w) {
  HTriple out;
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (int r = 0; r < 3; ++r) out.h[r] += w[i] * hs[i].h[r];
  return out;
}

inline double objective(const HTriple& h, const std::int64_t* ps) {
  double val = 0.0;
  for (int r = 0; r < 3; ++r) {
    if (ps[r] == 0) continue;
    if (h.h[r] <= 0.0) return -std::numeric_limits<double>::infinity();
    val += static_cast<double>(ps[r]) * std::log(h.h[r]);
  }
  return val;
}

// d/dw of the two-depth log-det objective at weight w on depth a. Vanishing
// mixture blocks are treated as one-sided infinities so bisection can start
// from the closed interval [0, 1].
inline double two_depth_slope(double w, const HTriple& ha, const HTriple& hb,
                              const std::int64_t* ps) {
  double slope = 0.0;
  for (int r = 0; r < 3; ++r) {
    if (ps[r] == 0) continue;
    const double num = ha.h[r] - hb.h[r];
    const double den = w * ha.h[r] + (1.0 - w) * hb.h[r];
    if (den <= 0.0) {
      if (num > 0.0) return std::numeric_limits<double>::infinity();
      if (num < 0.0) return -std::numeric_limits<double>::infinity();
      continue;
    }
    slope += static_cast<double>(ps[r]) * num / den;
  }
  return slope;
}

// Euclidean projection onto the probability simplex.
inline void project_to_simplex(std::vector<double>& w) {
  std::vector<double> u = w;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double running = 0.0, threshold = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    running += u[i];
    const double candidate = (running - 1.0) / static_cast<double>(i + 1);
    if (u[i] - candidate > 0.0) threshold = candidate;
  }
  for (double& x : w) x = std::max(0.0, x - threshold);
  double sum = 0.0;
  for (double x : w) sum += x;
  for (double& x : w) x /= sum;
}

}  // namespace detail

/// Maximizes log det M over the weight simplex on the given depths (at most
/// three). The two-depth case is solved by bisection on the stationarity
/// condition of the concave objective; the three-depth case by projected
/// gradient ascent on the simplex.
inline DepthDesign optimize_weights(int k_count, std::vector<int> depths) {
  if (k_count < 3) throw std::domain_error("optimize_weights: K must be >= 3");
  std::sort(depths.begin(), depths.end());
  depths.erase(std::unique(depths.begin(), depths.end()), depths.end());
  if (depths.empty() || depths.size() > 3)
    throw std::domain_error("optimize_weights: between 1 and 3 distinct depths required");
  for (int d : depths)
    if (d < 1 || d > k_count) throw std::domain_error("optimize_weights: depth out of range");

  const ModelSpec spec(k_count);
  const std::int64_t ps[3] = {spec.p_main, spec.p_first_order, spec.p_second_order};
  std::vector<detail::HTriple> hs;
  hs.reserve(depths.size());
  for (int d : depths) hs.push_back(detail::h_triple(d, k_count));

  // The whole family is singular when some block vanishes at every depth.
  for (int r = 0; r < 3; ++r) {
    if (ps[r] == 0) continue;
    double best = 0.0;
    for (const auto& h : hs) best = std::max(best, h.h[r]);
    if (best <= 0.0)
      throw SingularError("optimize_weights: block h" + std::to_string(r + 1) +
                          " vanishes on every candidate depth");
  }

  auto make_design = [&](const std::vector<double>& w) {
    std::map<int, double> weights;
    double sum = 0.0;
    for (std::size_t i = 0; i < depths.size(); ++i) sum += w[i];
    for (std::size_t i = 0; i < depths.size(); ++i)
      if (w[i] > 0.0) weights[depths[i]] = w[i] / sum;
    return DepthDesign(k_count, std::move(weights));
  };

  if (depths.size() == 1) return make_design({1.0});

  if (depths.size() == 2) {
    const detail::HTriple hb = hs[0], ha = hs[1];
    double lo = 0.0, hi = 1.0;
    if (detail::two_depth_slope(lo, ha, hb, ps) <= 0.0) return make_design({1.0, 0.0});
    if (detail::two_depth_slope(hi, ha, hb, ps) >= 0.0) return make_design({0.0, 1.0});
    while (hi - lo > kWeightTolerance * 1e-2) {
      const double mid = 0.5 * (lo + hi);
      if (detail::two_depth_slope(mid, ha, hb, ps) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    const double w = 0.5 * (lo + hi);
    return make_design({1.0 - w, w});
  }

  // Three depths: projected gradient ascent from the uniform start. The
  // gradient of log det at the current mixture is v(depth_i) by the trace
  // identity, so the KKT residual is measured on the variance scale.
  const std::size_t n = depths.size();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  double value = detail::objective(detail::mix(hs, w), ps);
  if (!std::isfinite(value))
    throw SingularError("optimize_weights: uniform start is singular");

  std::vector<double> grad(n), trial(n);
  const double p_scale = static_cast<double>(spec.p_total);
  double step = 1.0 / p_scale;
  for (int iter = 0; iter < 200000; ++iter) {
    const detail::HTriple hm = detail::mix(hs, w);
    for (std::size_t i = 0; i < n; ++i)
      grad[i] = detail::variance_from_diagonal(depths[i], hm, k_count);

    double active_max = -std::numeric_limits<double>::infinity();
    double active_min = std::numeric_limits<double>::infinity();
    double inactive_excess = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (w[i] > 0.0) {
        active_max = std::max(active_max, grad[i]);
        active_min = std::min(active_min, grad[i]);
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (w[i] == 0.0) inactive_excess = std::max(inactive_excess, grad[i] - active_max);
    const double residual = std::max(active_max - active_min, inactive_excess);
    if (residual <= kGradientTolerance) break;

    bool moved = false;
    double t = step;
    for (int back = 0; back < 80; ++back) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = w[i] + t * grad[i];
      detail::project_to_simplex(trial);
      const double trial_value = detail::objective(detail::mix(hs, trial), ps);
      if (trial_value > value) {
        w = trial;
        value = trial_value;
        moved = true;
        step = t * 2.0;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;  // no improving step representable
  }
  return make_design(w);
}

/// A certified D-optimal design together with its certificate data.
struct OptimalDesignResult {
  DepthDesign design;
  double logdet = 0.0;
  double kw_max = 0.0;
  bool certified = false;
  std::vector<int> support_depths;
};

/// Raised when the searched design fails Kiefer-Wolfowitz certification:
/// that signals a defect in the search, not bad user input, so the variance
/// profile travels with the error for diagnosis.
class CertificationError : public std::runtime_error {
 public:
  CertificationError(const std::string& what, KwCertification certification)
      : std::runtime_error(what), certification_(std::move(certification)) {}
  const KwCertification& certification() const { return certification_; }

 private:
  KwCertification certification_;
};

namespace detail {

inline OptimalDesignResult finish_certified(DepthDesign design) {
  // Drop numerically dead weights before certifying.
  std::map<int, double> weights;
  double sum = 0.0;
  for (const auto& [d, w] : design.weights())
    if (w > 1e-9) {
      weights[d] = w;
      sum += w;
    }
  for (auto& [d, w] : weights) w /= sum;
  DepthDesign pruned(design.attribute_count(), std::move(weights));

  const KwCertification cert = kw_certify(pruned);
  if (!cert.certified)
    throw CertificationError(
        "d_optimal_design: search result failed certification (max v/p = " +
            std::to_string(cert.kw_max) + ")",
        cert);
  OptimalDesignResult out{std::move(pruned), 0.0, cert.kw_max, true, {}};
  out.logdet = log_det(out.design).value;
  out.support_depths = out.design.support();
  return out;
}

}  // namespace detail

/// D-optimal design over all invariant designs. K = 3 uses the exact
/// rational solution (weights 3/7, 3/7, 1/7 on depths 1, 2, 3). For K >= 4
/// the search walks every support permitted by the three-depth bound --
/// {K, d}, {d, d+1} and {K, d, d+1} -- optimizes the weights on each, keeps
/// the best log det (preferring fewer depths on ties within 1e-10) and
/// certifies the winner.
inline OptimalDesignResult d_optimal_design(int k_count) {
  if (k_count < 3) throw std::domain_error("d_optimal_design: K must be >= 3");
  if (k_count == 3)
    return detail::finish_certified(
        DepthDesign(3, {{1, 3.0 / 7.0}, {2, 3.0 / 7.0}, {3, 1.0 / 7.0}}));

  std::optional<DepthDesign> best;
  double best_logdet = -std::numeric_limits<double>::infinity();
  auto consider = [&](std::vector<int> depths) {
    std::optional<DepthDesign> candidate;
    try {
      candidate = optimize_weights(k_count, std::move(depths));
    } catch (const SingularError&) {
      return;  // family carries no information in some block
    }
    const LogDetValue ld = log_det(*candidate);
    if (ld.singular) return;
    if (ld.value > best_logdet + 1e-10) {
      best_logdet = ld.value;
      best = std::move(candidate);
    }
  };

  for (int d = 1; d < k_count; ++d) consider({k_count, d});
  for (int d = 1; d < k_count; ++d) consider({d, d + 1});
  for (int d = 1; d + 1 < k_count; ++d) consider({k_count, d, d + 1});

  if (!best) throw SingularError("d_optimal_design: no nonsingular candidate found");
  return detail::finish_certified(*best);
}

/// Intermediate depth the closing conjecture predicts for the two-depth
/// optimal design: (K-1)/2 for odd K, K/2 for K in {4, 6}, K/2 - 1 for even
/// K >= 8.
inline int conjectured_intermediate_depth(int k_count) {
  if (k_count < 4) throw std::domain_error("conjectured_intermediate_depth: K must be >= 4");
  if (k_count % 2 == 1) return (k_count - 1) / 2;
  if (k_count == 4 || k_count == 6) return k_count / 2;
  return k_count / 2 - 1;
}

/// Per-K outcome of the conjecture sweep. The conjecture is checked against
/// the computed optimum, never assumed: a mismatch is reported as a
/// counterexample, not an error.
struct ProbeReport {
  int attribute_count = 0;
  bool computed = false;  // false when the per-K search raised an error
  std::string error;
  std::vector<int> support_depths;
  std::map<int, double> weights;
  double logdet = 0.0;
  double kw_max = 0.0;
  bool certified = false;
  int conjectured_depth = 0;
  bool matches_conjecture = false;
};

inline std::vector<ProbeReport> conjecture_probe(int k_max) {
  if (k_max < 4) throw std::domain_error("conjecture_probe: K_max must be >= 4");
  std::vector<ProbeReport> reports;
  reports.reserve(static_cast<std::size_t>(k_max) - 3);
  for (int k = 4; k <= k_max; ++k) {
    ProbeReport r;
    r.attribute_count = k;
    r.conjectured_depth = conjectured_intermediate_depth(k);
    try {
      const OptimalDesignResult opt = d_optimal_design(k);
      r.computed = true;
      r.support_depths = opt.support_depths;
      r.weights = opt.design.weights();
      r.logdet = opt.logdet;
      r.kw_max = opt.kw_max;
      r.certified = opt.certified;
      r.matches_conjecture =
          opt.support_depths == std::vector<int>{r.conjectured_depth, k};
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace pairdesign

#endif  // PAIRDESIGN_OPTIMALITY_HPP
