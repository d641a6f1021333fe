#ifndef PAIRDESIGN_MODEL_HPP
#define PAIRDESIGN_MODEL_HPP

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pairdesign/combinatorics.hpp"
#include "pairdesign/errors.hpp"

namespace pairdesign {

/// Dimensions of the second-order-interactions model for K two-level
/// attributes. The parameter vector stacks K main effects, C(K,2)
/// first-order and C(K,3) second-order interaction effects, so
/// p = K + C(K,2) + C(K,3) = K(K^2+5)/6.
struct ModelSpec {
  int attribute_count = 0;          // K
  std::int64_t p_main = 0;          // K
  std::int64_t p_first_order = 0;   // C(K,2)
  std::int64_t p_second_order = 0;  // C(K,3)
  std::int64_t p_total = 0;

  explicit ModelSpec(int k) : attribute_count(k) {
    if (k < 1) throw std::domain_error("ModelSpec: attribute count must be >= 1");
    p_main = k;
    p_first_order = binomial(k, 2);
    p_second_order = binomial(k, 3);
    p_total = p_main + p_first_order + p_second_order;
    // closed form K(K^2+5)/6 must agree with the stacked block dimensions
    if (p_total * 6 != std::int64_t{k} * (std::int64_t{k} * k + 5))
      throw std::logic_error("ModelSpec: dimension bookkeeping broken");
  }
};

/// A full level assignment for one alternative: levels[k] is 1 or 2.
class Profile {
 public:
  explicit Profile(std::vector<int> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) throw std::domain_error("Profile: empty level sequence");
    for (int v : levels_)
      if (v != 1 && v != 2)
        throw std::domain_error("Profile: levels must be 1 or 2");
  }

  int size() const { return static_cast<int>(levels_.size()); }
  int level(int k) const { return levels_[static_cast<std::size_t>(k)]; }
  const std::vector<int>& levels() const { return levels_; }

  friend bool operator==(const Profile& a, const Profile& b) = default;
  friend auto operator<=>(const Profile& a, const Profile& b) {
    return a.levels_ <=> b.levels_;
  }

 private:
  std::vector<int> levels_;
};

/// Number of attributes in which the two profiles differ.
inline int comparison_depth(const Profile& a, const Profile& b) {
  if (a.size() != b.size())
    throw std::domain_error("comparison_depth: profiles of unequal length");
  int d = 0;
  for (int k = 0; k < a.size(); ++k) d += (a.level(k) != b.level(k)) ? 1 : 0;
  return d;
}

/// An ordered pair of alternatives with its comparison depth cached.
struct PairedComparison {
  Profile first;
  Profile second;
  int depth;

  PairedComparison(Profile f, Profile s)
      : first(std::move(f)), second(std::move(s)), depth(comparison_depth(first, second)) {}

  friend bool operator==(const PairedComparison& a, const PairedComparison& b) {
    return a.first == b.first && a.second == b.second;
  }
  friend bool operator<(const PairedComparison& a, const PairedComparison& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  }
};

inline int comparison_depth(const PairedComparison& pair) {
  return comparison_depth(pair.first, pair.second);
}

/// Effect coding: level 1 -> +1, level 2 -> -1.
inline int effect_code(int level) {
  if (level == 1) return 1;
  if (level == 2) return -1;
  throw std::domain_error("effect_code: level must be 1 or 2");
}

namespace detail {

inline void require_profile_matches(const Profile& p, const ModelSpec& spec,
                                    const char* where) {
  if (p.size() != spec.attribute_count)
    throw std::domain_error(std::string(where) + ": profile length does not match model");
}

}  // namespace detail

/// Regression vector f(i) of length p: effect codes of the K levels, then
/// products over attribute pairs (k < l) and triples (k < l < m), both in
/// lexicographic index order. Every entry is +1 or -1.
inline std::vector<double> regression_vector(const Profile& profile, const ModelSpec& spec) {
  detail::require_profile_matches(profile, spec, "regression_vector");
  const int k_count = spec.attribute_count;
  std::vector<int> g(static_cast<std::size_t>(k_count));
  for (int k = 0; k < k_count; ++k) g[static_cast<std::size_t>(k)] = effect_code(profile.level(k));

  std::vector<double> f;
  f.reserve(static_cast<std::size_t>(spec.p_total));
  for (int k = 0; k < k_count; ++k) f.push_back(g[static_cast<std::size_t>(k)]);
  for (int k = 0; k < k_count; ++k)
    for (int l = k + 1; l < k_count; ++l)
      f.push_back(g[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(l)]);
  for (int k = 0; k < k_count; ++k)
    for (int l = k + 1; l < k_count; ++l)
      for (int m = l + 1; m < k_count; ++m)
        f.push_back(g[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(l)] *
                    g[static_cast<std::size_t>(m)]);
  return f;
}

/// Difference f(i) - f(j) of the regression vectors of a pair; entries are
/// -2, 0 or +2.
inline std::vector<double> difference_vector(const PairedComparison& pair,
                                             const ModelSpec& spec) {
  detail::require_profile_matches(pair.first, spec, "difference_vector");
  detail::require_profile_matches(pair.second, spec, "difference_vector");
  std::vector<double> fi = regression_vector(pair.first, spec);
  const std::vector<double> fj = regression_vector(pair.second, spec);
  for (std::size_t t = 0; t < fi.size(); ++t) fi[t] -= fj[t];
  return fi;
}

/// Number of ordered pairs at comparison depth d: N_d = 2^K * C(K, d).
inline std::int64_t orbit_size(int k_count, int d) {
  if (k_count < 1) throw std::domain_error("orbit_size: K must be >= 1");
  if (d < 0 || d > k_count) throw std::domain_error("orbit_size: depth out of range");
  return pow2(k_count) * binomial(k_count, d);
}

/// Cap on K for operations that enumerate full orbits. Defaults to 20 and
/// can be overridden with the PAIRDESIGN_MAX_K environment variable.
inline int enumeration_cap() {
  static const int cap = [] {
    if (const char* env = std::getenv("PAIRDESIGN_MAX_K")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && v >= 1 && v <= 62) return static_cast<int>(v);
    }
    return 20;
  }();
  return cap;
}

namespace detail {

inline void require_enumerable(int k_count, const char* where) {
  if (k_count > enumeration_cap())
    throw CapacityError(std::string(where) + ": K = " + std::to_string(k_count) +
                        " exceeds enumeration cap " + std::to_string(enumeration_cap()));
}

// Emits, for a fixed first profile, every second profile at the requested
// depth in lexicographic order. At each position the smaller of the two
// candidate digits (keep or flip) is explored first, which makes the emitted
// j sequence lexicographically increasing.
template <typename Fn>
void walk_second_profiles(const std::vector<int>& first, int pos, int flips_left,
                          std::vector<int>& second, Fn&& emit) {
  const int k_count = static_cast<int>(first.size());
  if (pos == k_count) {
    emit(second);
    return;
  }
  const int remaining = k_count - pos;
  const int keep = first[static_cast<std::size_t>(pos)];
  const int flip = 3 - keep;
  const int lo = keep < flip ? keep : flip;
  const int hi = keep < flip ? flip : keep;
  for (int digit : {lo, hi}) {
    const int used = (digit == flip) ? 1 : 0;
    const int next_left = flips_left - used;
    if (next_left < 0 || next_left > remaining - 1) continue;
    second[static_cast<std::size_t>(pos)] = digit;
    walk_second_profiles(first, pos + 1, next_left, second, emit);
  }
}

}  // namespace detail

/// Streams every ordered pair of the orbit at depth d exactly once, ordered
/// lexicographically by (first, second). The callback receives a
/// `const PairedComparison&`.
template <typename Fn>
void for_each_orbit_pair(const ModelSpec& spec, int d, Fn&& fn) {
  const int k_count = spec.attribute_count;
  if (d < 0 || d > k_count)
    throw std::domain_error("for_each_orbit_pair: depth out of range");
  detail::require_enumerable(k_count, "for_each_orbit_pair");

  std::vector<int> first(static_cast<std::size_t>(k_count), 1);
  std::vector<int> second(static_cast<std::size_t>(k_count), 1);
  const std::int64_t profile_count = pow2(k_count);
  for (std::int64_t code = 0; code < profile_count; ++code) {
    for (int k = 0; k < k_count; ++k)
      first[static_cast<std::size_t>(k)] =
          1 + static_cast<int>((code >> (k_count - 1 - k)) & 1);
    detail::walk_second_profiles(first, 0, d, second, [&](const std::vector<int>& j) {
      fn(PairedComparison(Profile(first), Profile(j)));
    });
  }
}

/// Materializes the orbit at depth d. Use for_each_orbit_pair for large K.
inline std::vector<PairedComparison> enumerate_orbit(const ModelSpec& spec, int d) {
  std::vector<PairedComparison> out;
  out.reserve(static_cast<std::size_t>(orbit_size(spec.attribute_count, d)));
  for_each_orbit_pair(spec, d, [&](const PairedComparison& pair) { out.push_back(pair); });
  return out;
}

}  // namespace pairdesign

#endif  // PAIRDESIGN_MODEL_HPP
