#ifndef PAIRDESIGN_ORACLE_HPP
#define PAIRDESIGN_ORACLE_HPP

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pairdesign/designs.hpp"
#include "pairdesign/matrix.hpp"
#include "pairdesign/model.hpp"

namespace pairdesign {

/// Hard cap for the brute-force paths: 4^8 = 65536 pairs at p = 92 is the
/// largest instance the oracle is meant to grind through.
inline constexpr int kOracleMaxK = 8;

namespace detail {

inline void require_oracle_k(int k_count, const char* where) {
  if (k_count > kOracleMaxK)
    throw CapacityError(std::string(where) + ": K = " + std::to_string(k_count) +
                        " exceeds oracle cap " + std::to_string(kOracleMaxK));
}

}  // namespace detail

/// Information matrix by exhaustive summation of weighted outer products.
/// Difference-vector entries are in {-2, 0, 2}, so each outer product is
/// integer valued; pairs sharing a weight are accumulated in 64-bit integers
/// and scaled by the weight once at the end. For designs that are uniform on
/// orbits this removes all floating-point drift from the summation.
inline DenseMatrix brute_force_info(const PairDesign& design, const ModelSpec& spec) {
  if (design.attribute_count() != spec.attribute_count)
    throw std::domain_error("brute_force_info: design and model disagree on K");
  detail::require_oracle_k(spec.attribute_count, "brute_force_info");

  const int p = static_cast<int>(spec.p_total);
  const std::size_t cells = static_cast<std::size_t>(p) * static_cast<std::size_t>(p);
  std::map<double, std::vector<std::int64_t>> buckets;  // weight -> integer sum
  std::vector<std::int64_t> diff(static_cast<std::size_t>(p));
  for (const auto& [pair, w] : design.support()) {
    const std::vector<double> dv = difference_vector(pair, spec);
    for (int t = 0; t < p; ++t)
      diff[static_cast<std::size_t>(t)] = static_cast<std::int64_t>(dv[static_cast<std::size_t>(t)]);
    auto [it, inserted] = buckets.try_emplace(w);
    if (inserted) it->second.assign(cells, 0);
    std::vector<std::int64_t>& sum = it->second;
    for (int r = 0; r < p; ++r) {
      const std::int64_t dr = diff[static_cast<std::size_t>(r)];
      if (dr == 0) continue;
      for (int c = 0; c < p; ++c)
        sum[static_cast<std::size_t>(r) * p + c] += dr * diff[static_cast<std::size_t>(c)];
    }
  }

  DenseMatrix m(p);
  for (const auto& [w, sum] : buckets)
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < p; ++c)
        m(r, c) += w * static_cast<double>(sum[static_cast<std::size_t>(r) * p + c]);
  return m;
}

/// Counts, over the orbit of depth d, how many pairs differ in exactly t of
/// the attributes backing one representative regression column per block:
/// column {1} for main effects, {1,2} for first-order and {1,2,3} for
/// second-order interactions. By orbit symmetry every column of a block has
/// the same counts.
struct OrbitCensus {
  int attribute_count = 0;
  int depth = 0;
  std::int64_t orbit_pairs = 0;
  std::array<std::int64_t, 2> main_by_differ{};          // t = 0..1
  std::array<std::int64_t, 3> first_order_by_differ{};   // t = 0..2
  std::array<std::int64_t, 4> second_order_by_differ{};  // t = 0..3

  std::int64_t main_nonzero() const { return main_by_differ[1]; }
  std::int64_t first_order_nonzero() const { return first_order_by_differ[1]; }
  std::int64_t second_order_nonzero() const {
    return second_order_by_differ[1] + second_order_by_differ[3];
  }

  // Closed-form counts the enumeration must reproduce exactly.
  static std::int64_t main_nonzero_closed(int k, int d) {
    return binomial(k - 1, d - 1) * pow2(k);
  }
  static std::int64_t first_order_nonzero_closed(int k, int d) {
    return 2 * binomial(k - 2, d - 1) * pow2(k);
  }
  static std::int64_t second_order_nonzero_closed(int k, int d) {
    return (binomial(k - 3, d - 3) + 3 * binomial(k - 3, d - 1)) * pow2(k);
  }
};

inline OrbitCensus census(int k_count, int d) {
  if (k_count < 1) throw std::domain_error("census: K must be >= 1");
  detail::require_oracle_k(k_count, "census");
  const ModelSpec spec(k_count);
  if (d < 0 || d > k_count) throw std::domain_error("census: depth out of range");

  OrbitCensus out;
  out.attribute_count = k_count;
  out.depth = d;
  for_each_orbit_pair(spec, d, [&](const PairedComparison& pair) {
    out.orbit_pairs += 1;
    int differ[3] = {0, 0, 0};
    for (int k = 0; k < std::min(k_count, 3); ++k)
      differ[k] = (pair.first.level(k) != pair.second.level(k)) ? 1 : 0;
    out.main_by_differ[static_cast<std::size_t>(differ[0])] += 1;
    if (k_count >= 2)
      out.first_order_by_differ[static_cast<std::size_t>(differ[0] + differ[1])] += 1;
    if (k_count >= 3)
      out.second_order_by_differ[static_cast<std::size_t>(differ[0] + differ[1] + differ[2])] += 1;
  });
  return out;
}

}  // namespace pairdesign

#endif  // PAIRDESIGN_ORACLE_HPP
