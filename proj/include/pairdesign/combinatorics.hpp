#ifndef PAIRDESIGN_COMBINATORICS_HPP
#define PAIRDESIGN_COMBINATORICS_HPP

#include <cstdint>
#include <stdexcept>

namespace pairdesign {

/// Binomial coefficient C(n, k) with the usual convention C(n, k) = 0 for
/// k < 0 or k > n. Exact in 64-bit for every (n, k) this library needs
/// (n <= 62 covers all enumeration paths; block dimensions use k <= 3).
inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n || n < 0) return 0;
  if (k > n - k) k = n - k;
  __int128 acc = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > INT64_MAX) throw std::overflow_error("binomial overflow");
  }
  return static_cast<std::int64_t>(acc);
}

inline std::int64_t pow2(int k) {
  if (k < 0 || k > 62) throw std::overflow_error("pow2 overflow");
  return std::int64_t{1} << k;
}

}  // namespace pairdesign

#endif  // PAIRDESIGN_COMBINATORICS_HPP
