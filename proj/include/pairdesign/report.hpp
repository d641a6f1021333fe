#ifndef PAIRDESIGN_REPORT_HPP
#define PAIRDESIGN_REPORT_HPP

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "pairdesign/designs.hpp"
#include "pairdesign/model.hpp"
#include "pairdesign/optimality.hpp"

namespace pairdesign {

namespace detail {

inline std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace detail

/// Reference table of the optimal two-depth designs for K = 4..10: the
/// weight on the full comparison depth K, the intermediate depth d* and its
/// weight. Values are recomputed, not stored.
inline std::string format_weight_table(bool csv) {
  std::ostringstream out;
  std::vector<OptimalDesignResult> results;
  for (int k = 4; k <= 10; ++k) results.push_back(d_optimal_design(k));

  if (csv) {
    out << "K,w_K,d_star,w_d_star\n";
    for (const auto& r : results) {
      const int k = r.design.attribute_count();
      const int d_star = r.support_depths.front();
      out << k << ',' << detail::fixed3(r.design.weight(k)) << ',' << d_star << ','
          << detail::fixed3(r.design.weight(d_star)) << '\n';
    }
    return out.str();
  }

  out << "K      ";
  for (const auto& r : results) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%7d", r.design.attribute_count());
    out << buf;
  }
  out << "\nw_K    ";
  for (const auto& r : results)
    out << "  " << detail::fixed3(r.design.weight(r.design.attribute_count()));
  out << "\nd*     ";
  for (const auto& r : results) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%7d", r.support_depths.front());
    out << buf;
  }
  out << "\nw_d*   ";
  for (const auto& r : results)
    out << "  " << detail::fixed3(r.design.weight(r.support_depths.front()));
  out << '\n';
  return out.str();
}

/// Reference table of the normalized variance function v(d, xi*)/p of the
/// optimal designs, rows K = 4..10, columns d = 1..K.
inline std::string format_variance_table(bool csv) {
  std::ostringstream out;
  const char sep = csv ? ',' : ' ';
  if (csv) {
    out << "K";
    for (int d = 1; d <= 10; ++d) out << ",d" << d;
    out << '\n';
  } else {
    out << " K |";
    for (int d = 1; d <= 10; ++d) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%7d", d);
      out << buf;
    }
    out << '\n';
  }
  for (int k = 4; k <= 10; ++k) {
    const OptimalDesignResult r = d_optimal_design(k);
    const KwCertification cert = kw_certify(r.design);
    if (csv)
      out << k;
    else {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%2d |", k);
      out << buf;
    }
    for (int d = 1; d <= 10; ++d) {
      if (d > k) {
        if (csv) out << sep;
        continue;
      }
      if (csv)
        out << sep << detail::fixed3(cert.profile.normalized(d));
      else
        out << "  " << detail::fixed3(cert.profile.normalized(d));
    }
    out << '\n';
  }
  return out.str();
}

/// CSV listing of an exact design: header i_1..i_K,j_1..j_K, one row per
/// comparison, levels in {1,2}.
inline std::string format_exact_design_csv(const ExactDesign& design) {
  std::ostringstream out;
  const int k_count = design.attribute_count;
  for (int k = 1; k <= k_count; ++k) out << "i_" << k << ',';
  for (int k = 1; k <= k_count; ++k) out << "j_" << k << (k == k_count ? '\n' : ',');
  for (const PairedComparison& pair : design.pairs) {
    for (int k = 0; k < k_count; ++k) out << pair.first.level(k) << ',';
    for (int k = 0; k < k_count; ++k)
      out << pair.second.level(k) << (k == k_count - 1 ? '\n' : ',');
  }
  return out.str();
}

/// One line per K of a conjecture-probe report.
inline std::string format_probe_report(const std::vector<ProbeReport>& reports) {
  std::ostringstream out;
  for (const ProbeReport& r : reports) {
    out << "K=" << r.attribute_count;
    if (!r.computed) {
      out << "  ERROR " << r.error << '\n';
      continue;
    }
    out << "  support={";
    for (std::size_t i = 0; i < r.support_depths.size(); ++i)
      out << (i ? "," : "") << r.support_depths[i];
    out << "}  weights=(";
    std::size_t i = 0;
    for (const auto& [d, w] : r.weights) out << (i++ ? "," : "") << detail::fixed3(w);
    out << ")  certified=" << (r.certified ? "yes" : "no")
        << "  conjectured_d*=" << r.conjectured_depth
        << (r.matches_conjecture ? "" : "  COUNTEREXAMPLE") << '\n';
  }
  return out.str();
}

}  // namespace pairdesign

#endif  // PAIRDESIGN_REPORT_HPP
