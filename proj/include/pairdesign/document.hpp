#ifndef PAIRDESIGN_DOCUMENT_HPP
#define PAIRDESIGN_DOCUMENT_HPP

#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pairdesign/designs.hpp"
#include "pairdesign/optimality.hpp"
#include "pairdesign/version.hpp"

namespace pairdesign {

/// Weights travel as decimal strings with 12 significant digits, plus an
/// exact rational form ("3/7") when one is known. Parsing prefers the exact
/// form, so rational designs survive a round trip bit-for-bit.
struct SupportEntry {
  int depth = 0;
  double weight = 0.0;
  std::optional<std::string> weight_exact;
};

/// Serializable record of a certified design: what the CLI emits and reads.
struct DesignDocument {
  int attribute_count = 0;
  std::vector<SupportEntry> support;
  DiagonalInfo h;
  double logdet = 0.0;
  double kw_max = 0.0;
  bool certified = false;
  std::string tool_version = kVersion;
  std::string normalization = "per-observation";

  DepthDesign to_depth_design() const {
    std::map<int, double> weights;
    for (const SupportEntry& e : support) {
      if (weights.count(e.depth))
        throw std::invalid_argument("DesignDocument: duplicate depth in support");
      weights[e.depth] = e.weight;
    }
    return DepthDesign(attribute_count, std::move(weights));
  }
};

namespace detail {

inline std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", w);
  return buf;
}

inline double parse_exact_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == text.size())
    throw std::invalid_argument("DesignDocument: malformed rational '" + text + "'");
  std::size_t used = 0;
  const double num = std::stod(text.substr(0, slash), &used);
  if (used != slash) throw std::invalid_argument("DesignDocument: malformed rational");
  const std::string den_text = text.substr(slash + 1);
  const double den = std::stod(den_text, &used);
  if (used != den_text.size() || den == 0.0)
    throw std::invalid_argument("DesignDocument: malformed rational");
  return num / den;
}

}  // namespace detail

inline DesignDocument make_design_document(const OptimalDesignResult& result) {
  DesignDocument doc;
  doc.attribute_count = result.design.attribute_count();
  for (const auto& [d, w] : result.design.weights()) {
    SupportEntry e;
    e.depth = d;
    e.weight = w;
    doc.support.push_back(e);
  }
  // K = 3 is solved on the exact rational path; carry the fractions along.
  if (doc.attribute_count == 3 && doc.support.size() == 3 &&
      doc.support[0].weight == 3.0 / 7.0 && doc.support[1].weight == 3.0 / 7.0 &&
      doc.support[2].weight == 1.0 / 7.0) {
    doc.support[0].weight_exact = "3/7";
    doc.support[1].weight_exact = "3/7";
    doc.support[2].weight_exact = "1/7";
  }
  doc.h = info_diagonal(result.design);
  doc.logdet = result.logdet;
  doc.kw_max = result.kw_max;
  doc.certified = result.certified;
  return doc;
}

inline nlohmann::ordered_json to_json(const DesignDocument& doc) {
  nlohmann::ordered_json j;
  j["k"] = doc.attribute_count;
  j["support"] = nlohmann::ordered_json::array();
  for (const SupportEntry& e : doc.support) {
    nlohmann::ordered_json entry;
    entry["depth"] = e.depth;
    entry["weight"] = detail::format_weight(e.weight);
    if (e.weight_exact) entry["weight_exact"] = *e.weight_exact;
    j["support"].push_back(entry);
  }
  j["h"] = {{"h1", doc.h.h1}, {"h2", doc.h.h2}, {"h3", doc.h.h3}};
  j["logdet"] = doc.logdet;
  j["kw_max"] = doc.kw_max;
  j["certified"] = doc.certified;
  j["tool_version"] = doc.tool_version;
  j["normalization"] = doc.normalization;
  return j;
}

inline std::string to_json_text(const DesignDocument& doc) {
  return to_json(doc).dump(2) + "\n";
}

/// Parses a document; throws std::invalid_argument / nlohmann::json
/// exceptions on malformed input.
inline DesignDocument parse_design_document(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  DesignDocument doc;
  doc.attribute_count = j.at("k").get<int>();
  for (const auto& entry : j.at("support")) {
    SupportEntry e;
    e.depth = entry.at("depth").get<int>();
    if (entry.contains("weight_exact")) {
      e.weight_exact = entry.at("weight_exact").get<std::string>();
      e.weight = detail::parse_exact_rational(*e.weight_exact);
    } else if (entry.at("weight").is_string()) {
      const std::string w = entry.at("weight").get<std::string>();
      std::size_t used = 0;
      e.weight = std::stod(w, &used);
      if (used != w.size()) throw std::invalid_argument("DesignDocument: malformed weight");
    } else {
      e.weight = entry.at("weight").get<double>();
    }
    doc.support.push_back(std::move(e));
  }
  if (j.contains("h")) {
    doc.h.h1 = j["h"].value("h1", 0.0);
    doc.h.h2 = j["h"].value("h2", 0.0);
    doc.h.h3 = j["h"].value("h3", 0.0);
  }
  doc.logdet = j.value("logdet", 0.0);
  doc.kw_max = j.value("kw_max", 0.0);
  doc.certified = j.value("certified", false);
  doc.tool_version = j.value("tool_version", "");
  doc.normalization = j.value("normalization", "");
  return doc;
}

}  // namespace pairdesign

#endif  // PAIRDESIGN_DOCUMENT_HPP
