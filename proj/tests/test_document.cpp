#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "pairdesign/document.hpp"

using namespace pairdesign;

TEST_CASE("design documents round-trip byte for byte") {
  for (int k : {3, 5, 8}) {
    const DesignDocument doc = make_design_document(d_optimal_design(k));
    const std::string once = to_json_text(doc);
    const std::string twice = to_json_text(parse_design_document(once));
    CHECK(once == twice);
  }
}

TEST_CASE("K = 3 document carries exact rational weights") {
  const DesignDocument doc = make_design_document(d_optimal_design(3));
  REQUIRE(doc.support.size() == 3);
  CHECK(doc.support[0].weight_exact == "3/7");
  CHECK(doc.support[2].weight_exact == "1/7");
  const std::string text = to_json_text(doc);
  const DepthDesign parsed = parse_design_document(text).to_depth_design();
  CHECK(parsed.weight(1) == 3.0 / 7.0);  // exact fractions survive the trip
  CHECK(parsed.weight(3) == 1.0 / 7.0);
  CHECK(doc.normalization == "per-observation");
}

TEST_CASE("parsed documents re-certify") {
  for (int k : {4, 7, 10}) {
    const std::string text = to_json_text(make_design_document(d_optimal_design(k)));
    const DepthDesign design = parse_design_document(text).to_depth_design();
    CHECK(kw_certify(design).certified);
  }
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS(parse_design_document("not json"));
  CHECK_THROWS(parse_design_document("{\"k\": 3}"));  // missing support
  // weights tampered to sum above one: rejected by the design invariant
  const std::string tampered = R"({"k": 3, "support": [
      {"depth": 1, "weight": "0.9"}, {"depth": 2, "weight": "0.9"}]})";
  CHECK_THROWS_AS(parse_design_document(tampered).to_depth_design(), std::domain_error);
  const std::string bad_rational = R"({"k": 3, "support": [
      {"depth": 1, "weight": "1.0", "weight_exact": "3|7"}]})";
  CHECK_THROWS_AS(parse_design_document(bad_rational), std::invalid_argument);
}

TEST_CASE("emitted weights carry 12 significant digits") {
  const DesignDocument doc = make_design_document(d_optimal_design(5));
  const std::string text = to_json_text(doc);
  CHECK(text.find("0.166666666667") != std::string::npos);
  CHECK(text.find("0.833333333333") != std::string::npos);
}
