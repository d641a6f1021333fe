#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <random>

#include "pairdesign/designs.hpp"

using namespace pairdesign;

namespace {

DepthDesign random_design(int k, std::mt19937& rng) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::map<int, double> w;
  double sum = 0.0;
  for (int d = 1; d <= k; ++d) {
    w[d] = unit(rng);
    sum += w[d];
  }
  double acc = 0.0;
  for (int d = 1; d < k; ++d) {
    w[d] /= sum;
    acc += w[d];
  }
  w[k] = 1.0 - acc;  // exact unit total
  return DepthDesign(k, w);
}

}  // namespace

TEST_CASE("depth designs validate weights") {
  CHECK_NOTHROW(DepthDesign(3, {{1, 0.5}, {3, 0.5}}));
  CHECK_THROWS_AS(DepthDesign(3, {{0, 1.0}}), std::domain_error);       // depth 0 carries no weight
  CHECK_THROWS_AS(DepthDesign(3, {{4, 1.0}}), std::domain_error);      // beyond K
  CHECK_THROWS_AS(DepthDesign(3, {{1, -0.1}, {2, 1.1}}), std::domain_error);
  CHECK_THROWS_AS(DepthDesign(3, {{1, 0.6}, {2, 0.6}}), std::domain_error);  // sum != 1
}

TEST_CASE("closed-form diagonal information values") {
  const DiagonalInfo zero = h_values(0, 5);
  CHECK(zero.h1 == 0.0);
  CHECK(zero.h2 == 0.0);
  CHECK(zero.h3 == 0.0);

  CHECK(h_values(1, 3).h3 == Catch::Approx(4.0).margin(1e-15));
  CHECK(h_values(2, 3).h3 == 0.0);
  CHECK(h_values(3, 3).h3 == Catch::Approx(4.0).margin(1e-15));

  const DiagonalInfo k4d2 = h_values(2, 4);
  CHECK(k4d2.h1 == Catch::Approx(2.0).margin(1e-15));
  CHECK(k4d2.h2 == Catch::Approx(8.0 / 3.0).margin(1e-15));
  CHECK(k4d2.h3 == Catch::Approx(2.0).margin(1e-15));

  CHECK_THROWS_AS(h_values(1, 2), std::domain_error);
  CHECK_THROWS_AS(h_values(4, 3), std::domain_error);
}

TEST_CASE("h2 vanishes at the endpoints, h1 grows to 4") {
  for (int k = 3; k <= 50; ++k) {
    CHECK(h_values(0, k).h2 == 0.0);
    CHECK(h_values(k, k).h2 == 0.0);
    CHECK(h_values(k, k).h1 == Catch::Approx(4.0).margin(1e-15));
    for (int d = 1; d <= k; ++d)
      CHECK(h_values(d, k).h1 > h_values(d - 1, k).h1);
  }
}

TEST_CASE("information of a mixture is the mixture of informations") {
  const DepthDesign theorem6(3, {{1, 3.0 / 7.0}, {2, 3.0 / 7.0}, {3, 1.0 / 7.0}});
  const DiagonalInfo h = info_diagonal(theorem6);
  CHECK(h.h1 == Catch::Approx(16.0 / 7.0).margin(1e-14));
  CHECK(h.h2 == Catch::Approx(16.0 / 7.0).margin(1e-14));
  CHECK(h.h3 == Catch::Approx(16.0 / 7.0).margin(1e-14));

  const DiagonalInfo point = info_diagonal(DepthDesign::point_mass(5, 2));
  const DiagonalInfo direct = h_values(2, 5);
  CHECK(point.h1 == direct.h1);
  CHECK(point.h2 == direct.h2);
  CHECK(point.h3 == direct.h3);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 3 + static_cast<int>(rng() % 5);
    const int da = 1 + static_cast<int>(rng() % k);
    int db = 1 + static_cast<int>(rng() % k);
    if (db == da) db = (db % k) + 1;
    const double lambda = unit(rng);
    const DepthDesign mixed(k, {{da, lambda}, {db, 1.0 - lambda}});
    const DiagonalInfo got = info_diagonal(mixed);
    const DiagonalInfo ha = h_values(da, k), hb = h_values(db, k);
    CHECK(got.h1 == Catch::Approx(lambda * ha.h1 + (1 - lambda) * hb.h1).margin(1e-13));
    CHECK(got.h2 == Catch::Approx(lambda * ha.h2 + (1 - lambda) * hb.h2).margin(1e-13));
    CHECK(got.h3 == Catch::Approx(lambda * ha.h3 + (1 - lambda) * hb.h3).margin(1e-13));
  }
}

TEST_CASE("full information matrix of the one-attribute brick design") {
  std::map<PairedComparison, double> support;
  support.emplace(PairedComparison(Profile({1}), Profile({2})), 0.5);
  support.emplace(PairedComparison(Profile({2}), Profile({1})), 0.5);
  const DenseMatrix m = info_matrix_full(PairDesign(1, support), ModelSpec(1));
  REQUIRE(m.size() == 1);
  CHECK(m(0, 0) == 4.0);
}

TEST_CASE("uniform orbit designs have the closed-form diagonal information") {
  for (int k = 3; k <= 5; ++k) {
    const ModelSpec spec(k);
    for (int d = 1; d <= k; ++d) {
      const DenseMatrix m = info_matrix_full(
          depth_to_pair_design(DepthDesign::point_mass(k, d)), spec);
      const DiagonalInfo h = h_values(d, k);
      for (int r = 0; r < m.size(); ++r)
        for (int c = 0; c < m.size(); ++c) {
          if (r != c) {
            REQUIRE(std::abs(m(r, c)) < 1e-12);
            continue;
          }
          const double expect = r < spec.p_main ? h.h1
                                : r < spec.p_main + spec.p_first_order ? h.h2
                                                                       : h.h3;
          REQUIRE(std::abs(m(r, r) - expect) < 1e-12);
        }
    }
  }
}

TEST_CASE("a single-pair design has a rank-one information matrix") {
  const ModelSpec spec(3);
  const PairedComparison pair(Profile({1, 2, 1}), Profile({2, 2, 2}));
  std::map<PairedComparison, double> support;
  support.emplace(pair, 1.0);
  const DenseMatrix m = info_matrix_full(PairDesign(3, support), spec);
  const std::vector<double> diff = difference_vector(pair, spec);
  double sq = 0.0;
  for (double x : diff) sq += x * x;
  double trace = 0.0;
  for (int r = 0; r < m.size(); ++r) trace += m(r, r);
  CHECK(trace == Catch::Approx(sq).margin(1e-12));
  // every 2x2 minor vanishes on a rank-1 matrix
  for (int r = 1; r < m.size(); ++r)
    for (int c = 1; c < m.size(); ++c)
      CHECK(std::abs(m(0, 0) * m(r, c) - m(0, c) * m(r, 0)) < 1e-12);
}

TEST_CASE("log det follows the blockwise closed form") {
  const DepthDesign theorem6(3, {{1, 3.0 / 7.0}, {2, 3.0 / 7.0}, {3, 1.0 / 7.0}});
  const LogDetValue ld = log_det(theorem6);
  CHECK_FALSE(ld.singular);
  CHECK(ld.value == Catch::Approx(7.0 * std::log(16.0 / 7.0)).margin(1e-12));

  // all weight on d = K kills the first-order block for K >= 4
  CHECK(log_det(DepthDesign::point_mass(5, 5)).singular);
  CHECK_FALSE(log_det(DepthDesign::point_mass(5, 1)).singular);
}

TEST_CASE("log det agrees with the dense determinant of the full matrix") {
  std::mt19937 rng(99);
  for (int k = 3; k <= 5; ++k) {
    for (int trial = 0; trial < 3; ++trial) {
      const DepthDesign design = random_design(k, rng);
      const DenseMatrix m = info_matrix_full(depth_to_pair_design(design), ModelSpec(k));
      const double reference = std::log(dense_det(m));
      CHECK(log_det(design).value == Catch::Approx(reference).margin(1e-9));
    }
  }
}

TEST_CASE("depth weights spread uniformly over orbit pairs") {
  const PairDesign brick = depth_to_pair_design(DepthDesign::point_mass(1, 1));
  REQUIRE(brick.support().size() == 2);
  for (const auto& [pair, w] : brick.support()) CHECK(w == 0.5);

  // d = K pairs the full level swap with each profile: 2^K pairs, not more
  const PairDesign full = depth_to_pair_design(DepthDesign::point_mass(3, 3));
  REQUIRE(full.support().size() == 8);
  for (const auto& [pair, w] : full.support()) CHECK(w == 0.125);

  const DepthDesign theorem6(3, {{1, 3.0 / 7.0}, {2, 3.0 / 7.0}, {3, 1.0 / 7.0}});
  double sum = 0.0;
  for (const auto& [pair, w] : depth_to_pair_design(theorem6).support()) sum += w;
  CHECK(sum == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("largest-remainder realization") {
  const DepthDesign theorem6(3, {{1, 3.0 / 7.0}, {2, 3.0 / 7.0}, {3, 1.0 / 7.0}});

  SECTION("integral targets give exact multiplicities") {
    const RealizedDesign realized = realize_exact(theorem6, 112);
    CHECK_FALSE(realized.support_truncated);
    REQUIRE(realized.design.total() == 112);
    std::map<PairedComparison, int> counts;
    for (const auto& pair : realized.design.pairs) counts[pair] += 1;
    for (const auto& [pair, count] : counts)
      CHECK(count == (pair.depth == 2 ? 1 : 2));
  }

  SECTION("realized information matches the approximate design") {
    const ModelSpec spec(3);
    const DenseMatrix target = info_matrix_full(depth_to_pair_design(theorem6), spec);
    const DenseMatrix realized =
        info_matrix_exact(realize_exact(theorem6, 112).design, spec);
    for (int r = 0; r < target.size(); ++r)
      for (int c = 0; c < target.size(); ++c)
        CHECK(realized(r, c) == Catch::Approx(target(r, c)).margin(1e-12));
  }

  SECTION("N = 1 yields one pair from a highest-weight orbit") {
    const RealizedDesign realized = realize_exact(theorem6, 1);
    CHECK(realized.support_truncated);
    REQUIRE(realized.design.total() == 1);
    CHECK(realized.design.pairs[0].depth == 1);
  }

  CHECK_THROWS_AS(realize_exact(theorem6, 0), std::domain_error);
}
