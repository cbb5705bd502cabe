#include <catch2/catch_amalgamated.hpp>

#include "semistab/generator.hpp"
#include "semistab/invariants.hpp"
#include "semistab/oracle.hpp"

using namespace semistab;

namespace {

// the running five-step example: rank 5 chain with ranks 1..4, degrees 0
WeightedFiltration five_step(std::vector<rat> w) {
  WeightedFiltration f;
  f.ambient_rank = 5;
  f.ambient_degree = 0;
  f.ranks = {1, 2, 3, 4};
  f.degrees = {0, 0, 0, 0};
  f.weights = std::move(w);
  return f;
}

VanishingPattern five_step_pattern() {
  return VanishingPattern{{
      {0, 0, 0, 0, 1},
      {0, 0, 0, 1, 1},
      {0, 0, 1, 1, 1},
      {0, 1, 1, 1, 1},
      {1, 1, 1, 1, 1},
  }};
}

WeightedFiltration single_step(long long r, long long d, long long r1, long long d1, rat a) {
  WeightedFiltration f;
  f.ambient_rank = r;
  f.ambient_degree = d;
  f.ranks = {r1};
  f.degrees = {d1};
  f.weights = {std::move(a)};
  return f;
}

VanishingPattern all_ones(int t) {
  VanishingPattern M;
  M.m.assign(t + 1, std::vector<int>(t + 1, 1));
  return M;
}

std::vector<rat> unit_weights(int t) { return std::vector<rat>(t, rat(1)); }

}  // namespace

TEST_CASE("filtration validation flags each broken invariant") {
  CHECK(validate_filtration(five_step(unit_weights(4))).ok());

  WeightedFiltration dup = five_step(unit_weights(4));
  dup.ranks = {2, 2, 3, 4};
  auto rep = validate_filtration(dup);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.joined().find("ranks not strictly increasing") != std::string::npos);

  WeightedFiltration zero_weight = five_step(unit_weights(4));
  zero_weight.weights[2] = 0;
  rep = validate_filtration(zero_weight);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.joined().find("nonpositive weight") != std::string::npos);

  WeightedFiltration too_long;
  too_long.ambient_rank = 3;
  too_long.ranks = {1, 2, 3};
  too_long.degrees = {0, 0, 0};
  too_long.weights = unit_weights(3);
  rep = validate_filtration(too_long);
  CHECK_FALSE(rep.ok());
}

TEST_CASE("pattern validation flags symmetry, monotonicity and the ambient bit") {
  CHECK(validate_pattern(five_step_pattern()).ok());

  auto asym = five_step_pattern();
  asym.m[0][3] = 1;
  auto rep = validate_pattern(asym);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.joined().find("symmetry") != std::string::npos);

  VanishingPattern gap{{{0, 1, 1}, {1, 1, 0}, {1, 0, 1}}};
  rep = validate_pattern(gap);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.joined().find("monotonicity") != std::string::npos);

  VanishingPattern zeros{{{0, 0}, {0, 0}}};
  rep = validate_pattern(zeros);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.joined().find("ambient entry must be 1") != std::string::npos);
}

TEST_CASE("gamma vector matches hand-computed values") {
  auto g = gamma_vector(single_step(3, 0, 1, 0, rat(1)));
  REQUIRE(g == std::vector<rat>{rat(-2), rat(1), rat(1)});

  g = gamma_vector(five_step(unit_weights(4)));
  REQUIRE(g == std::vector<rat>{rat(-10), rat(-5), rat(0), rat(5), rat(10)});

  g = gamma_vector(single_step(2, 0, 1, 0, rat(2)));
  REQUIRE(g == std::vector<rat>{rat(-2), rat(2)});
}

TEST_CASE("gamma components read off the vector and end at the full weighted rank sum") {
  auto f = five_step(unit_weights(4));
  CHECK(gamma_component(f, 0) == -10);
  CHECK(gamma_component(f, 2) == 0);
  CHECK(gamma_component(f, 4) == 10);
  CHECK(gamma_component(single_step(3, 0, 1, 0, rat(1)), 0) == -2);
}

TEST_CASE("suffix weight sums") {
  auto f = five_step(unit_weights(4));
  CHECK(big_r(f, 0) == 4);
  CHECK(big_r(f, 2) == 2);
  CHECK(big_r(f, 4) == 0);
  CHECK(big_r(single_step(2, 0, 1, 0, rat(3)), 0) == 3);
  CHECK(big_r(five_step({rat(1), rat(2), rat(1), rat(2)}), 1) == 5);
}

TEST_CASE("weighted slope discrepancy") {
  CHECK(p_value(single_step(2, 0, 1, 1, rat(1))) == -2);
  CHECK(p_value(five_step(unit_weights(4))) == 0);

  WeightedFiltration equal_slope;
  equal_slope.ambient_rank = 4;
  equal_slope.ambient_degree = 8;
  equal_slope.ranks = {1, 2};
  equal_slope.degrees = {2, 4};
  equal_slope.weights = unit_weights(2);
  CHECK(p_value(equal_slope) == 0);
}

TEST_CASE("mu on the five-step example and on single steps") {
  CHECK(mu_value(five_step(unit_weights(4)), five_step_pattern()) == 0);
  CHECK(mu_value(five_step({rat(1), rat(2), rat(1), rat(2)}), five_step_pattern()) == 3);

  VanishingPattern k1{{{0, 1}, {1, 1}}};
  CHECK(mu_value(single_step(3, 0, 1, 0, rat(1)), k1) == 1);  // r*k - 2 r_F with k=1
}

TEST_CASE("c coefficients") {
  CHECK(c_coeff(single_step(2, 0, 1, 0, rat(1)), 0, rat(1)) == -2);
  CHECK(c_coeff(single_step(7, 3, 2, 1, rat(1)), 0, rat(0)) == 2 * 3 - 1 * 7);
  WeightedFiltration f = single_step(5, 5, 2, 2, rat(1));
  CHECK(c_coeff(f, 0, rat(1, 2)) == -2);
}

TEST_CASE("stab value and its coefficient decomposition") {
  CHECK(stab_value(five_step(unit_weights(4)), five_step_pattern(), rat(1)) == 0);
  CHECK(stab_value(single_step(2, 0, 1, 0, rat(1)), all_ones(1), rat(1)) == 2);
  CHECK_THROWS_AS(stab_value(five_step(unit_weights(4)), five_step_pattern(), rat(0)),
                  std::invalid_argument);
}

TEST_CASE("k classification") {
  CHECK(k_value(1, 1) == 2);
  CHECK(k_value(0, 1) == 1);
  CHECK(k_value(0, 0) == 0);
  CHECK_THROWS_AS(k_value(1, 0), std::invalid_argument);
}

TEST_CASE("criticality on the frozen shapes") {
  WeightedFiltration pair;
  pair.ambient_rank = 5;
  pair.ambient_degree = 0;
  pair.ranks = {1, 4};
  pair.degrees = {0, 0};
  pair.weights = unit_weights(2);
  CHECK(is_critical(pair, critical_pair_pattern()));

  CHECK_FALSE(is_critical(five_step(unit_weights(4)), all_ones(4)));
  CHECK(is_critical(five_step(unit_weights(4)), five_step_pattern()));
}

TEST_CASE("closed form for the critical two-step mu") {
  CHECK(mu_len2_critical(5, 1, 4, rat(1), rat(2)) == 2);
  CHECK(mu_len2_critical(5, 2, 3, rat(2), rat(1)) == 1);
  for (long long ri = 1; ri < 4; ++ri)
    for (long long rj = ri + 1; rj < 5; ++rj)
      CHECK(mu_len2_critical(5, ri, rj, rat(1), rat(1)) == 2 * 5 - 2 * (ri + rj));
  CHECK_THROWS_AS(mu_len2_critical(5, 3, 2, rat(1), rat(1)), std::invalid_argument);
}

TEST_CASE("closed form agrees with mu on the critical pattern for every rank pair and grid weight") {
  for (long long r = 3; r <= 8; ++r)
    for (long long ri = 1; ri < r - 1; ++ri)
      for (long long rj = ri + 1; rj < r; ++rj)
        for (long long q = 1; q <= 4; ++q)
          for (long long p = 1; p <= 2 * q; ++p) {
            rat ai = rat(bigint(p), bigint(q));
            rat aj = rat(bigint(2 * q + 1 - p), bigint(q));
            WeightedFiltration f;
            f.ambient_rank = r;
            f.ambient_degree = 0;
            f.ranks = {ri, rj};
            f.degrees = {0, 0};
            f.weights = {ai, aj};
            REQUIRE(mu_len2_critical(r, ri, rj, ai, aj) == mu_value(f, critical_pair_pattern()));
          }
}

TEST_CASE("min partner walks each row to its first one") {
  auto M = five_step_pattern();
  CHECK(min_partner(M, 0) == 4);
  CHECK(min_partner(M, 2) == 2);
  VanishingPattern with_zero_row{{{0, 0, 0}, {0, 1, 1}, {0, 1, 1}}};
  CHECK_FALSE(min_partner(with_zero_row, 0).has_value());
}

TEST_CASE("induced pattern restricts rows and columns") {
  auto M = five_step_pattern();
  CHECK(induced_pattern(M, {0, 3}) == critical_pair_pattern());
  CHECK(induced_pattern(M, {1, 2}) == critical_pair_pattern());
  CHECK(induced_pattern(M, {0, 1, 2, 3}) == M);
  CHECK_THROWS_AS(induced_pattern(M, {}), std::invalid_argument);
}

TEST_CASE("random instances: optimized paths agree with the defining sums") {
  Rng rng(20240817);
  GeneratorConfig cfg;
  for (int trial = 0; trial < 300; ++trial) {
    int t = static_cast<int>(rng.range(1, 6));
    auto f = random_filtration(rng, cfg, t);
    auto M = random_pattern(rng, t);
    REQUIRE(validate_filtration(f).ok());
    REQUIRE(validate_pattern(M).ok());

    REQUIRE(gamma_vector(f) == oracle::gamma(f));
    REQUIRE(p_value(f) == oracle::p_value(f));
    REQUIRE(mu_value(f, M) == oracle::mu(f, M));

    auto g = gamma_vector(f);
    for (std::size_t p = 1; p < g.size(); ++p) REQUIRE(g[p - 1] <= g[p]);
    for (int i = 0; i <= t; ++i) REQUIRE(gamma_component(f, i) == oracle::gamma_at(f, g, i));

    rat delta(rng.range(1, 9), rng.range(1, 4));
    REQUIRE(stab_value(f, M, delta) == oracle::stab(f, M, delta));
  }
}

TEST_CASE("random instances: subadditivity, homogeneity and weight-free criticality") {
  Rng rng(904523);
  GeneratorConfig cfg;
  for (int trial = 0; trial < 200; ++trial) {
    int t = static_cast<int>(rng.range(2, 6));
    auto f = random_filtration(rng, cfg, t);
    auto M = random_pattern(rng, t);

    rat singles = 0;
    for (int i = 0; i < t; ++i)
      singles += mu_value(subfiltration(f, {i}), induced_pattern(M, {i}));
    REQUIRE(mu_value(f, M) <= singles);

    rat lambda(rng.range(1, 7), rng.range(1, 5));
    WeightedFiltration scaled = f;
    for (auto& w : scaled.weights) w *= lambda;
    REQUIRE(p_value(scaled) == lambda * p_value(f));
    REQUIRE(mu_value(scaled, M) == lambda * mu_value(f, M));

    bool crit = oracle::is_critical(f, M);
    REQUIRE(crit == is_critical(f, M));
    for (int rw = 0; rw < 10; ++rw) {
      WeightedFiltration g = f;
      for (auto& w : g.weights) w = random_weight(rng, 16);
      REQUIRE(oracle::is_critical(g, M) == crit);
    }
  }
}
