#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "semistab/checker.hpp"
#include "semistab/generator.hpp"
#include "semistab/oracle.hpp"
#include "semistab/splitter.hpp"

using namespace semistab;

namespace {

// ambient (4,0) with a nested pair and an all-ones vanishing table
SubbundleCatalog base_catalog() {
  SubbundleCatalog cat;
  cat.ambient_rank = 4;
  cat.ambient_degree = 0;
  cat.elements = {{0, 1, 0}, {1, 2, 1}};
  cat.below = {{0, 1}, {0, 0}};
  cat.vanishing = {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}};
  return cat;
}

// ambient (r,d) with a single element of the given id; vanishing diagonal
// entry picks k = 2 (one) or k = 1 (zero)
SubbundleCatalog single_catalog(long long r, long long d, int id, long long r_F, long long d_F,
                                int diag) {
  SubbundleCatalog cat;
  cat.ambient_rank = r;
  cat.ambient_degree = d;
  cat.elements = {{id, r_F, d_F}};
  cat.below = {{0}};
  cat.vanishing = {{diag, 1}, {1, 1}};
  return cat;
}

// ambient (3,0): F = (2,0) holding G = (1,0); G kills itself and F, so its
// ambient-facing count is 1 outside but 0 once the view is clipped to F
SubbundleCatalog clipped_view_catalog() {
  SubbundleCatalog cat;
  cat.ambient_rank = 3;
  cat.ambient_degree = 0;
  cat.elements = {{0, 2, 0}, {1, 1, 0}};
  cat.below = {{0, 0}, {1, 0}};
  cat.vanishing = {{1, 0, 1}, {0, 0, 1}, {1, 1, 1}};
  return cat;
}

SubbundleCatalog total_order_catalog(int n) {
  SubbundleCatalog cat;
  cat.ambient_rank = n + 1;
  cat.ambient_degree = 0;
  for (int i = 0; i < n; ++i) cat.elements.push_back({i, i + 1, 0});
  cat.below.assign(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) cat.below[i][j] = 1;
  cat.vanishing.assign(n + 1, std::vector<int>(n + 1, 1));
  return cat;
}

rat chain_value(const SubbundleCatalog& cat, const std::vector<int>& chain,
                const std::vector<rat>& weights, const rat& delta) {
  auto f = chain_filtration(cat, chain, weights);
  auto M = chain_pattern(cat, chain);
  return oracle::stab(f, M, delta);
}

}  // namespace

TEST_CASE("catalog validation flags every defect") {
  CHECK(validate_catalog(base_catalog()).ok());

  auto cat = base_catalog();
  cat.ambient_rank = 0;
  CHECK_THAT(validate_catalog(cat).joined(), Catch::Matchers::ContainsSubstring("ambient rank"));

  cat = base_catalog();
  cat.elements[1].rank = 4;
  CHECK_THAT(validate_catalog(cat).joined(), Catch::Matchers::ContainsSubstring("rank out of range"));

  cat = base_catalog();
  cat.elements[1].id = 0;
  CHECK_THAT(validate_catalog(cat).joined(),
             Catch::Matchers::ContainsSubstring("duplicate element id 0"));

  cat = base_catalog();
  cat.below.pop_back();
  CHECK_THAT(validate_catalog(cat).joined(),
             Catch::Matchers::ContainsSubstring("containment table has wrong shape"));

  cat = base_catalog();
  cat.below[0][1] = 2;
  CHECK_THAT(validate_catalog(cat).joined(),
             Catch::Matchers::ContainsSubstring("containment entries must be 0 or 1"));

  cat = base_catalog();
  cat.below[0][0] = 1;
  CHECK_THAT(validate_catalog(cat).joined(), Catch::Matchers::ContainsSubstring("irreflexive"));

  cat = base_catalog();
  cat.below[1][0] = 1;
  CHECK_THAT(validate_catalog(cat).joined(),
             Catch::Matchers::ContainsSubstring("containment must increase rank"));

  // a < b < c with the long edge missing
  cat = base_catalog();
  cat.elements.push_back({2, 3, 0});
  cat.below = {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}};
  cat.vanishing.assign(4, std::vector<int>(4, 1));
  CHECK_THAT(validate_catalog(cat).joined(),
             Catch::Matchers::ContainsSubstring("not transitively closed"));

  cat = base_catalog();
  cat.vanishing.pop_back();
  CHECK_THAT(validate_catalog(cat).joined(),
             Catch::Matchers::ContainsSubstring("vanishing table has wrong shape"));

  cat = base_catalog();
  cat.vanishing[0][1] = 5;
  cat.vanishing[1][0] = 5;
  CHECK_THAT(validate_catalog(cat).joined(),
             Catch::Matchers::ContainsSubstring("vanishing entries must be 0 or 1"));

  cat = base_catalog();
  cat.vanishing[0][1] = 0;
  CHECK_THAT(validate_catalog(cat).joined(), Catch::Matchers::ContainsSubstring("not symmetric"));

  cat = base_catalog();
  cat.vanishing[2][2] = 0;
  CHECK_THAT(validate_catalog(cat).joined(),
             Catch::Matchers::ContainsSubstring("ambient vanishing entry must be 1"));

  // element 0 vanishes with itself but not with the ambient bundle above it
  cat = base_catalog();
  cat.vanishing[0][2] = 0;
  cat.vanishing[2][0] = 0;
  CHECK_THAT(validate_catalog(cat).joined(),
             Catch::Matchers::ContainsSubstring("not monotone along containment"));

  CHECK_THROWS_AS(verdict_full(cat, rat(1)), std::invalid_argument);
}

TEST_CASE("element margins match their defining values") {
  CHECK(subbundle_margin(2, 0, 1, 0, 2, rat(1)) == 2);
  CHECK(subbundle_margin(3, 1, 1, 1, 1, rat(2)) == 0);

  // with k = 1 the delta term drops out at half rank
  CHECK(subbundle_margin(2, 0, 1, 1, 1, rat(1, 4)) == -2);
  CHECK(subbundle_margin(2, 0, 1, 1, 1, rat(3)) == -2);

  CHECK_THROWS_AS(subbundle_margin(2, 0, 0, 0, 1, rat(1)), std::invalid_argument);
  CHECK_THROWS_AS(subbundle_margin(2, 0, 2, 0, 1, rat(1)), std::invalid_argument);
  CHECK_THROWS_AS(subbundle_margin(2, 0, 1, 0, 3, rat(1)), std::invalid_argument);
  CHECK_THROWS_AS(subbundle_margin(2, 0, 1, 0, 1, rat(0)), std::invalid_argument);

  // cross-check against the weight-one single-step chain value
  for (long long r = 2; r <= 6; ++r)
    for (long long r_F = 1; r_F < r; ++r_F)
      for (long long d : {-2ll, 0ll, 3ll})
        for (long long d_F : {-2ll, 0ll, 3ll})
          for (int k = 0; k <= 2; ++k)
            for (rat delta : {rat(1, 3), rat(2)}) {
              WeightedFiltration f;
              f.ambient_rank = r;
              f.ambient_degree = d;
              f.ranks = {r_F};
              f.degrees = {d_F};
              f.weights = {rat(1)};
              int diag = k == 2 ? 1 : 0;
              int off = k >= 1 ? 1 : 0;
              VanishingPattern M{{{diag, off}, {off, 1}}};
              CHECK(subbundle_margin(r, d, r_F, d_F, k, delta) == oracle::stab(f, M, delta));
            }
}

TEST_CASE("pair margins match the weight-one chain value") {
  CHECK(critical_pair_margin(5, 0, 1, 0, 4, 0, rat(1)) == 0);
  CHECK(critical_pair_margin(4, 0, 1, 1, 2, 0, rat(1)) == -2);

  // complementary ranks cancel the delta term entirely
  CHECK(critical_pair_margin(6, 3, 2, 1, 4, 2, rat(1, 4)) == 0);
  CHECK(critical_pair_margin(6, 3, 2, 1, 4, 2, rat(7)) == 0);

  CHECK_THROWS_AS(critical_pair_margin(4, 0, 2, 0, 2, 1, rat(1)), std::invalid_argument);
  CHECK_THROWS_AS(critical_pair_margin(4, 0, 1, 0, 4, 1, rat(1)), std::invalid_argument);
  CHECK_THROWS_AS(critical_pair_margin(4, 0, 1, 0, 2, 1, rat(-1)), std::invalid_argument);
}

TEST_CASE("chain enumeration is exhaustive and deterministic") {
  SubbundleCatalog flat;
  flat.ambient_rank = 4;
  flat.ambient_degree = 0;
  flat.elements = {{0, 1, 0}, {1, 1, 0}, {2, 1, 0}};
  flat.below.assign(3, std::vector<int>(3, 0));
  flat.vanishing.assign(4, std::vector<int>(4, 1));
  CHECK(enumerate_chains(flat, 2).size() == 3);

  auto chain4 = total_order_catalog(4);
  CHECK(enumerate_chains(chain4, 4).size() == 15);
  CHECK(enumerate_chains(chain4, 2).size() == 10);
  CHECK(enumerate_chains(chain4, 0).empty());
  CHECK(enumerate_chains(chain4, 4) == enumerate_chains(chain4, 4));

  // every listed chain really is a containment chain, and none repeats
  auto chains = enumerate_chains(chain4, 4);
  std::set<std::vector<int>> seen;
  for (const auto& c : chains) {
    for (std::size_t a = 0; a + 1 < c.size(); ++a) REQUIRE(chain4.below[c[a]][c[a + 1]] == 1);
    CHECK(seen.insert(c).second);
  }
}

TEST_CASE("full verdict scans every chain") {
  SubbundleCatalog empty;
  empty.ambient_rank = 2;
  empty.ambient_degree = 0;
  empty.vanishing = {{1}};
  auto v0 = verdict_full(empty, rat(1, 2));
  CHECK(v0.classification == StabilityClass::stable);
  CHECK(v0.witness.empty());
  CHECK(!v0.margin.has_value());

  auto good = verdict_full(single_catalog(2, 0, 7, 1, 0, 1), rat(1, 2));
  CHECK(good.classification == StabilityClass::stable);
  CHECK(good.witness == std::vector<int>{7});
  CHECK(good.margin == rat(1));

  auto bad = verdict_full(single_catalog(2, 0, 3, 1, 1, 1), rat(1, 2));
  CHECK(bad.classification == StabilityClass::unstable);
  CHECK(bad.witness == std::vector<int>{3});
  CHECK(bad.margin == rat(-1));

  // the nested pair sits exactly on the boundary while both singles clear it
  auto pairwise = verdict_full(clipped_view_catalog(), rat(1, 4));
  CHECK(pairwise.classification == StabilityClass::strictly_semistable);
  CHECK(pairwise.witness == std::vector<int>{1, 0});
  CHECK(pairwise.margin == rat(0));

  CHECK_THROWS_AS(verdict_full(empty, rat(0)), std::invalid_argument);
}

TEST_CASE("reduced verdict prefers the smallest witness on ties") {
  SubbundleCatalog cat;
  cat.ambient_rank = 2;
  cat.ambient_degree = 0;
  cat.elements = {{5, 1, 0}, {2, 1, 0}};
  cat.below = {{0, 0}, {0, 0}};
  cat.vanishing.assign(3, std::vector<int>(3, 1));
  auto v = verdict_reduced(cat, rat(1, 2));
  CHECK(v.margin == rat(1));
  CHECK(v.witness == std::vector<int>{2});
  CHECK(verdict_full(cat, rat(1, 2)).witness == std::vector<int>{2});
}

TEST_CASE("reduced verdict agrees with the full scan") {
  GeneratorConfig cfg;
  cfg.rank_bound = 10;
  cfg.length_bound = 6;
  int nontrivial = 0;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    Rng rng(mix_seed(2301, seed));
    auto cat = random_catalog(rng, cfg);
    REQUIRE(validate_catalog(cat).ok());
    for (rat delta : {rat(1, 4), rat(1, 2), rat(1), rat(3)}) {
      auto full = verdict_full(cat, delta);
      auto reduced = verdict_reduced(cat, delta);
      REQUIRE(full.classification == reduced.classification);
      if (full.margin) {
        REQUIRE(reduced.margin.has_value());
        // the full scan sees every reduced candidate as a short chain
        REQUIRE(*full.margin <= *reduced.margin);
        ++nontrivial;
      }
    }
  }
  CHECK(nontrivial > 200);
}

TEST_CASE("semistable catalogs stay nonnegative on weighted chains") {
  GeneratorConfig cfg;
  cfg.rank_bound = 10;
  cfg.length_bound = 6;
  const rat deltas[] = {rat(1, 4), rat(1, 2), rat(1), rat(3)};
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Rng rng(mix_seed(2302, seed));
    rat delta = deltas[rng.range(0, 3)];
    auto cat = random_semistable_catalog(rng, cfg, delta);
    REQUIRE(verdict_full(cat, delta).classification != StabilityClass::unstable);
    auto chains = enumerate_chains(cat, cat.size());
    if (chains.empty()) continue;
    for (int trial = 0; trial < 25; ++trial) {
      const auto& chain = chains[rng.range(0, static_cast<long long>(chains.size()) - 1)];
      std::vector<rat> weights;
      for (std::size_t i = 0; i < chain.size(); ++i) weights.push_back(random_weight(rng, 8));
      REQUIRE(chain_value(cat, chain, weights, delta) >= 0);
      ++checked;
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("unstable verdicts split into a negative piece") {
  GeneratorConfig cfg;
  cfg.rank_bound = 10;
  cfg.length_bound = 6;
  const rat delta = rat(1, 2);
  int unstable_seen = 0, long_chains = 0;
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    Rng rng(mix_seed(2303, seed));
    auto cat = random_catalog(rng, cfg);
    auto v = verdict_full(cat, delta);
    if (v.classification != StabilityClass::unstable) continue;
    ++unstable_seen;
    std::vector<int> chain;
    for (int id : v.witness) chain.push_back(cat.position_of(id));
    auto f = chain_filtration(cat, chain);
    auto M = chain_pattern(cat, chain);
    REQUIRE(oracle::stab(f, M, delta) == *v.margin);
    if (f.length() < 3) continue;
    ++long_chains;
    auto dec = split_full(f, M);
    REQUIRE(verify_decomposition(f, M, dec).ok());
    bool negative_piece = false;
    for (const auto& piece : dec.pieces) {
      auto pf = subfiltration(f, piece.indices, piece.weights);
      auto pM = induced_pattern(M, piece.indices);
      if (oracle::stab(pf, pM, delta) < 0) negative_piece = true;
    }
    CHECK(negative_piece);
  }
  CHECK(unstable_seen > 10);
}

TEST_CASE("walls are exactly the class transitions") {
  auto crossing = single_catalog(2, 0, 0, 1, 1, 1);
  auto walls = delta_walls(crossing, rat(1, 2), rat(3));
  REQUIRE(walls == std::vector<rat>{rat(1)});
  CHECK(verdict_reduced(crossing, rat(3, 4)).classification == StabilityClass::unstable);
  CHECK(verdict_reduced(crossing, rat(1)).classification == StabilityClass::strictly_semistable);
  CHECK(verdict_reduced(crossing, rat(2)).classification == StabilityClass::stable);

  // a constant zero margin never produces a wall
  auto flat = single_catalog(2, 0, 0, 1, 0, 0);
  CHECK(delta_walls(flat, rat(1, 10), rat(5)).empty());
  CHECK(verdict_reduced(flat, rat(1, 7)).classification == StabilityClass::strictly_semistable);
  CHECK(verdict_reduced(flat, rat(4)).classification == StabilityClass::strictly_semistable);

  // a margin vanishing only at delta = 0 stays clear of the window
  auto rising = single_catalog(2, 0, 0, 1, 0, 1);
  CHECK(delta_walls(rising, rat(1, 10), rat(5)).empty());

  CHECK_THROWS_AS(delta_walls(crossing, rat(0), rat(1)), std::invalid_argument);
  CHECK_THROWS_AS(delta_walls(crossing, rat(2), rat(1)), std::invalid_argument);
  CHECK_THROWS_AS(delta_walls(crossing, rat(1), rat(1)), std::invalid_argument);
}

TEST_CASE("class is constant between walls and flips across them") {
  GeneratorConfig cfg;
  cfg.rank_bound = 8;
  cfg.length_bound = 5;
  cfg.degree_bound = 2;
  const rat lo = rat(1, 10), hi = rat(4);
  int walls_total = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(mix_seed(2304, seed));
    // boundary-hugging instances cross walls far more often than raw draws
    auto cat = random_semistable_catalog(rng, cfg, rat(1, 2));
    auto walls = delta_walls(cat, lo, hi);
    walls_total += static_cast<int>(walls.size());
    REQUIRE(std::is_sorted(walls.begin(), walls.end()));
    REQUIRE(std::adjacent_find(walls.begin(), walls.end()) == walls.end());

    auto klass = [&](const rat& d) { return verdict_reduced(cat, d).classification; };
    std::vector<rat> cuts;
    cuts.push_back(lo);
    for (const auto& w : walls) cuts.push_back(w);
    cuts.push_back(hi);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      rat a = cuts[i], b = cuts[i + 1];
      auto c1 = klass((3 * a + b) / 4);
      auto c2 = klass((a + b) / 2);
      auto c3 = klass((a + 3 * b) / 4);
      REQUIRE(c1 == c2);
      REQUIRE(c2 == c3);
    }
    for (std::size_t i = 0; i + 2 < cuts.size(); ++i) {
      rat w = cuts[i + 1];
      auto left = klass((cuts[i] + w) / 2);
      auto here = klass(w);
      auto right = klass((w + cuts[i + 2]) / 2);
      REQUIRE(!(left == here && here == right));
    }

    // a coarse sweep strictly inside the window can only change class where a
    // wall separates the samples; roots at the window edge are not walls
    auto sample = [&](int g) { return lo + (hi - lo) * (2 * g + 1) / 120; };
    auto prev = klass(sample(0));
    for (int g = 1; g < 60; ++g) {
      auto cur = klass(sample(g));
      if (cur != prev) {
        bool bracketed = false;
        for (const auto& w : walls)
          if (sample(g - 1) <= w && w <= sample(g)) bracketed = true;
        REQUIRE(bracketed);
      }
      prev = cur;
    }
  }
  CHECK(walls_total > 20);
}

TEST_CASE("restricting to an element relabels its interior") {
  auto cat = clipped_view_catalog();
  auto inner = restrict_to_subbundle(cat, 0);
  REQUIRE(validate_catalog(inner).ok());
  REQUIRE(inner.size() == 1);
  CHECK(inner.ambient_rank == 2);
  CHECK(inner.ambient_degree == 0);
  CHECK(inner.elements[0].id == 1);
  CHECK(inner.vanishing[0][1] == 0);
  CHECK(k_of_element(inner, 0) == 0);
  CHECK(k_of_element(cat, 1) == 1);

  // outside the window the element passed; inside it fails the count term
  auto v = verdict_full(inner, rat(1, 2));
  CHECK(v.classification == StabilityClass::unstable);
  CHECK(v.margin == rat(-1));

  auto leaf = restrict_to_subbundle(cat, 1);
  CHECK(leaf.size() == 0);
  CHECK(leaf.ambient_rank == 1);
  CHECK(verdict_full(leaf, rat(1, 2)).classification == StabilityClass::stable);

  auto chain4 = total_order_catalog(4);
  auto below_top = restrict_to_subbundle(chain4, 3);
  REQUIRE(validate_catalog(below_top).ok());
  CHECK(below_top.size() == 3);
  CHECK(below_top.ambient_rank == 4);
  CHECK(enumerate_chains(below_top, 3).size() == 7);

  CHECK_THROWS_AS(restrict_to_subbundle(cat, 99), std::invalid_argument);

  GeneratorConfig cfg;
  cfg.rank_bound = 9;
  cfg.length_bound = 5;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rng rng(mix_seed(2305, seed));
    auto rc = random_catalog(rng, cfg);
    for (const auto& e : rc.elements) {
      auto view = restrict_to_subbundle(rc, e.id);
      REQUIRE(validate_catalog(view).ok());
      CHECK(view.ambient_rank == e.rank);
    }
  }
}

TEST_CASE("decoration data folds into a line twist") {
  CHECK(reduce_decorated(5, 0, 9, 7, 3) == 9);
  CHECK(reduce_decorated(1, 2, 1, 4, 3) == 7);
  CHECK(reduce_decorated(0, -1, 4, 2, 6) == -2);
}

TEST_CASE("boundary instances sit exactly on the wall") {
  GeneratorConfig cfg;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rng rng(mix_seed(2306, seed));
    auto inst = random_equality_instance(rng, cfg);
    REQUIRE(validate_catalog(inst.cat).ok());
    REQUIRE(inst.delta > 0);
    REQUIRE(inst.delta < rat(1, inst.cat.ambient_rank));

    auto v = verdict_full(inst.cat, inst.delta);
    REQUIRE(v.classification == StabilityClass::strictly_semistable);
    REQUIRE(v.margin == rat(0));
    REQUIRE(v.witness == std::vector<int>{inst.witness_id});
    CHECK(k_of_element(inst.cat, inst.cat.position_of(inst.witness_id)) == 2);

    // stability survives the passage to the boundary witness itself
    auto view = restrict_to_subbundle(inst.cat, inst.witness_id);
    CHECK(verdict_full(view, inst.delta).classification == StabilityClass::stable);
  }
}
