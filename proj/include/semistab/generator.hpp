#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "semistab/checker.hpp"
#include "semistab/filtration.hpp"
#include "semistab/orthogonal.hpp"
#include "semistab/parabolic.hpp"
#include "semistab/rng.hpp"

namespace semistab {

// all knobs for the seeded instance generators; equal configs give
// byte-identical output streams
struct GeneratorConfig {
  std::uint64_t seed = 1;
  long long rank_bound = 14;
  int length_bound = 8;
  long long degree_bound = 6;
  long long denom_bound = 16;
  std::string family = "generic";  // generic | orthogonal | parabolic

  bool operator==(const GeneratorConfig&) const = default;
};

inline rat random_weight(Rng& rng, long long denom_bound) {
  long long q = rng.range(1, denom_bound);
  long long p = rng.range(1, 3 * q);
  return rat(bigint(p), bigint(q));
}

// a valid pattern is any upward-closed symmetric set of ones; build one from a
// few generating pairs so that every shape class shows up
inline VanishingPattern random_pattern(Rng& rng, int t) {
  VanishingPattern M;
  M.m.assign(static_cast<std::size_t>(t) + 1, std::vector<int>(static_cast<std::size_t>(t) + 1, 0));
  M.m[t][t] = 1;
  int pairs = static_cast<int>(rng.range(0, 3));
  for (int p = 0; p < pairs; ++p) {
    int a = static_cast<int>(rng.range(0, t));
    int b = static_cast<int>(rng.range(0, t));
    if (a > b) std::swap(a, b);
    for (int i = 0; i <= t; ++i)
      for (int j = 0; j <= t; ++j) {
        int lo = std::min(i, j), hi = std::max(i, j);
        if (lo >= a && hi >= b) M.m[i][j] = 1;
      }
  }
  return M;
}

inline WeightedFiltration random_filtration(Rng& rng, const GeneratorConfig& cfg, int t) {
  if (cfg.rank_bound < t + 1) throw std::invalid_argument("rank bound too small for requested length");
  WeightedFiltration f;
  f.ambient_rank = rng.range(t + 1, cfg.rank_bound);
  f.ambient_degree = rng.range(-cfg.degree_bound, cfg.degree_bound);
  std::set<long long> picks;
  while (static_cast<int>(picks.size()) < t) picks.insert(rng.range(1, f.ambient_rank - 1));
  f.ranks.assign(picks.begin(), picks.end());
  for (int i = 0; i < t; ++i) {
    f.degrees.push_back(rng.range(-cfg.degree_bound, cfg.degree_bound));
    f.weights.push_back(random_weight(rng, cfg.denom_bound));
  }
  return f;
}

// length drawn from [min(3, bound), bound], the range the conservation
// sweep quantifies over
inline int random_length(Rng& rng, const GeneratorConfig& cfg) {
  int lo = std::min(3, cfg.length_bound);
  return static_cast<int>(rng.range(lo, cfg.length_bound));
}

// random catalog within the acceptance bounds: containment is a sampled
// relation closed transitively, the vanishing table the monotone closure of a
// few seed entries
inline SubbundleCatalog random_catalog(Rng& rng, const GeneratorConfig& cfg) {
  if (cfg.rank_bound < 2) throw std::invalid_argument("rank bound too small for a catalog");
  SubbundleCatalog cat;
  cat.ambient_rank = rng.range(2, cfg.rank_bound);
  cat.ambient_degree = rng.range(-cfg.degree_bound, cfg.degree_bound);
  const int n = static_cast<int>(rng.range(0, cfg.length_bound));
  for (int i = 0; i < n; ++i)
    cat.elements.push_back({i, rng.range(1, cat.ambient_rank - 1),
                            rng.range(-cfg.degree_bound, cfg.degree_bound)});
  cat.below.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (cat.elements[i].rank < cat.elements[j].rank && rng.chance(1, 3)) cat.below[i][j] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (cat.below[i][k] && cat.below[k][j]) cat.below[i][j] = 1;
  cat.vanishing.assign(static_cast<std::size_t>(n) + 1,
                       std::vector<int>(static_cast<std::size_t>(n) + 1, 0));
  cat.vanishing[n][n] = 1;
  auto upward = [&](int x) {
    std::vector<int> up{x};
    if (x < n) {
      for (int y = 0; y < n; ++y)
        if (cat.below[x][y]) up.push_back(y);
      up.push_back(n);
    }
    return up;
  };
  const int seeds = static_cast<int>(rng.range(0, 3));
  for (int s = 0; s < seeds; ++s) {
    int a = static_cast<int>(rng.range(0, n));
    int b = static_cast<int>(rng.range(0, n));
    for (int a2 : upward(a))
      for (int b2 : upward(b)) {
        cat.vanishing[a2][b2] = 1;
        cat.vanishing[b2][a2] = 1;
      }
  }
  return cat;
}

// semistable at the given delta by degree repair: decrementing a witness
// element's degree raises every margin that mentions it by a positive step
// and touches no other margin, so the loop terminates
inline SubbundleCatalog random_semistable_catalog(Rng& rng, const GeneratorConfig& cfg,
                                                  const rat& delta) {
  SubbundleCatalog cat = random_catalog(rng, cfg);
  for (;;) {
    auto v = verdict_full(cat, delta);
    if (v.classification != StabilityClass::unstable) return cat;
    for (int id : v.witness) cat.elements[static_cast<std::size_t>(cat.position_of(id))].degree -= 1;
  }
}

// ordinary orthogonal catalog built from an isotropic chain, its mirrored
// perp chain, optional lagrangian and isolated non-isotropic fillers; the
// vanishing rule is v(A,B)=0 iff one side is isotropic and the other sits
// inside its perp
inline OrthogonalCatalog random_orthogonal_catalog(Rng& rng, const GeneratorConfig& cfg) {
  if (cfg.rank_bound < 2) throw std::invalid_argument("rank bound too small for a catalog");
  OrthogonalCatalog oc;
  const long long r = rng.range(2, std::min<long long>(cfg.rank_bound, 10));
  const long long db = std::max<long long>(1, cfg.degree_bound);
  oc.base.ambient_rank = r;
  oc.base.ambient_degree = 0;
  oc.twist_degree = 0;

  const long long iso_max = (r - 1) / 2;  // strict half, lagrangian handled apart
  int chain_len = iso_max > 0 ? static_cast<int>(rng.range(0, std::min<long long>(3, iso_max))) : 0;
  std::set<long long> rank_picks;
  while (static_cast<int>(rank_picks.size()) < chain_len) rank_picks.insert(rng.range(1, iso_max));
  std::vector<long long> iso_ranks(rank_picks.begin(), rank_picks.end());
  bool lagrangian = r % 2 == 0 && rng.chance(1, 3);

  // target classes: 0 stable, 1 strictly semistable, 2 unstable
  int target = static_cast<int>(rng.range(0, 2));
  if (chain_len == 0 && !lagrangian) {
    if (target == 1 && iso_max > 0) {
      chain_len = 1;
      iso_ranks = {rng.range(1, iso_max)};
    } else {
      target = 0;
    }
  }
  auto iso_degree = [&](bool first) -> long long {
    if (target == 0) return -rng.range(1, db);
    if (target == 1) return first ? 0 : -rng.range(0, db);
    return first ? rng.range(1, db) : rng.range(-db, db);
  };

  // element layout: isotropic chain, optional lagrangian, perp chain, fillers
  struct Draft {
    long long rank, degree;
    int perp;       // filled once all positions are known
    bool isotropic;
  };
  std::vector<Draft> draft;
  const int k = static_cast<int>(iso_ranks.size());
  bool first_iso = true;
  for (int i = 0; i < k; ++i) {
    draft.push_back({iso_ranks[i], iso_degree(first_iso), 0, true});
    first_iso = false;
  }
  int lagr_pos = -1;
  if (lagrangian) {
    lagr_pos = static_cast<int>(draft.size());
    draft.push_back({r / 2, iso_degree(first_iso), lagr_pos, true});
    first_iso = false;
  }
  for (int i = k - 1; i >= 0; --i)
    draft.push_back({r - iso_ranks[i], draft[i].degree, 0, false});
  // perp chain occupies positions [k + lagrangian, 2k + lagrangian), reversed
  for (int i = 0; i < k; ++i) {
    draft[i].perp = k + (lagrangian ? 1 : 0) + (k - 1 - i);
    draft[draft[i].perp].perp = i;
  }
  const int chain_total = static_cast<int>(draft.size());
  int fillers = static_cast<int>(rng.range(0, 2));
  for (int f = 0; f < fillers; ++f) {
    long long a = rng.range(1, r - 1);
    long long e = -rng.range(0, db);
    int x = static_cast<int>(draft.size());
    if (2 * a == r) {
      draft.push_back({a, e, x, false});
    } else {
      draft.push_back({a, e, x + 1, false});
      draft.push_back({r - a, e, x, false});
    }
  }

  const int n = static_cast<int>(draft.size());
  for (int i = 0; i < n; ++i) oc.base.elements.push_back({i, draft[i].rank, draft[i].degree});
  for (int i = 0; i < n; ++i) oc.perp.push_back(draft[i].perp);
  oc.base.below.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < chain_total; ++i)
    for (int j = i + 1; j < chain_total; ++j) oc.base.below[i][j] = 1;
  oc.base.vanishing.assign(static_cast<std::size_t>(n) + 1,
                           std::vector<int>(static_cast<std::size_t>(n) + 1, 0));
  auto inside_perp = [&](int a, int b) {  // element b inside the perp of a
    int q = draft[a].perp;
    return b == q || oc.base.below[b][q] == 1;
  };
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      if (a == n || b == n) {
        oc.base.vanishing[a][b] = 1;
        continue;
      }
      bool zero = (draft[a].isotropic && inside_perp(a, b)) ||
                  (draft[b].isotropic && inside_perp(b, a));
      oc.base.vanishing[a][b] = zero ? 0 : 1;
    }

  for (int i = 0; i < chain_total; ++i)
    if (draft[i].isotropic && rng.chance(1, 2)) oc.radical[i] = i;
  for (int i = chain_total; i < n; ++i)
    if (draft[i].degree == 0 && rng.chance(1, 2)) oc.radical[i] = ID_ZERO;
  return oc;
}

// monotone gluing dimensions: processed by ascending rank so each value can
// absorb the floor imposed by the elements below it
inline ParabolicData random_parabolic_data(Rng& rng, const SubbundleCatalog& cat) {
  ParabolicData pd;
  pd.p_top = cat.ambient_rank;
  pd.p.assign(static_cast<std::size_t>(cat.size()), 0);
  auto order = detail::canonical_order(cat);
  for (int oi = 0; oi < cat.size(); ++oi) {
    const int i = order[static_cast<std::size_t>(oi)];
    long long cap = std::min(2 * cat.elements[static_cast<std::size_t>(i)].rank, cat.ambient_rank);
    long long value = rng.range(0, cap);
    for (int j = 0; j < cat.size(); ++j)
      if (cat.below[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)])
        value = std::max(value, pd.p[static_cast<std::size_t>(j)]);
    pd.p[static_cast<std::size_t>(i)] = value;
  }
  return pd;
}

struct EqualityInstance {
  SubbundleCatalog cat;
  int witness_id = 0;
  rat delta;
};

// strictly semistable with one exact boundary witness: pick coprime (r, r_F)
// with 2 r_F < r and a degree making d*r_F - r*d_F = -1, then delta =
// 1/(2(r-r_F)) < 1/r puts the witness margin at exactly zero; everything
// else in the catalog clears zero by a wide degree gap
inline EqualityInstance random_equality_instance(Rng& rng, const GeneratorConfig& cfg) {
  EqualityInstance inst;
  const long long r = rng.range(3, std::max<long long>(3, std::min<long long>(cfg.rank_bound, 10)));
  std::vector<long long> coprime;
  for (long long c = 1; 2 * c < r; ++c)
    if (std::gcd(c, r) == 1) coprime.push_back(c);
  const long long r_F = coprime[static_cast<std::size_t>(rng.range(0, static_cast<long long>(coprime.size()) - 1))];
  long long d = 0;
  for (long long c = 0; c < r; ++c)
    if ((c * r_F + 1) % r == 0) {
      d = rng.chance(1, 2) ? c : c - r;
      break;
    }
  const long long d_F = (d * r_F + 1) / r;
  inst.delta = rat(1, 2 * (r - r_F));
  inst.witness_id = 0;

  auto& cat = inst.cat;
  cat.ambient_rank = r;
  cat.ambient_degree = d;
  cat.elements.push_back({0, r_F, d_F});
  const long long deep = -(std::abs(d_F) + 2 * r + 3);
  int subs = r_F >= 2 ? static_cast<int>(rng.range(0, std::min<long long>(2, r_F - 1))) : 0;
  std::set<long long> sub_ranks;
  while (static_cast<int>(sub_ranks.size()) < subs) sub_ranks.insert(rng.range(1, r_F - 1));
  int next_id = 1;
  for (long long g : sub_ranks) cat.elements.push_back({next_id++, g, deep - next_id});
  const int n = cat.size();
  cat.below.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int i = 1; i < n; ++i) cat.below[i][0] = 1;
  cat.vanishing.assign(static_cast<std::size_t>(n) + 1,
                       std::vector<int>(static_cast<std::size_t>(n) + 1, 0));
  cat.vanishing[0][0] = 1;
  for (int i = 0; i < n; ++i) {
    cat.vanishing[i][n] = 1;
    cat.vanishing[n][i] = 1;
  }
  cat.vanishing[n][n] = 1;
  detail::check_identity(
      subbundle_margin(r, d, r_F, d_F, 2, inst.delta) == 0 && inst.delta < rat(1, r),
      "equality instance must sit exactly on the boundary");
  return inst;
}

// non-critical by construction: the closure of a single generating pair (a,b)
// matches the k profile of its own steps, and the empty pattern matches the
// all-zero profile through the ambient pair
inline VanishingPattern random_noncritical_pattern(Rng& rng, int t) {
  VanishingPattern M;
  M.m.assign(static_cast<std::size_t>(t) + 1, std::vector<int>(static_cast<std::size_t>(t) + 1, 0));
  M.m[t][t] = 1;
  if (rng.chance(1, 5)) return M;
  int a = static_cast<int>(rng.range(0, t));
  int b = static_cast<int>(rng.range(0, t));
  if (a > b) std::swap(a, b);
  for (int i = 0; i <= t; ++i)
    for (int j = 0; j <= t; ++j) {
      int lo = std::min(i, j), hi = std::max(i, j);
      if (lo >= a && hi >= b) M.m[i][j] = 1;
    }
  return M;
}

}  // namespace semistab
