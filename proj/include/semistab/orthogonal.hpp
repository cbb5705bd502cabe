#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "semistab/checker.hpp"

namespace semistab {

// sentinel ids used by instance files; neither ever appears as an element id
inline constexpr int ID_AMBIENT = -1;  // spelled "AMBIENT"
inline constexpr int ID_ZERO = -2;     // spelled "ZERO"

// catalog with a quadratic-form structure: a perpendicularity involution, an
// optional twist degree (0 for ordinary instances) and a partial radical map
struct OrthogonalCatalog {
  SubbundleCatalog base;
  std::vector<int> perp;       // position-indexed involution on the elements
  long long twist_degree = 0;  // 0 for ordinary catalogs, 2d/r in general
  std::map<int, int> radical;  // element position -> isotropic position or ID_ZERO

  bool operator==(const OrthogonalCatalog&) const = default;
};

// rank and degree of the perpendicular of a subbundle; the degree comes from
// clearing 1/r out of d_F + d(1 - 2 r_F / r) and must land on an integer
inline std::pair<long long, long long> perp_data(long long r, long long d, long long r_F,
                                                 long long d_F) {
  if (r_F < 1 || r_F >= r) throw std::invalid_argument("subbundle rank out of range");
  long long num = d_F * r + d * (r - 2 * r_F);
  if (num % r != 0) throw std::invalid_argument("perp degree not integral");
  return {r - r_F, num / r};
}

inline ValidationReport validate_orthogonal(const OrthogonalCatalog& oc) {
  ValidationReport rep = validate_catalog(oc.base);
  if (!rep.ok()) return rep;  // base problems first; tables may be unusable
  const auto& cat = oc.base;
  const int n = cat.size();
  const long long r = cat.ambient_rank;
  const long long d = cat.ambient_degree;

  if ((2 * d) % r != 0)
    rep.add("ambient slope must be half-integral for a twist degree to exist");
  else if (oc.twist_degree != 2 * d / r)
    rep.add("twist degree must be twice the ambient slope");

  if (static_cast<int>(oc.perp.size()) != n) {
    rep.add("perp table has wrong size");
    return rep;
  }
  for (int i = 0; i < n; ++i)
    if (oc.perp[static_cast<std::size_t>(i)] < 0 || oc.perp[static_cast<std::size_t>(i)] >= n) {
      rep.add("perp entry out of range");
      return rep;
    }
  bool involution = true, rank_sum = true, degree_rel = true;
  for (int i = 0; i < n; ++i) {
    const int q = oc.perp[static_cast<std::size_t>(i)];
    if (oc.perp[static_cast<std::size_t>(q)] != i) involution = false;
    const auto& e = cat.elements[static_cast<std::size_t>(i)];
    const auto& pe = cat.elements[static_cast<std::size_t>(q)];
    if (e.rank + pe.rank != r) rank_sum = false;
    long long num = e.degree * r + d * (r - 2 * e.rank);
    if (num % r != 0 || pe.degree != num / r) degree_rel = false;
  }
  if (!involution) rep.add("perp is not an involution");
  if (!rank_sum) rep.add("perp ranks must sum to the ambient rank");
  if (!degree_rel) rep.add("perp degree relation violated");
  if (!rep.ok()) return rep;

  bool meets_top = true, iso_rank = true, iso_nest = true, iso_zero = true, perp_nondeg = true;
  for (int i = 0; i < n; ++i) {
    const auto& e = cat.elements[static_cast<std::size_t>(i)];
    if (cat.vanishing[static_cast<std::size_t>(i)][static_cast<std::size_t>(cat.top())] != 1)
      meets_top = false;
    if (cat.vanishing[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] == 0) {
      if (2 * e.rank > r) iso_rank = false;
      const int q = oc.perp[static_cast<std::size_t>(i)];
      if (q != i) {
        if (!cat.below[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)]) iso_nest = false;
        if (cat.vanishing[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)] != 0)
          iso_zero = false;
        if (cat.vanishing[static_cast<std::size_t>(q)][static_cast<std::size_t>(q)] != 1)
          perp_nondeg = false;
      }
    }
  }
  if (!meets_top) rep.add("every element must pair with the ambient bundle");
  if (!iso_rank) rep.add("isotropic rank exceeds half the ambient rank");
  if (!iso_nest) rep.add("isotropic element must sit inside its perp");
  if (!iso_zero) rep.add("vanishing must be zero between an isotropic element and its perp");
  if (!perp_nondeg) rep.add("perp of a proper isotropic element must not be isotropic");

  for (const auto& [key, value] : oc.radical) {
    if (key < 0 || key >= n) {
      rep.add("radical key out of range");
      continue;
    }
    const auto& e = cat.elements[static_cast<std::size_t>(key)];
    if (value == ID_ZERO) {
      if (oc.twist_degree == 0 && e.degree != 0) rep.add("zero radical forces degree zero");
    } else if (value < 0 || value >= n) {
      rep.add("radical image out of range");
    } else {
      if (cat.vanishing[static_cast<std::size_t>(value)][static_cast<std::size_t>(value)] != 0)
        rep.add("radical image must be isotropic");
      if (cat.elements[static_cast<std::size_t>(value)].degree != e.degree)
        rep.add("radical image must preserve degree");
    }
  }
  return rep;
}

namespace detail {

inline void require_valid_orthogonal(const OrthogonalCatalog& oc) {
  auto rep = validate_orthogonal(oc);
  if (!rep.ok()) throw std::invalid_argument("invalid orthogonal catalog: " + rep.joined());
}

}  // namespace detail

inline bool is_isotropic(const OrthogonalCatalog& oc, int id) {
  const int p = oc.base.position_of(id);
  if (p < 0) throw std::invalid_argument("element not in catalog");
  return oc.base.vanishing[static_cast<std::size_t>(p)][static_cast<std::size_t>(p)] == 0;
}

// classical condition: every proper isotropic subbundle must have slope at
// most the ambient slope; margins cleared to d*r_F - r*d_F
inline Verdict ramanan_verdict(const OrthogonalCatalog& oc) {
  detail::require_valid_orthogonal(oc);
  Verdict v;
  const auto& cat = oc.base;
  for (int i = 0; i < cat.size(); ++i) {
    const auto& e = cat.elements[static_cast<std::size_t>(i)];
    if (cat.vanishing[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] != 0) continue;
    detail::offer(v, rat(bigint(cat.ambient_degree) * e.rank - bigint(cat.ambient_rank) * e.degree),
                  {e.id});
  }
  detail::settle(v);
  return v;
}

// the two-step chain through an isotropic element and its perp, which always
// carries the critical pattern
inline std::pair<WeightedFiltration, VanishingPattern> critical_triple(const OrthogonalCatalog& oc,
                                                                       int id) {
  detail::require_valid_orthogonal(oc);
  const int p = oc.base.position_of(id);
  if (p < 0) throw std::invalid_argument("element not in catalog");
  if (oc.base.vanishing[static_cast<std::size_t>(p)][static_cast<std::size_t>(p)] != 0)
    throw std::invalid_argument("element is not isotropic");
  const int q = oc.perp[static_cast<std::size_t>(p)];
  if (q == p) throw std::invalid_argument("element equals its perp");
  WeightedFiltration f;
  f.ambient_rank = oc.base.ambient_rank;
  f.ambient_degree = oc.base.ambient_degree;
  f.ranks = {oc.base.elements[static_cast<std::size_t>(p)].rank,
             oc.base.elements[static_cast<std::size_t>(q)].rank};
  f.degrees = {oc.base.elements[static_cast<std::size_t>(p)].degree,
               oc.base.elements[static_cast<std::size_t>(q)].degree};
  f.weights = {rat(1), rat(1)};
  auto M = critical_pair_pattern();
  detail::check_identity(is_critical(f, M), "perp chain must be critical");
  return {f, M};
}

// half-rank case: the delta term carries coefficient 2 r_F - r = 0, so the
// margin is the bare slope comparison whatever delta is
inline rat lagrangian_margin(long long r, long long d, long long r_F, long long d_F,
                             const rat& delta) {
  if (2 * r_F != r) throw std::invalid_argument("not a lagrangian rank");
  (void)delta;
  return rat(bigint(d) * r_F - bigint(r) * d_F);
}

struct EquivalenceReport {
  Verdict ramanan;
  Verdict reduced;
  bool agree = false;
};

inline EquivalenceReport equivalence_report(const OrthogonalCatalog& oc, const rat& delta) {
  detail::require_valid_orthogonal(oc);
  EquivalenceReport rep;
  rep.ramanan = ramanan_verdict(oc);
  rep.reduced = verdict_reduced(oc.base, delta);
  rep.agree = rep.ramanan.classification == rep.reduced.classification;
  return rep;
}

}  // namespace semistab
