#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "semistab/filtration.hpp"

namespace semistab {

struct CatalogElement {
  int id = 0;
  long long rank = 0;
  long long degree = 0;

  bool operator==(const CatalogElement&) const = default;
};

// finite synthetic universe of proper subbundles: a strict containment order
// plus a symmetric vanishing table over the elements and the ambient slot
struct SubbundleCatalog {
  long long ambient_rank = 0;
  long long ambient_degree = 0;
  std::vector<CatalogElement> elements;
  std::vector<std::vector<int>> below;      // below[i][j]: element i strictly inside element j
  std::vector<std::vector<int>> vanishing;  // (n+1)x(n+1); the last slot is the ambient bundle

  int size() const { return static_cast<int>(elements.size()); }
  int top() const { return size(); }

  int position_of(int id) const {
    for (int i = 0; i < size(); ++i)
      if (elements[i].id == id) return i;
    return -1;
  }

  bool operator==(const SubbundleCatalog&) const = default;
};

inline ValidationReport validate_catalog(const SubbundleCatalog& cat) {
  ValidationReport rep;
  const int n = cat.size();
  if (cat.ambient_rank < 1) rep.add("ambient rank must be positive");

  bool bad_rank = false, dup_id = false;
  for (int i = 0; i < n && !bad_rank; ++i)
    if (cat.elements[i].rank < 1 || cat.elements[i].rank >= cat.ambient_rank) {
      rep.add("element " + std::to_string(cat.elements[i].id) + ": rank out of range");
      bad_rank = true;
    }
  for (int i = 0; i < n && !dup_id; ++i)
    for (int j = i + 1; j < n && !dup_id; ++j)
      if (cat.elements[i].id == cat.elements[j].id) {
        rep.add("duplicate element id " + std::to_string(cat.elements[i].id));
        dup_id = true;
      }

  bool below_shape = static_cast<int>(cat.below.size()) == n;
  for (const auto& row : cat.below) below_shape = below_shape && static_cast<int>(row.size()) == n;
  if (!below_shape) {
    rep.add("containment table has wrong shape");
  } else {
    bool bits = true, refl = true, trans = true, mono = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (cat.below[i][j] != 0 && cat.below[i][j] != 1) bits = false;
    if (!bits) rep.add("containment entries must be 0 or 1");
    for (int i = 0; i < n && refl; ++i)
      if (cat.below[i][i]) {
        rep.add("containment must be irreflexive");
        refl = false;
      }
    for (int i = 0; i < n && trans; ++i)
      for (int j = 0; j < n && trans; ++j)
        for (int k = 0; k < n && trans; ++k)
          if (cat.below[i][j] && cat.below[j][k] && !cat.below[i][k]) {
            rep.add("containment not transitively closed");
            trans = false;
          }
    for (int i = 0; i < n && mono; ++i)
      for (int j = 0; j < n && mono; ++j)
        if (cat.below[i][j] && cat.elements[i].rank >= cat.elements[j].rank) {
          rep.add("containment must increase rank");
          mono = false;
        }
  }

  bool van_shape = static_cast<int>(cat.vanishing.size()) == n + 1;
  for (const auto& row : cat.vanishing) van_shape = van_shape && static_cast<int>(row.size()) == n + 1;
  if (!van_shape) {
    rep.add("vanishing table has wrong shape");
  } else {
    bool bits = true, sym = true;
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b) {
        if (cat.vanishing[a][b] != 0 && cat.vanishing[a][b] != 1) bits = false;
        if (cat.vanishing[a][b] != cat.vanishing[b][a]) sym = false;
      }
    if (!bits) rep.add("vanishing entries must be 0 or 1");
    if (!sym) rep.add("vanishing table not symmetric");
    if (cat.vanishing[n][n] != 1) rep.add("ambient vanishing entry must be 1");
    if (below_shape) {
      // slot order: a <= b when equal, contained, or b is the ambient slot
      auto slot_leq = [&](int a, int b) {
        if (a == b || b == n) return true;
        return a < n && b < n && cat.below[a][b] == 1;
      };
      bool mono = true;
      for (int a = 0; a <= n && mono; ++a)
        for (int b = 0; b <= n && mono; ++b) {
          if (cat.vanishing[a][b] != 1) continue;
          for (int a2 = 0; a2 <= n && mono; ++a2)
            for (int b2 = 0; b2 <= n && mono; ++b2)
              if (slot_leq(a, a2) && slot_leq(b, b2) && cat.vanishing[a2][b2] != 1) {
                rep.add("vanishing not monotone along containment");
                mono = false;
              }
        }
    }
  }
  return rep;
}

namespace detail {

inline void require_valid_catalog(const SubbundleCatalog& cat) {
  auto rep = validate_catalog(cat);
  if (!rep.ok()) throw std::invalid_argument("invalid catalog: " + rep.joined());
}

// canonical visiting order: by rank, then degree, then id; containment can
// only point from earlier to later positions in this order
inline std::vector<int> canonical_order(const SubbundleCatalog& cat) {
  std::vector<int> order(static_cast<std::size_t>(cat.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& x = cat.elements[a];
    const auto& y = cat.elements[b];
    if (x.rank != y.rank) return x.rank < y.rank;
    if (x.degree != y.degree) return x.degree < y.degree;
    return x.id < y.id;
  });
  return order;
}

}  // namespace detail

// every nonempty strictly increasing containment chain of length at most
// max_len, as vectors of element positions listed bottom-up; the order of
// chains is deterministic (depth-first over the canonical element order)
inline std::vector<std::vector<int>> enumerate_chains(const SubbundleCatalog& cat, int max_len) {
  detail::require_valid_catalog(cat);
  std::vector<std::vector<int>> out;
  const int n = cat.size();
  if (max_len <= 0 || n == 0) return out;
  auto order = detail::canonical_order(cat);
  std::vector<int> chain;
  auto extend = [&](auto&& self, int from) -> void {
    for (int oi = from + 1; oi < n; ++oi) {
      int q = order[static_cast<std::size_t>(oi)];
      if (!cat.below[static_cast<std::size_t>(chain.back())][static_cast<std::size_t>(q)]) continue;
      chain.push_back(q);
      out.push_back(chain);
      if (static_cast<int>(chain.size()) < max_len) self(self, oi);
      chain.pop_back();
    }
  };
  for (int oi = 0; oi < n; ++oi) {
    chain = {order[static_cast<std::size_t>(oi)]};
    out.push_back(chain);
    if (max_len > 1) extend(extend, oi);
  }
  return out;
}

// materialize a chain of element positions as a filtration; weight 1 per step
// unless explicit weights are supplied
inline WeightedFiltration chain_filtration(const SubbundleCatalog& cat, const std::vector<int>& chain,
                                           std::vector<rat> weights = {}) {
  WeightedFiltration f;
  f.ambient_rank = cat.ambient_rank;
  f.ambient_degree = cat.ambient_degree;
  for (int p : chain) {
    f.ranks.push_back(cat.elements[static_cast<std::size_t>(p)].rank);
    f.degrees.push_back(cat.elements[static_cast<std::size_t>(p)].degree);
  }
  f.weights = weights.empty() ? std::vector<rat>(chain.size(), rat(1)) : std::move(weights);
  return f;
}

inline VanishingPattern chain_pattern(const SubbundleCatalog& cat, const std::vector<int>& chain) {
  const int t = static_cast<int>(chain.size());
  auto slot = [&](int a) { return a < t ? chain[static_cast<std::size_t>(a)] : cat.top(); };
  VanishingPattern M;
  M.m.assign(static_cast<std::size_t>(t) + 1, std::vector<int>(static_cast<std::size_t>(t) + 1, 0));
  for (int a = 0; a <= t; ++a)
    for (int b = 0; b <= t; ++b)
      M.m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          cat.vanishing[static_cast<std::size_t>(slot(a))][static_cast<std::size_t>(slot(b))];
  return M;
}

}  // namespace semistab
