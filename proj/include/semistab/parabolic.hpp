#pragma once

#include <string>
#include <vector>

#include "semistab/checker.hpp"

namespace semistab {

// node-gluing dimensions: one value per catalog element plus the ambient one;
// the ambient value is forced to the full rank by surjectivity
struct ParabolicData {
  std::vector<long long> p;  // aligned with the catalog's element positions
  long long p_top = 0;

  bool operator==(const ParabolicData&) const = default;
};

inline ValidationReport validate_parabolic(const SubbundleCatalog& cat, const ParabolicData& pd) {
  ValidationReport rep;
  const int n = cat.size();
  if (static_cast<int>(pd.p.size()) != n) {
    rep.add("gluing dimension table has wrong size");
    return rep;
  }
  if (pd.p_top != cat.ambient_rank) rep.add("ambient gluing dimension must equal the rank");
  bool range_ok = true, mono_ok = true;
  for (int i = 0; i < n; ++i) {
    long long cap = std::min(2 * cat.elements[static_cast<std::size_t>(i)].rank, cat.ambient_rank);
    if (pd.p[static_cast<std::size_t>(i)] < 0 || pd.p[static_cast<std::size_t>(i)] > cap)
      range_ok = false;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (cat.below[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] &&
          pd.p[static_cast<std::size_t>(i)] > pd.p[static_cast<std::size_t>(j)])
        mono_ok = false;
  if (!range_ok) rep.add("gluing dimension out of range");
  if (!mono_ok) rep.add("gluing dimension not monotone along containment");
  return rep;
}

namespace detail {

inline void require_valid_parabolic(const SubbundleCatalog& cat, const ParabolicData& pd) {
  require_valid_catalog(cat);
  auto rep = validate_parabolic(cat, pd);
  if (!rep.ok()) throw std::invalid_argument("invalid parabolic data: " + rep.joined());
}

}  // namespace detail

inline long long parabolic_degree(long long d_F, long long p_F) { return d_F - p_F; }

// the parabolic theory is the ordinary one after shifting every degree by its
// gluing dimension; verdicts run through the same pipeline afterwards
inline SubbundleCatalog parabolic_shift(const SubbundleCatalog& cat, const ParabolicData& pd) {
  detail::require_valid_parabolic(cat, pd);
  SubbundleCatalog out = cat;
  out.ambient_degree = parabolic_degree(cat.ambient_degree, pd.p_top);
  for (int i = 0; i < cat.size(); ++i)
    out.elements[static_cast<std::size_t>(i)].degree = parabolic_degree(
        cat.elements[static_cast<std::size_t>(i)].degree, pd.p[static_cast<std::size_t>(i)]);
  return out;
}

inline Verdict parabolic_verdict_reduced(const SubbundleCatalog& cat, const ParabolicData& pd,
                                         const rat& delta) {
  return verdict_reduced(parabolic_shift(cat, pd), delta);
}

inline Verdict parabolic_verdict_full(const SubbundleCatalog& cat, const ParabolicData& pd,
                                      const rat& delta) {
  return verdict_full(parabolic_shift(cat, pd), delta);
}

}  // namespace semistab
