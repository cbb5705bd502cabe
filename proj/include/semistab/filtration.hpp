#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "semistab/rational.hpp"

namespace semistab {

struct ValidationReport {
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
  void add(std::string p) { problems.push_back(std::move(p)); }

  std::string joined(const char* sep = "; ") const {
    std::string out;
    for (const auto& p : problems) {
      if (!out.empty()) out += sep;
      out += p;
    }
    return out;
  }
};

// Chain 0 < E_1 < ... < E_t < E with strictly positive rational weights.
// Proper steps are indexed 0..t-1; the ambient bundle occupies an extra
// "top" slot at position t wherever patterns or components are indexed.
struct WeightedFiltration {
  long long ambient_rank = 0;
  long long ambient_degree = 0;
  std::vector<long long> ranks;
  std::vector<long long> degrees;
  std::vector<rat> weights;

  int length() const { return static_cast<int>(ranks.size()); }

  bool operator==(const WeightedFiltration&) const = default;
};

// Symmetric 0/1 matrix over proper slots plus the ambient slot (last row).
// Entry (i,j) records whether the decoration is nonzero on E_i.E_j; ones
// propagate upward in both coordinates.
struct VanishingPattern {
  std::vector<std::vector<int>> m;

  int size() const { return static_cast<int>(m.size()); }
  int top() const { return size() - 1; }
  int at(int i, int j) const { return m[i][j]; }

  bool operator==(const VanishingPattern&) const = default;
};

inline ValidationReport validate_filtration(const WeightedFiltration& f) {
  ValidationReport rep;
  const long long r = f.ambient_rank;
  const int t = f.length();
  if (r < 1) rep.add("ambient rank must be positive");
  if (t < 1) rep.add("length must be positive");
  if (f.degrees.size() != f.ranks.size()) rep.add("degree count does not match length");
  if (f.weights.size() != f.ranks.size()) rep.add("weight count does not match length");
  if (r >= 1 && t > r - 1) rep.add("length exceeds ambient rank minus one");
  for (int i = 0; i < t; ++i) {
    if (f.ranks[i] < 1 || f.ranks[i] > r - 1)
      rep.add("rank out of range at step " + std::to_string(i + 1));
    if (i + 1 < t && !(f.ranks[i] < f.ranks[i + 1]))
      rep.add("ranks not strictly increasing at step " + std::to_string(i + 2));
  }
  for (std::size_t i = 0; i < f.weights.size(); ++i)
    if (!(f.weights[i] > 0)) rep.add("nonpositive weight at step " + std::to_string(i + 1));
  return rep;
}

inline ValidationReport validate_pattern(const VanishingPattern& M) {
  ValidationReport rep;
  const int n = M.size();
  if (n < 2) {
    rep.add("pattern needs at least one proper slot plus the ambient slot");
    return rep;
  }
  for (int i = 0; i < n; ++i)
    if (static_cast<int>(M.m[i].size()) != n) {
      rep.add("pattern is not square");
      return rep;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (M.m[i][j] != 0 && M.m[i][j] != 1) {
        rep.add("pattern entries must be 0 or 1");
        return rep;
      }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (M.m[i][j] != M.m[j][i]) {
        rep.add("symmetry violated at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        i = n;
        break;
      }
  for (int i = 0; i < n && rep.ok(); ++i)
    for (int j = 0; j < n; ++j)
      if (M.m[i][j] == 1 && ((i + 1 < n && M.m[i + 1][j] == 0) || (j + 1 < n && M.m[i][j + 1] == 0))) {
        rep.add("monotonicity violated near (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        i = n;
        break;
      }
  if (M.m[n - 1][n - 1] != 1) rep.add("ambient entry must be 1");
  return rep;
}

// 2: decoration nonzero on F.F; 1: zero on F.F but nonzero on F.E; 0: zero on F.E
inline int k_value(int m_FF, int m_FT) {
  if (m_FF == 1 && m_FT == 1) return 2;
  if (m_FF == 0 && m_FT == 1) return 1;
  if (m_FF == 0 && m_FT == 0) return 0;
  throw std::invalid_argument("k_value: monotonicity violated (diagonal bit set, ambient bit clear)");
}

inline int k_of(const VanishingPattern& M, int i) { return k_value(M.at(i, i), M.at(i, M.top())); }

// least slot j with a one in row i, or nothing for an all-zero row
inline std::optional<int> min_partner(const VanishingPattern& M, int i) {
  for (int j = 0; j < M.size(); ++j)
    if (M.at(i, j) == 1) return j;
  return std::nullopt;
}

// restriction of M to subset plus the ambient slot; subset strictly increasing
inline VanishingPattern induced_pattern(const VanishingPattern& M, const std::vector<int>& subset) {
  if (subset.empty()) throw std::invalid_argument("induced_pattern: empty subset");
  const int k = static_cast<int>(subset.size());
  for (int a = 0; a < k; ++a) {
    if (subset[a] < 0 || subset[a] >= M.top())
      throw std::invalid_argument("induced_pattern: subset slot out of range");
    if (a + 1 < k && !(subset[a] < subset[a + 1]))
      throw std::invalid_argument("induced_pattern: subset not strictly increasing");
  }
  auto slot = [&](int a) { return a == k ? M.top() : subset[a]; };
  VanishingPattern out;
  out.m.assign(k + 1, std::vector<int>(k + 1, 0));
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= k; ++b) out.m[a][b] = M.at(slot(a), slot(b));
  return out;
}

inline WeightedFiltration subfiltration(const WeightedFiltration& f, const std::vector<int>& subset,
                                        const std::vector<rat>& weights) {
  WeightedFiltration out;
  out.ambient_rank = f.ambient_rank;
  out.ambient_degree = f.ambient_degree;
  for (int i : subset) {
    if (i < 0 || i >= f.length()) throw std::invalid_argument("subfiltration: index out of range");
    out.ranks.push_back(f.ranks[i]);
    out.degrees.push_back(f.degrees[i]);
  }
  if (weights.size() != subset.size()) throw std::invalid_argument("subfiltration: weight count mismatch");
  out.weights = weights;
  return out;
}

inline WeightedFiltration subfiltration(const WeightedFiltration& f, const std::vector<int>& subset) {
  std::vector<rat> w;
  w.reserve(subset.size());
  for (int i : subset) {
    if (i < 0 || i >= f.length()) throw std::invalid_argument("subfiltration: index out of range");
    w.push_back(f.weights[i]);
  }
  return subfiltration(f, subset, w);
}

// the unique critical shape on two steps
inline VanishingPattern critical_pair_pattern() {
  return VanishingPattern{{{0, 0, 1}, {0, 1, 1}, {1, 1, 1}}};
}

}  // namespace semistab
