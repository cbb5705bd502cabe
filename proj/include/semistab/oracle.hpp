#pragma once

// Reference implementations computed straight from the defining sums.  These
// are deliberately naive and share no code with the optimized paths; the test
// suite and the decomposition verifier diff everything against them.

#include <stdexcept>
#include <vector>

#include "semistab/filtration.hpp"

namespace semistab::oracle {

inline void require_valid(const WeightedFiltration& f, const VanishingPattern& M) {
  auto rf = validate_filtration(f);
  if (!rf.ok()) throw std::invalid_argument("invalid filtration: " + rf.joined());
  auto rm = validate_pattern(M);
  if (!rm.ok()) throw std::invalid_argument("invalid pattern: " + rm.joined());
  if (M.size() != f.length() + 1) throw std::invalid_argument("pattern size mismatch");
}

// entry p of the weight vector attached to the filtration: step i contributes
// r_i - r on positions up to r_i and r_i afterwards
inline std::vector<rat> gamma(const WeightedFiltration& f) {
  std::vector<rat> g(static_cast<std::size_t>(f.ambient_rank), rat(0));
  for (int i = 0; i < f.length(); ++i)
    for (long long p = 1; p <= f.ambient_rank; ++p)
      g[static_cast<std::size_t>(p - 1)] +=
          f.weights[i] * rat(p <= f.ranks[i] ? f.ranks[i] - f.ambient_rank : f.ranks[i]);
  return g;
}

// component at a slot read off the vector: position r_i, or position r at the top slot
inline rat gamma_at(const WeightedFiltration& f, const std::vector<rat>& g, int slot) {
  long long pos = slot == f.length() ? f.ambient_rank : f.ranks[slot];
  return g[static_cast<std::size_t>(pos - 1)];
}

inline rat p_value(const WeightedFiltration& f) {
  rat p = 0;
  for (int i = 0; i < f.length(); ++i)
    p += f.weights[i] * rat(f.ambient_degree * f.ranks[i] - f.ambient_rank * f.degrees[i]);
  return p;
}

inline rat mu(const WeightedFiltration& f, const VanishingPattern& M) {
  require_valid(f, M);
  auto g = gamma(f);
  bool found = false;
  rat best = 0;
  for (int i = 0; i < M.size(); ++i)
    for (int j = 0; j < M.size(); ++j)
      if (M.at(i, j) == 1) {
        rat v = gamma_at(f, g, i) + gamma_at(f, g, j);
        if (!found || v < best) {
          best = v;
          found = true;
        }
      }
  if (!found) throw std::logic_error("valid pattern lost its ambient pair");
  return -best;
}

inline rat stab(const WeightedFiltration& f, const VanishingPattern& M, const rat& delta) {
  return oracle::p_value(f) + delta * oracle::mu(f, M);
}

inline bool is_critical(const WeightedFiltration& f, const VanishingPattern& M) {
  require_valid(f, M);
  rat whole = mu(f, M);
  rat parts = 0;
  for (int i = 0; i < f.length(); ++i)
    parts += mu(subfiltration(f, {i}), induced_pattern(M, {i}));
  return whole != parts;
}

}  // namespace semistab::oracle
