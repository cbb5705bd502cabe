#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "semistab/filtration.hpp"

namespace semistab {

namespace detail {

inline void require_valid_f(const WeightedFiltration& f) {
  auto rep = validate_filtration(f);
  if (!rep.ok()) throw std::invalid_argument("invalid filtration: " + rep.joined());
}

inline void require_valid_fm(const WeightedFiltration& f, const VanishingPattern& M) {
  require_valid_f(f);
  auto rep = validate_pattern(M);
  if (!rep.ok()) throw std::invalid_argument("invalid pattern: " + rep.joined());
  if (M.size() != f.length() + 1)
    throw std::invalid_argument("pattern size does not match filtration length");
}

inline void check_identity(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("internal identity violated: ") + what);
}

}  // namespace detail

// suffix weight sum from a slot; zero at the ambient slot
inline rat big_r(const WeightedFiltration& f, int slot) {
  detail::require_valid_f(f);
  if (slot < 0 || slot > f.length()) throw std::out_of_range("big_r: slot out of range");
  rat s = 0;
  for (int i = slot; i < f.length(); ++i) s += f.weights[i];
  return s;
}

// incremental form: entry 1 is sum a_i (r_i - r), and crossing position r_i adds r*a_i
inline std::vector<rat> gamma_vector(const WeightedFiltration& f) {
  detail::require_valid_f(f);
  const long long r = f.ambient_rank;
  std::vector<rat> g(static_cast<std::size_t>(r));
  rat acc = 0;
  for (int i = 0; i < f.length(); ++i) acc += f.weights[i] * rat(f.ranks[i] - r);
  std::vector<rat> bump(static_cast<std::size_t>(r) + 1, rat(0));
  for (int i = 0; i < f.length(); ++i) bump[static_cast<std::size_t>(f.ranks[i])] += f.weights[i] * rat(r);
  for (long long p = 1; p <= r; ++p) {
    if (p > 1) acc += bump[static_cast<std::size_t>(p - 1)];
    g[static_cast<std::size_t>(p - 1)] = acc;
  }
  return g;
}

// sum a_s r_s minus r times the suffix weight sum; the whole weight sum at the top slot
inline rat gamma_component(const WeightedFiltration& f, int slot) {
  detail::require_valid_f(f);
  if (slot < 0 || slot > f.length()) throw std::out_of_range("gamma_component: slot out of range");
  rat s = 0;
  for (int i = 0; i < f.length(); ++i) s += f.weights[i] * rat(f.ranks[i]);
  rat suffix = 0;
  for (int i = slot; i < f.length(); ++i) suffix += f.weights[i];
  return s - rat(f.ambient_rank) * suffix;
}

inline rat p_value(const WeightedFiltration& f) {
  detail::require_valid_f(f);
  rat p = 0;
  for (int i = 0; i < f.length(); ++i)
    p += f.weights[i] * rat(f.ambient_degree * f.ranks[i] - f.ambient_rank * f.degrees[i]);
  return p;
}

namespace detail {

struct MuParts {
  rat mu;
  rat r_max;
};

// computes mu both as -min of component sums and through the suffix-sum form,
// and insists the two agree
inline MuParts mu_parts(const WeightedFiltration& f, const VanishingPattern& M) {
  require_valid_fm(f, M);
  const int t = f.length();
  std::vector<rat> suffix(static_cast<std::size_t>(t) + 1, rat(0));
  for (int i = t - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + f.weights[i];
  rat s = 0;
  for (int i = 0; i < t; ++i) s += f.weights[i] * rat(f.ranks[i]);
  bool found = false;
  rat min_gamma_sum = 0, r_max = 0;
  for (int i = 0; i <= t; ++i)
    for (int j = i; j <= t; ++j)
      if (M.at(i, j) == 1) {
        rat gsum = 2 * s - rat(f.ambient_rank) * (suffix[i] + suffix[j]);
        rat rsum = suffix[i] + suffix[j];
        if (!found || gsum < min_gamma_sum) min_gamma_sum = gsum;
        if (!found || rsum > r_max) r_max = rsum;
        found = true;
      }
  check_identity(found, "pattern allows no pair at all");
  rat by_definition = -min_gamma_sum;
  rat by_suffix = rat(f.ambient_rank) * r_max - 2 * s;
  check_identity(by_definition == by_suffix, "the two mu forms disagree");
  return {by_definition, r_max};
}

}  // namespace detail

inline rat mu_value(const WeightedFiltration& f, const VanishingPattern& M) {
  return detail::mu_parts(f, M).mu;
}

inline rat c_coeff(const WeightedFiltration& f, int k, const rat& delta) {
  detail::require_valid_f(f);
  if (k < 0 || k >= f.length()) throw std::out_of_range("c_coeff: index out of range");
  return rat(f.ranks[k] * f.ambient_degree - f.degrees[k] * f.ambient_rank) -
         2 * delta * rat(f.ranks[k]);
}

inline rat stab_value(const WeightedFiltration& f, const VanishingPattern& M, const rat& delta) {
  detail::require_valid_fm(f, M);
  if (!(delta > 0)) throw std::invalid_argument("stab_value: delta must be positive");
  auto parts = detail::mu_parts(f, M);
  rat value = p_value(f) + delta * parts.mu;
  rat alt = delta * rat(f.ambient_rank) * parts.r_max;
  for (int k = 0; k < f.length(); ++k) alt += f.weights[k] * c_coeff(f, k, delta);
  detail::check_identity(value == alt, "stab decomposition disagrees");
  return value;
}

// true when mu of the whole differs from the sum over the single-step pieces;
// the answer never depends on the weights, which is re-checked on each call
inline bool is_critical(const WeightedFiltration& f, const VanishingPattern& M) {
  detail::require_valid_fm(f, M);
  auto answer_at = [&](const std::vector<rat>& w) {
    WeightedFiltration g = f;
    g.weights = w;
    rat whole = mu_value(g, M);
    rat parts = 0;
    for (int i = 0; i < g.length(); ++i)
      parts += mu_value(subfiltration(g, {i}), induced_pattern(M, {i}));
    return whole != parts;
  };
  bool at_given = answer_at(f.weights);
  bool at_unit = answer_at(std::vector<rat>(static_cast<std::size_t>(f.length()), rat(1)));
  detail::check_identity(at_given == at_unit, "criticality depended on the weights");
  return at_given;
}

// closed form for mu of a critical two-step piece
inline rat mu_len2_critical(long long r, long long r_i, long long r_j, const rat& a_i, const rat& a_j) {
  if (!(1 <= r_i && r_i < r_j && r_j < r))
    throw std::invalid_argument("mu_len2_critical: rank ordering violated");
  if (!(a_i > 0 && a_j > 0))
    throw std::invalid_argument("mu_len2_critical: weights must be positive");
  rat together = a_i + a_j;
  rat doubled = 2 * a_j;
  rat m = together > doubled ? together : doubled;
  return rat(r) * m - 2 * (a_i * rat(r_i) + a_j * rat(r_j));
}

}  // namespace semistab
