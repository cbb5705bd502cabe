#pragma once

#include <algorithm>
#include <deque>
#include <string>
#include <vector>

#include "semistab/invariants.hpp"
#include "semistab/oracle.hpp"

namespace semistab {

// a sub-problem or final fragment: positions into the original filtration
// (strictly increasing) with one positive weight per position
struct Piece {
  std::vector<int> indices;
  std::vector<rat> weights;

  bool operator==(const Piece&) const = default;
};

struct SplitDecomposition {
  std::vector<Piece> pieces;
  std::vector<std::string> trace;
};

struct StepResult {
  std::vector<Piece> parts;
  std::string label;
};

namespace detail {

struct MinimalPair {
  int a, b;  // a <= b; b may be the ambient slot
};

// minimal elements of the allowed-pair set under the coordinatewise order;
// they come out sorted by ascending first coordinate, and at most the last
// one sits on the diagonal
inline std::vector<MinimalPair> minimal_pairs(const VanishingPattern& M) {
  std::vector<MinimalPair> out;
  const int n = M.size();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (M.at(i, j) == 1 && (i == 0 || M.at(i - 1, j) == 0) && (j == i || M.at(i, j - 1) == 0))
        out.push_back({i, j});
  return out;
}

// every step must reproduce the invariant sums of its input exactly; a
// failure here is a bug, never something to ignore
inline void check_step(const WeightedFiltration& f, const VanishingPattern& M,
                       const std::vector<Piece>& parts, const std::string& label) {
  std::vector<rat> total(static_cast<std::size_t>(f.length()), rat(0));
  rat p_sum = 0, mu_sum = 0;
  for (const auto& piece : parts) {
    for (std::size_t k = 0; k < piece.indices.size(); ++k)
      total[static_cast<std::size_t>(piece.indices[k])] += piece.weights[k];
    auto sub = subfiltration(f, piece.indices, piece.weights);
    auto pat = induced_pattern(M, piece.indices);
    p_sum += oracle::p_value(sub);
    mu_sum += oracle::mu(sub, pat);
  }
  bool ok = p_sum == oracle::p_value(f) && mu_sum == oracle::mu(f, M);
  for (int i = 0; i < f.length(); ++i)
    if (total[static_cast<std::size_t>(i)] != f.weights[static_cast<std::size_t>(i)]) ok = false;
  if (!ok) throw std::logic_error("split step '" + label + "' broke conservation");
}

}  // namespace detail

// One refinement move on a filtration of length at least three.  Which move
// applies is decided by the first row of the pattern and, in the interesting
// case, by which minimal allowed pair maximizes the suffix-sum value
// V(a,b) = R(a) + R(b):
//   A        first row all zero: the first step leaves as a singleton
//   B        first row meets a proper step: the last step leaves as a singleton
//   NC-split only the ambient pair is minimal: mu is additive, all singletons
//   C2       a maximizing minimal pair (a,b) sits strictly inside: region split
//            into [0,a) ∪ [b,t) and [a,b), weights unchanged
//   C3-pair  the diagonal minimal pair maximizes: head weights flow into
//            compatible tail steps, producing critical two-step pieces
//   C1       the ambient pair is the sole maximizer and the last minimal pair
//            is off-diagonal: its first index leaves as a singleton
//   C3       the ambient pair is the sole maximizer and the last minimal pair
//            is diagonal: proportional redistribution (two or more head
//            steps, exactly two minimal pairs), or a first-weight shave that
//            hands the maximum to a later pair
inline StepResult split_step(const WeightedFiltration& f, const VanishingPattern& M) {
  detail::require_valid_fm(f, M);
  const int t = f.length();
  if (t < 3) throw std::invalid_argument("split_step: length must be at least three");

  auto range_indices = [](int from, int to) {
    std::vector<int> v;
    for (int i = from; i < to; ++i) v.push_back(i);
    return v;
  };
  auto same_weights = [&](std::vector<int> idx) {
    std::vector<rat> w;
    for (int i : idx) w.push_back(f.weights[static_cast<std::size_t>(i)]);
    return Piece{std::move(idx), std::move(w)};
  };
  auto finish = [&](StepResult res) {
    detail::check_step(f, M, res.parts, res.label);
    return res;
  };

  auto first_partner = min_partner(M, 0);
  if (!first_partner) {
    StepResult res;
    res.label = "A";
    res.parts.push_back(same_weights({0}));
    res.parts.push_back(same_weights(range_indices(1, t)));
    return finish(std::move(res));
  }
  if (*first_partner < t) {
    StepResult res;
    res.label = "B";
    res.parts.push_back(same_weights(range_indices(0, t - 1)));
    res.parts.push_back(same_weights({t - 1}));
    return finish(std::move(res));
  }

  // the first row meets only the ambient slot
  auto pairs = detail::minimal_pairs(M);
  const int m = static_cast<int>(pairs.size());
  detail::check_identity(m >= 1 && pairs[0].a == 0 && pairs[0].b == t,
                         "first minimal pair should be the ambient one here");

  std::vector<rat> suffix(static_cast<std::size_t>(t) + 1, rat(0));
  for (int i = t - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + f.weights[i];
  std::vector<rat> V;
  for (const auto& pr : pairs) V.push_back(suffix[pr.a] + suffix[pr.b]);
  rat vmax = V[0];
  for (const auto& v : V)
    if (v > vmax) vmax = v;

  if (m == 1) {
    StepResult res;
    res.label = "NC-split";
    for (int i = 0; i < t; ++i) res.parts.push_back(same_weights({i}));
    return finish(std::move(res));
  }

  int middle = -1;
  for (int p = 1; p < m; ++p)
    if (pairs[p].a < pairs[p].b && V[p] == vmax) {
      middle = p;
      break;
    }
  if (middle >= 0) {
    StepResult res;
    res.label = "C2";
    const int astar = pairs[middle].a, bstar = pairs[middle].b;
    std::vector<int> outer, inner;
    for (int i = 0; i < t; ++i) (i < astar || i >= bstar ? outer : inner).push_back(i);
    res.parts.push_back(same_weights(std::move(outer)));
    res.parts.push_back(same_weights(std::move(inner)));
    return finish(std::move(res));
  }

  const bool last_diagonal = pairs[m - 1].a == pairs[m - 1].b;
  if (last_diagonal && V[m - 1] == vmax) {
    // pairing flow: head x may sit with tail s below the partner bound of the
    // last minimal pair at or before x; feasibility is the maximality of the
    // diagonal pair, so the greedy fill always lands
    StepResult res;
    res.label = "C3-pair";
    const int a = pairs[m - 1].a;
    std::vector<int> bound(static_cast<std::size_t>(a));
    {
      int p = 0;
      for (int x = 0; x < a; ++x) {
        while (p + 1 < m && pairs[p + 1].a <= x) ++p;
        bound[static_cast<std::size_t>(x)] = pairs[p].b;
      }
    }
    std::vector<rat> load(static_cast<std::size_t>(t), rat(0));
    std::vector<std::vector<rat>> route(static_cast<std::size_t>(a),
                                        std::vector<rat>(static_cast<std::size_t>(t), rat(0)));
    for (int x = a - 1; x >= 0; --x) {
      rat remaining = f.weights[static_cast<std::size_t>(x)];
      for (int s = a; s < bound[static_cast<std::size_t>(x)] && remaining > 0; ++s) {
        rat room = f.weights[static_cast<std::size_t>(s)] - load[static_cast<std::size_t>(s)];
        if (room <= 0) continue;
        rat take = room < remaining ? room : remaining;
        route[static_cast<std::size_t>(x)][static_cast<std::size_t>(s)] = take;
        load[static_cast<std::size_t>(s)] += take;
        remaining -= take;
      }
      detail::check_identity(remaining == 0, "pairing flow failed to place a head weight");
    }
    for (int x = 0; x < a; ++x)
      for (int s = a; s < t; ++s) {
        const rat& beta = route[static_cast<std::size_t>(x)][static_cast<std::size_t>(s)];
        if (beta > 0) {
          rat gamma = f.weights[static_cast<std::size_t>(s)] * beta / load[static_cast<std::size_t>(s)];
          res.parts.push_back(Piece{{x, s}, {beta, gamma}});
        }
      }
    for (int s = a; s < t; ++s)
      if (load[static_cast<std::size_t>(s)] == 0) res.parts.push_back(same_weights({s}));
    return finish(std::move(res));
  }

  if (!last_diagonal) {
    // the ambient pair dominates strictly; the first index of the last
    // minimal pair appears in no maximality constraint and can leave alone
    StepResult res;
    res.label = "C1";
    const int u = pairs[m - 1].a;
    std::vector<int> rest;
    for (int i = 0; i < t; ++i)
      if (i != u) rest.push_back(i);
    res.parts.push_back(same_weights({u}));
    res.parts.push_back(same_weights(std::move(rest)));
    return finish(std::move(res));
  }

  const int a = pairs[m - 1].a;  // tail starts at the diagonal pair
  if (m == 2) {
    StepResult res;
    if (a >= 2) {
      res.label = "C3";
      rat head_total = 0;
      for (int s = 0; s < a; ++s) head_total += f.weights[static_cast<std::size_t>(s)];
      for (int s = 0; s < a; ++s) {
        Piece piece;
        piece.indices.push_back(s);
        piece.weights.push_back(f.weights[static_cast<std::size_t>(s)]);
        for (int j = a; j < t; ++j) {
          piece.indices.push_back(j);
          piece.weights.push_back(f.weights[static_cast<std::size_t>(s)] *
                                  f.weights[static_cast<std::size_t>(j)] / head_total);
        }
        res.parts.push_back(std::move(piece));
      }
    } else {
      res.label = "C3-pair";
      rat tail_total = 0;
      for (int s = 1; s < t; ++s) tail_total += f.weights[static_cast<std::size_t>(s)];
      for (int s = 1; s < t; ++s)
        res.parts.push_back(
            Piece{{0, s}, {f.weights[static_cast<std::size_t>(s)], f.weights[static_cast<std::size_t>(s)]}});
      if (f.weights[0] > tail_total)
        res.parts.push_back(Piece{{0}, {f.weights[0] - tail_total}});
    }
    return finish(std::move(res));
  }

  // three or more minimal pairs ending on the diagonal: shave the first
  // weight until a later pair carries the maximum, then recurse
  StepResult res;
  res.label = "C3";
  rat w2 = suffix[1];
  rat vmax2 = V[1];
  for (int p = 2; p < m; ++p)
    if (V[p] > vmax2) vmax2 = V[p];
  if (vmax2 <= w2) {
    res.parts.push_back(same_weights({0}));
    res.parts.push_back(same_weights(range_indices(1, t)));
  } else {
    rat lambda = vmax2 - w2;
    detail::check_identity(lambda < f.weights[0], "first-weight shave out of range");
    res.parts.push_back(Piece{{0}, {f.weights[0] - lambda}});
    Piece reduced = same_weights(range_indices(0, t));
    reduced.weights[0] = lambda;
    res.parts.push_back(std::move(reduced));
  }
  return finish(std::move(res));
}

// full recursion: keep refining until every piece has at most two steps, and
// break non-critical two-step pieces into singletons
inline SplitDecomposition split_full(const WeightedFiltration& f, const VanishingPattern& M) {
  detail::require_valid_fm(f, M);
  SplitDecomposition dec;
  std::deque<Piece> work;
  {
    Piece whole;
    for (int i = 0; i < f.length(); ++i) whole.indices.push_back(i);
    whole.weights = f.weights;
    work.push_back(std::move(whole));
  }
  while (!work.empty()) {
    Piece cur = std::move(work.front());
    work.pop_front();
    if (cur.indices.size() == 1) {
      dec.pieces.push_back(std::move(cur));
      continue;
    }
    if (cur.indices.size() == 2) {
      auto sub = subfiltration(f, cur.indices, cur.weights);
      auto pat = induced_pattern(M, cur.indices);
      if (is_critical(sub, pat)) {
        dec.pieces.push_back(std::move(cur));
      } else {
        dec.trace.emplace_back("NC-split");
        dec.pieces.push_back(Piece{{cur.indices[0]}, {cur.weights[0]}});
        dec.pieces.push_back(Piece{{cur.indices[1]}, {cur.weights[1]}});
      }
      continue;
    }
    auto sub = subfiltration(f, cur.indices, cur.weights);
    auto pat = induced_pattern(M, cur.indices);
    auto step = split_step(sub, pat);
    dec.trace.push_back(step.label);
    for (auto& part : step.parts) {
      Piece mapped;
      mapped.weights = std::move(part.weights);
      for (int local : part.indices)
        mapped.indices.push_back(cur.indices[static_cast<std::size_t>(local)]);
      work.push_back(std::move(mapped));
    }
  }
  return dec;
}

// independent audit of a decomposition against the defining sums; reports
// every failure rather than stopping at the first
inline ValidationReport verify_decomposition(const WeightedFiltration& f, const VanishingPattern& M,
                                             const SplitDecomposition& dec) {
  ValidationReport rep;
  const int t = f.length();
  std::vector<rat> total(static_cast<std::size_t>(t), rat(0));
  rat p_sum = 0, mu_sum = 0;
  for (std::size_t n = 0; n < dec.pieces.size(); ++n) {
    const auto& piece = dec.pieces[n];
    const std::string tag = "piece " + std::to_string(n + 1);
    if (piece.indices.empty() || piece.indices.size() != piece.weights.size()) {
      rep.add(tag + " is malformed");
      continue;
    }
    bool usable = true;
    for (std::size_t k = 0; k < piece.indices.size(); ++k) {
      if (piece.indices[k] < 0 || piece.indices[k] >= t) {
        rep.add(tag + " points outside the filtration");
        usable = false;
      }
      if (k + 1 < piece.indices.size() && piece.indices[k] >= piece.indices[k + 1]) {
        rep.add(tag + " indices not strictly increasing");
        usable = false;
      }
      if (!(piece.weights[k] > 0)) {
        rep.add(tag + " has a nonpositive weight");
        usable = false;
      }
    }
    if (!usable) continue;
    if (piece.indices.size() > 2) rep.add(tag + " has more than two steps");
    for (std::size_t k = 0; k < piece.indices.size(); ++k)
      total[static_cast<std::size_t>(piece.indices[k])] += piece.weights[k];
    auto sub = subfiltration(f, piece.indices, piece.weights);
    auto pat = induced_pattern(M, piece.indices);
    p_sum += oracle::p_value(sub);
    mu_sum += oracle::mu(sub, pat);
    if (piece.indices.size() == 2 && !oracle::is_critical(sub, pat))
      rep.add(tag + " is a non-critical two-step piece");
  }
  for (int i = 0; i < t; ++i)
    if (total[static_cast<std::size_t>(i)] != f.weights[static_cast<std::size_t>(i)])
      rep.add("weight conservation failed at step " + std::to_string(i + 1));
  if (p_sum != oracle::p_value(f)) rep.add("P not conserved");
  if (mu_sum != oracle::mu(f, M)) rep.add("mu not conserved");
  return rep;
}

}  // namespace semistab
