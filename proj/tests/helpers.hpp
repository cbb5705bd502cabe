#pragma once

#include <vector>

#include "semistab/filtration.hpp"

namespace semistab::testing {

// the running five-step example: rank 5 chain with ranks 1..4, degrees 0
inline WeightedFiltration five_step(std::vector<rat> w) {
  WeightedFiltration f;
  f.ambient_rank = 5;
  f.ambient_degree = 0;
  f.ranks = {1, 2, 3, 4};
  f.degrees = {0, 0, 0, 0};
  f.weights = std::move(w);
  return f;
}

inline VanishingPattern five_step_pattern() {
  return VanishingPattern{{
      {0, 0, 0, 0, 1},
      {0, 0, 0, 1, 1},
      {0, 0, 1, 1, 1},
      {0, 1, 1, 1, 1},
      {1, 1, 1, 1, 1},
  }};
}

// equal-slope chain of the given length: ambient rank t+1, ranks 1..t, all
// degrees zero, so P vanishes and only the mu side matters
inline WeightedFiltration plain_chain(int t, std::vector<rat> w) {
  WeightedFiltration f;
  f.ambient_rank = t + 1;
  f.ambient_degree = 0;
  for (int i = 1; i <= t; ++i) {
    f.ranks.push_back(i);
    f.degrees.push_back(0);
  }
  f.weights = std::move(w);
  return f;
}

inline std::vector<rat> unit_weights(int t) { return std::vector<rat>(t, rat(1)); }

}  // namespace semistab::testing
