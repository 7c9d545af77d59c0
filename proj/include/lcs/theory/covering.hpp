#pragma once

#include <cstddef>

#include "lcs/priors.hpp"

namespace lcs::theory {

struct CoveringResult {
  std::size_t count = 0;
  bool exact = true;  // false: greedy upper bound (too many atoms for branch-and-bound)
};

// Fewest closed eps-balls covering at least 1 - delta of mu's mass. Centers
// are searched over atom locations and midpoints of atom pairs.
CoveringResult approx_covering_number(const FiniteDistribution& mu, double eps, double delta);

inline constexpr std::size_t kExactCoverMaxAtoms = 20;

}  // namespace lcs::theory
