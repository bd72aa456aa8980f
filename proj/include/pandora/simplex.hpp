#pragma once

#include <vector>

#include "pandora/rational.hpp"

namespace pandora {

struct LpResult {
    std::vector<Rat> x;
    Rat objective;
};

// max c.x subject to A x <= b, x >= 0, everything exact rational.
// Requires b >= 0 (slack basis is then feasible, no phase 1); Bland's rule,
// so termination is guaranteed. Throws InvariantError on an unbounded LP.
LpResult simplex_max(const std::vector<std::vector<Rat>>& A, const std::vector<Rat>& b,
                     const std::vector<Rat>& c);

}  // namespace pandora
