#pragma once

#include <functional>
#include <vector>

#include "pandora/distribution.hpp"

namespace pandora {

// Residual tolerance for the bisection; well under the 1e-9 the downstream
// accounting budgets per box.
Rat reservation_tolerance();

// Solves E[(V - r)^+] = cost.
//   cost = 0        -> max support value (minimal r with Y = V)
//   0 < cost <= E[V]-> bisection on [E[V]-cost, v_max] to the residual tolerance
//   cost > E[V]     -> E[V] - cost in closed form (negative linear branch)
Rat reservation_value(const DiscreteDistribution& dist, const Rat& cost);

struct ReservationIndex {
    int box = 0;
    int time = 0;   // 0 when the index is time-invariant
    Rat r;
    DiscreteDistribution y_law;  // law of (min(V, r))^+, i.e. capped at max(r, 0)
};

ReservationIndex reservation_index(int box, int time, const DiscreteDistribution& dist, const Rat& cost);

// One realization branch of some strategy, reduced to what the Kleinberg
// accounting needs: who was inspected with what value, and which single
// inspection (if any) carries the accepted flag A.
struct SurrogateInspection {
    int box = 0;
    int time = 0;
    Rat value;
};

struct SurrogateTrace {
    Rat prob;
    std::vector<SurrogateInspection> inspected;
    int accepted = -1;  // index into inspected; -1 = nothing accepted
};

// E[sum_i A_i Y_i] with Y = min(V, r), exact over the enumerated trace
// distribution. Throws on an accepted flag outside the inspected set
// (A_i > I_i contract violation).
Rat kleinberg_surrogate(const std::vector<SurrogateTrace>& traces,
                        const std::function<Rat(int box, int time)>& reservation_of);

}  // namespace pandora
