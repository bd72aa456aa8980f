#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "pandora/engine.hpp"
#include "pandora/generator.hpp"
#include "pandora/indices.hpp"

namespace pandora::testing {

inline DiscreteDistribution dist(std::vector<std::pair<long, std::pair<long, long>>> atoms) {
    std::vector<DiscreteDistribution::Atom> out;
    for (const auto& [v, p] : atoms) out.push_back({Rat(v), make_rat(p.first, p.second)});
    return DiscreteDistribution(std::move(out));
}

// Independent oracle for E[max]: enumerates every presence pattern and every
// atom combination directly, no CDF sweep involved.
inline Rat emax_bruteforce(const std::vector<DiscreteDistribution>& dists, const std::vector<Rat>& probs) {
    Rat total(0);
    std::function<void(std::size_t, Rat, Rat)> walk = [&](std::size_t e, Rat prob, Rat best) {
        if (e == dists.size()) {
            total += prob * best;
            return;
        }
        if (probs[e] < 1) walk(e + 1, prob * (1 - probs[e]), best);
        if (probs[e] > 0)
            for (const auto& a : dists[e].atoms())
                walk(e + 1, prob * probs[e] * a.prob, std::max(best, a.value));
    };
    walk(0, Rat(1), Rat(0));
    return total;
}

// Fixture F1: the 2-box general instance used across the suites.
//   box 0: p = 1, identity discount, cost 1 at t=1,2, ABSENT at t=3,
//          rewards {0,10} uniform at t=1,2 and {6} at t=3
//   box 1: p = 0, multiplicative 1/2 discount, cost 1/2, rewards {0:1/3, 6:2/3}
inline Instance fixture_f1() {
    Instance f;
    f.horizon = 3;
    f.variant = VariantTag::General;

    BoxSpec b0;
    b0.processing_time = 1;
    b0.cost = {Rat(1), Rat(1), std::nullopt};
    b0.rewards = {dist({{0, {1, 2}}, {10, {1, 2}}}), dist({{0, {1, 2}}, {10, {1, 2}}}), dist({{6, {1, 1}}})};
    b0.discount = DiscountRule::identity();
    f.boxes.push_back(b0);

    BoxSpec b1;
    b1.processing_time = 0;
    b1.cost = {Rat(1, 2), Rat(1, 2), Rat(1, 2)};
    b1.rewards = {dist({{0, {1, 3}}, {6, {2, 3}}}), dist({{0, {1, 3}}, {6, {2, 3}}}),
                  dist({{0, {1, 3}}, {6, {2, 3}}})};
    b1.discount = DiscountRule::multiplicative(Rat(1, 2));
    f.boxes.push_back(b1);
    return f;
}

// n = 2, H = 3, p = (0,0), every slot present: exactly 13 matchings.
inline Instance fixture_13_matchings() {
    Instance f;
    f.horizon = 3;
    f.variant = VariantTag::General;
    BoxSpec b0;
    b0.cost = {Rat(1), Rat(1), Rat(1)};
    b0.rewards.assign(3, dist({{0, {1, 2}}, {10, {1, 2}}}));
    f.boxes.push_back(b0);
    BoxSpec b1;
    b1.cost = {Rat(1, 2), Rat(1, 2), Rat(1, 2)};
    b1.rewards.assign(3, dist({{0, {1, 3}}, {6, {2, 3}}}));
    f.boxes.push_back(b1);
    return f;
}

// Proxy accounting on a trace: utility max V - sum of costs with the A flag
// on the argmax inspected value (earliest on ties). Costs can be overridden
// (implied costs for the symbolic-residual equality checks).
inline int argmax_inspected(const StrategyTrace& trace) {
    int best = -1;
    for (int k = 0; k < static_cast<int>(trace.inspected.size()); ++k)
        if (best < 0 || trace.inspected[k].value > trace.inspected[best].value) best = k;
    return best;
}

inline SurrogateTrace to_surrogate(const Rat& prob, const StrategyTrace& trace) {
    SurrogateTrace s;
    s.prob = prob;
    for (const auto& rec : trace.inspected) s.inspected.push_back({rec.box, rec.time, rec.value});
    s.accepted = argmax_inspected(trace);
    return s;
}

inline bool close(const Rat& a, const Rat& b, const Rat& tol = Rat(1, 1000000000)) {
    return rat_abs(a - b) <= tol;
}

}  // namespace pandora::testing
