#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pandora/strategies.hpp"

namespace pandora {

struct WeightedTrace {
    Rat prob;
    StrategyTrace trace;
};

// Exhaustive enumeration of a strategy's realization branches. Re-runs the
// executor once per leaf with a replaying value source, so it works for any
// StrategyFn. The guard bounds the product of support sizes along any path.
void for_each_trace(const StrategyFn& strategy, long max_branch_product,
                    const std::function<void(const Rat& prob, const StrategyTrace&)>& visit);

std::vector<WeightedTrace> enumerate_traces(const StrategyFn& strategy, long max_branch_product = 1000000);

Rat exact_expected_utility(const StrategyFn& strategy, long max_branch_product = 1000000);

struct EvalReport {
    std::string strategy_id;
    bool exact = false;
    Rat exact_value;     // exact mode only
    double mean = 0.0;   // MC mode
    double stderr_ = 0.0;
    long trials = 0;
};

EvalReport monte_carlo(const StrategyFn& strategy, const std::string& strategy_id, long trials,
                       std::uint64_t seed);

struct OracleGuards {
    int max_boxes = 3;
    int max_horizon = 6;
    int max_support = 3;
    bool unsafe = false;  // skip the size guards entirely

    static OracleGuards from_env();  // applies PANDORA_GUARD_OVERRIDE ("n,H,support" or "unsafe")
};

// Backward-induction-optimal adaptive strategy. The policy maps every
// explored decision state to its chosen action so the optimum can be
// re-evaluated independently of the maximization pass.
struct OracleResult {
    Rat optimal_value;
    std::map<std::string, int> policy;  // encoded state -> action
    std::size_t states = 0;
};

OracleResult optimal_adaptive_oracle(const Instance& instance, const OracleGuards& guards = {});

// Replays the stored policy with no maximization; equals optimal_value.
Rat oracle_policy_value(const Instance& instance, const OracleResult& result);

struct AdaptivityGapProbe {
    Rat adaptive_opt;         // oracle on the zero-cost capped-value instance
    Rat best_matching_value;  // brute-force max f(M)
    double ratio = 1.0;       // best_matching / adaptive
};

AdaptivityGapProbe adaptivity_gap_probe(const Instance& instance, const OracleGuards& guards = {});

// The zero-cost capped-value instance behind the probe, exposed for tests.
Instance capped_zero_cost_instance(const Instance& instance, const BlockHypergraph& h);

}  // namespace pandora
