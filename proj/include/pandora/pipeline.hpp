#pragma once

#include <json.hpp>

#include "pandora/engine.hpp"

namespace pandora {

struct PipelineOptions {
    SolverConfig solver;
    std::uint64_t seed = 1;
    bool with_oracle = false;
    OracleGuards guards;
    long mc_trials = 0;  // 0 = exact evaluation
    long exact_guard = 1000000;
};

struct PipelineResult {
    BlockHypergraph hypergraph;
    FractionalSolution fractional;
    Matching matching;           // best of rounded / greedy / single-edge candidates
    Rat matching_value;          // f(matching)
    Schedule schedule;
    bool exact = false;
    Rat expected_utility;        // exact mode
    EvalReport mc_report;        // Monte Carlo mode
    nlohmann::json report;
};

// build -> indices -> measured continuous greedy -> rounding -> schedule ->
// evaluation, with every intermediate value in the JSON report.
PipelineResult run_pipeline(const Instance& instance, const PipelineOptions& options);

}  // namespace pandora
