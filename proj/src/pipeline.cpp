#include "pandora/pipeline.hpp"

#include <cmath>

#include "pandora/errors.hpp"

namespace pandora {

namespace {

using nlohmann::json;

json matching_json(const BlockHypergraph& h, const Matching& m) {
    json out = json::array();
    for (int id : m) out.push_back(json::array({h.edge(id).box, h.edge(id).start}));
    return out;
}

}  // namespace

PipelineResult run_pipeline(const Instance& instance, const PipelineOptions& options) {
    require_valid(instance);
    options.solver.check();

    PipelineResult result;
    result.report["format"] = "pandora-report/1";
    result.report["seed"] = options.seed;

    result.hypergraph = build_hypergraph(instance);
    const BlockHypergraph& h = result.hypergraph;
    const SubmodularObjective obj(h);
    result.report["hypergraph"] = {
        {"edges", h.edges.size()},
        {"density", rat_to_string(polytope_density(h))},
    };

    result.fractional = measured_continuous_greedy(obj, h, options.solver);
    const Rat fractional_exact = obj.multilinear(result.fractional.x);

    // Rounding, plus two cheap feasible candidates; every candidate is a
    // matching, so taking the best by exact f only improves the solution.
    const Matching rounded =
        crs_round(obj, result.fractional, options.solver.rounding_repeats, options.seed);
    const Matching greedy = greedy_matching(obj, h);
    Matching single;
    {
        int best_edge = -1;
        Rat best_value(0);
        for (int e = 0; e < static_cast<int>(h.edges.size()); ++e) {
            const Rat v = obj.eval({e});
            if (v > best_value) {
                best_value = v;
                best_edge = e;
            }
        }
        if (best_edge >= 0) single = {best_edge};
    }
    const Rat rounded_value = obj.eval(rounded);
    const Rat greedy_value = obj.eval(greedy);
    const Rat single_value = obj.eval(single);
    result.matching = rounded;
    result.matching_value = rounded_value;
    std::string chosen = "rounded";
    if (greedy_value > result.matching_value) {
        result.matching = greedy;
        result.matching_value = greedy_value;
        chosen = "greedy";
    }
    if (single_value > result.matching_value) {
        result.matching = single;
        result.matching_value = single_value;
        chosen = "single_edge";
    }

    const double b_d = rat_to_double(options.solver.b);
    result.report["solver"] = {
        {"b", rat_to_string(options.solver.b)},
        {"steps", options.solver.mcg_steps},
        {"lp_mode", options.solver.lp_mode == LpMode::ExactLp ? "exact_lp" : "greedy_direction"},
        {"fractional_value", rat_to_double(fractional_exact)},
        {"x_in_bP", in_scaled_polytope(h, result.fractional.x, result.fractional.b)},
        {"certified_lower_bound", (1.0 - std::exp(-b_d)) * rat_to_double(result.matching_value)},
    };
    result.report["rounding"] = {
        {"repeats", options.solver.rounding_repeats},
        {"rounded_f", rat_to_string(rounded_value)},
        {"greedy_f", rat_to_string(greedy_value)},
        {"single_edge_f", rat_to_string(single_value)},
        {"chosen", chosen},
        {"matching", matching_json(h, result.matching)},
        {"f_value", rat_to_double(result.matching_value)},
        {"f_value_exact", rat_to_string(result.matching_value)},
    };

    result.schedule = pi_main_schedule(instance, h, result.matching);
    json schedule_json = json::array();
    for (const auto& slot : result.schedule.slots)
        schedule_json.push_back(json::array({slot.box, slot.time}));
    result.report["strategy"] = {
        {"tau", rat_to_string(result.schedule.tau)},
        {"schedule", schedule_json},
    };

    const StrategyFn strategy = make_schedule_strategy(instance, result.schedule);
    if (options.mc_trials > 0) {
        result.exact = false;
        result.mc_report = monte_carlo(strategy, "main", options.mc_trials, options.seed);
        result.report["evaluation"] = {
            {"mode", "monte_carlo"},
            {"trials", result.mc_report.trials},
            {"mean", result.mc_report.mean},
            {"stderr", result.mc_report.stderr_},
        };
    } else {
        result.exact = true;
        result.expected_utility = exact_expected_utility(strategy, options.exact_guard);
        result.report["evaluation"] = {
            {"mode", "exact"},
            {"expected_utility", rat_to_double(result.expected_utility)},
            {"expected_utility_exact", rat_to_string(result.expected_utility)},
        };
    }

    if (options.with_oracle) {
        const OracleResult oracle = optimal_adaptive_oracle(instance, options.guards);
        json joracle = {
            {"value", rat_to_double(oracle.optimal_value)},
            {"value_exact", rat_to_string(oracle.optimal_value)},
            {"states", oracle.states},
            {"guarantee_bound", rat_to_double(oracle.optimal_value) / 21.3},
        };
        if (result.exact) {
            const double ratio = oracle.optimal_value == 0
                                     ? 1.0
                                     : rat_to_double(result.expected_utility / oracle.optimal_value);
            joracle["ratio"] = ratio;
            joracle["pass"] = ratio >= 1.0 / 21.3 - 1e-12;
        }
        result.report["oracle"] = joracle;
    }
    return result;
}

}  // namespace pandora
