#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pandora/engine.hpp"
#include "pandora/errors.hpp"
#include "pandora/generator.hpp"
#include "pandora/instance_io.hpp"
#include "pandora/pipeline.hpp"

namespace {

using namespace pandora;
using nlohmann::json;

// RFC-style CSV quoting, LF line endings.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}
    void row(const std::vector<std::string>& fields) {
        for (std::size_t k = 0; k < fields.size(); ++k) {
            if (k) os_ << ',';
            os_ << csv_field(fields[k]);
        }
        os_ << '\n';
    }

  private:
    std::ostream& os_;
};

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Writes to --out if given, else stdout.
void emit(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw StructuralError("cannot open '" + out_path + "' for writing");
    f << payload;
}

Instance load_checked(const std::string& path) {
    Instance instance = load_instance(path);
    require_valid(instance);
    return instance;
}

struct GenerateFlags {
    GeneratorParams params;
    std::string variant = "general";
    std::string cost_max = "3";
};

void add_generator_flags(CLI::App* cmd, GenerateFlags& flags) {
    cmd->add_option("--n", flags.params.n, "number of boxes");
    cmd->add_option("--horizon", flags.params.horizon, "horizon (0 = minimum + slack)");
    cmd->add_option("--horizon-slack", flags.params.horizon_slack, "extra rounds beyond the minimum");
    cmd->add_option("--support-min", flags.params.support_min, "smallest reward support size");
    cmd->add_option("--support-max", flags.params.support_max, "largest reward support size");
    cmd->add_option("--value-max", flags.params.value_max, "largest reward value");
    cmd->add_option("--cost-max", flags.cost_max, "largest inspection cost (rational)");
    cmd->add_option("--p-max", flags.params.p_max, "largest processing time");
    cmd->add_option("--absent-prob", flags.params.absent_prob, "chance a slot cannot be inspected");
    cmd->add_option("--variant", flags.variant, "general | instant | fixed");
    cmd->add_option("--discount", flags.params.discount,
                    "identity | commit | multiplicative | table | mixed");
    cmd->add_flag("--zero-cost", flags.params.zero_cost, "force all inspection costs to 0");
}

GeneratorParams resolve(const GenerateFlags& flags) {
    GeneratorParams p = flags.params;
    p.variant = variant_from_string(flags.variant);
    p.cost_max = rat_from_string(flags.cost_max);
    return p;
}

std::string reservation_csv(const Instance& instance) {
    std::ostringstream os;
    CsvWriter csv(os);
    csv.row({"box", "time", "r", "expected_y"});
    for (int i = 0; i < instance.n(); ++i) {
        for (int t = 1; t <= instance.horizon; ++t) {
            const auto& cost = instance.cost_at(i, t);
            if (!cost) continue;
            const auto idx = reservation_index(i, t, instance.reward_at(i, t), *cost);
            csv.row({std::to_string(i), std::to_string(t), fmt_double(rat_to_double(idx.r)),
                     fmt_double(rat_to_double(idx.y_law.expectation()))});
        }
    }
    return os.str();
}

std::string hypergraph_csv(const Instance& instance) {
    const BlockHypergraph h = build_hypergraph(instance);
    std::ostringstream os;
    CsvWriter csv(os);
    csv.row({"box", "start", "span_end", "cost", "r", "expected_y"});
    for (const auto& e : h.edges)
        csv.row({std::to_string(e.box), std::to_string(e.start), std::to_string(e.span_end),
                 fmt_double(rat_to_double(e.cost)), fmt_double(rat_to_double(e.r)),
                 fmt_double(rat_to_double(e.y_law.expectation()))});
    return os.str();
}

struct StrategyRun {
    std::string name;
    Schedule schedule;     // empty for weitzman
    bool adaptive = false; // weitzman
};

StrategyRun make_strategy(const Instance& instance, const std::string& name, const SolverConfig& solver,
                          FixedOrderMode order, std::uint64_t seed) {
    StrategyRun run;
    run.name = name;
    if (name == "main") {
        PipelineOptions options;
        options.solver = solver;
        options.seed = seed;
        run.schedule = run_pipeline(instance, options).schedule;
    } else if (name == "instant") {
        run.schedule = pi_instant_schedule(instance, solver);
    } else if (name == "fixed") {
        run.schedule = pi_fixed_schedule(instance, order);
    } else if (name == "weitzman") {
        if (!is_classic_pandora(instance))
            throw StructuralError("weitzman: requires classic Pandora (fixed, identity discount, p = 0)");
        run.adaptive = true;
    } else {
        throw StructuralError("unknown strategy '" + name + "'");
    }
    return run;
}

StrategyFn strategy_fn(const Instance& instance, const StrategyRun& run) {
    if (run.adaptive) return make_weitzman_strategy(instance);
    return make_schedule_strategy(instance, run.schedule);
}

std::string trace_dump_csv(const Instance& instance, const StrategyRun& run, long trials,
                           std::uint64_t seed) {
    std::ostringstream os;
    CsvWriter csv(os);
    csv.row({"trial", "step", "box", "time", "value", "cost", "halted_at", "accepted", "collected_box",
             "utility"});
    const StrategyFn fn = strategy_fn(instance, run);
    for (long trial = 0; trial < trials; ++trial) {
        RngValueSource source(mix_seed(seed, {0x77A1u, static_cast<std::uint64_t>(trial)}));
        const StrategyTrace trace = fn(source);
        const std::string collected =
            trace.collected_index >= 0 ? std::to_string(trace.inspected[trace.collected_index].box) : "";
        for (std::size_t step = 0; step < trace.inspected.size(); ++step) {
            const auto& rec = trace.inspected[step];
            csv.row({std::to_string(trial), std::to_string(step), std::to_string(rec.box),
                     std::to_string(rec.time), fmt_double(rat_to_double(rec.value)),
                     fmt_double(rat_to_double(rec.cost)), std::to_string(trace.halted_at),
                     trace.accepted ? "1" : "0", collected, fmt_double(rat_to_double(trace.utility))});
        }
        if (trace.inspected.empty())
            csv.row({std::to_string(trial), "", "", "", "", "", "0", "0", "", "0"});
    }
    return os.str();
}

// One comparison row; the guarantee bound is the proven lower bound on the
// strategy's exact expected utility.
struct CompareRow {
    std::string instance_id;
    std::string strategy;
    Rat value;
    Rat oracle;
    double ratio = 1.0;
    double bound = 0.0;
    bool pass = false;
};

CompareRow compare_one(const Instance& instance, const std::string& instance_id, const std::string& name,
                       const SolverConfig& solver, std::uint64_t seed, const OracleGuards& guards,
                       long exact_guard) {
    CompareRow row;
    row.instance_id = instance_id;
    row.strategy = name;
    const StrategyRun run = make_strategy(instance, name, solver, FixedOrderMode::HalfThreshold, seed);
    row.value = exact_expected_utility(strategy_fn(instance, run), exact_guard);
    row.oracle = optimal_adaptive_oracle(instance, guards).optimal_value;
    row.ratio = row.oracle == 0 ? 1.0 : rat_to_double(row.value / row.oracle);

    const double oracle_d = rat_to_double(row.oracle);
    if (name == "main") {
        row.bound = oracle_d / 21.3;
    } else if (name == "instant") {
        row.bound = oracle_d / 8.5;
    } else if (name == "fixed") {
        std::vector<DiscreteDistribution> laws;
        for (int i = 0; i < instance.n(); ++i)
            laws.push_back(reservation_index(i, 0, instance.reward_at(i, 1), *instance.cost_at(i, 1)).y_law);
        const std::vector<Rat> ones(laws.size(), Rat(1));
        row.bound = rat_to_double(expectation_of_max(laws, ones)) / 2;
    } else if (name == "weitzman") {
        row.bound = oracle_d;
    }
    row.pass = rat_to_double(row.value) >= row.bound - 1e-9;
    return row;
}

std::vector<std::string> applicable_strategies(const Instance& instance) {
    std::vector<std::string> out{"main"};
    if (instance.variant == VariantTag::Instant) out.push_back("instant");
    if (instance.variant == VariantTag::Fixed) out.push_back("fixed");
    if (is_classic_pandora(instance)) out.push_back("weitzman");
    return out;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::ostringstream os;
    CsvWriter csv(os);
    csv.row({"instance_id", "strategy", "value", "oracle", "ratio", "guarantee_bound", "pass"});
    for (const auto& r : rows)
        csv.row({r.instance_id, r.strategy, fmt_double(rat_to_double(r.value)),
                 fmt_double(rat_to_double(r.oracle)), fmt_double(r.ratio), fmt_double(r.bound),
                 r.pass ? "pass" : "fail"});
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pandora's Box Over Time: solver, strategies and verification toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 1;
    std::string out_path;
    std::string format = "csv";
    app.add_option("--seed", seed, "master seed; every run with the same seed is byte-identical");
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--format", format, "csv | json, where a subcommand supports both");

    // generate
    auto* cmd_generate = app.add_subcommand("generate", "write a reproducible random instance");
    GenerateFlags gen_flags;
    add_generator_flags(cmd_generate, gen_flags);

    // reservation / hypergraph / oracle / pipeline / solve / run take an instance
    std::string instance_path;
    auto* cmd_reservation = app.add_subcommand("reservation", "dump (box, time, r, E[Y]) as CSV");
    cmd_reservation->add_option("--instance", instance_path)->required();
    auto* cmd_hypergraph = app.add_subcommand("hypergraph", "dump the proxy hypergraph edges as CSV");
    cmd_hypergraph->add_option("--instance", instance_path)->required();

    auto* cmd_solve = app.add_subcommand("solve", "run the Submodular Block Matching solver");
    std::string b_str = "5227/10000";
    int steps = 100;
    int repeats = 50;
    std::string lp_mode = "exact";
    bool with_oracle = false;
    cmd_solve->add_option("--instance", instance_path)->required();
    cmd_solve->add_option("--b", b_str, "polytope scale b");
    cmd_solve->add_option("--steps", steps, "continuous greedy steps");
    cmd_solve->add_option("--rounding-repeats", repeats);
    cmd_solve->add_option("--lp-mode", lp_mode, "exact | greedy");
    cmd_solve->add_flag("--oracle", with_oracle, "compare against the brute-force matching optimum");

    auto* cmd_audit = app.add_subcommand("crs-audit", "empirical balance audit of the composed CRS");
    int audit_graphs = 20;
    long audit_trials = 100000;
    GenerateFlags audit_flags;
    cmd_audit->add_option("--b", b_str, "polytope scale b");
    cmd_audit->add_option("--hypergraphs", audit_graphs, "number of random hypergraphs");
    cmd_audit->add_option("--trials", audit_trials, "trials per hypergraph");
    add_generator_flags(cmd_audit, audit_flags);

    auto* cmd_run = app.add_subcommand("run", "execute a strategy");
    std::string strategy = "main";
    std::string order = "half";
    long trials = 10000;
    bool exact = false;
    bool dump_traces = false;
    cmd_run->add_option("--instance", instance_path)->required();
    cmd_run->add_option("--strategy", strategy, "main | instant | fixed | weitzman");
    cmd_run->add_option("--order", order, "fixed-variant order: half | heuristic");
    cmd_run->add_option("--trials", trials, "Monte Carlo trials");
    cmd_run->add_option("--b", b_str);
    cmd_run->add_option("--steps", steps);
    cmd_run->add_option("--rounding-repeats", repeats);
    cmd_run->add_flag("--exact", exact, "exhaustive exact evaluation (guarded)");
    cmd_run->add_flag("--dump-traces", dump_traces, "CSV trace dump instead of the report");

    auto* cmd_oracle = app.add_subcommand("oracle", "brute-force optimal adaptive strategy value");
    cmd_oracle->add_option("--instance", instance_path)->required();

    auto* cmd_compare = app.add_subcommand("compare", "strategies vs the oracle, one CSV row each");
    std::vector<std::string> instance_paths;
    std::vector<std::string> strategies;
    cmd_compare->add_option("--instance", instance_paths, "instance file (repeatable)")->required();
    cmd_compare->add_option("--strategy", strategies, "strategy (repeatable; default: all applicable)");
    cmd_compare->add_option("--b", b_str);
    cmd_compare->add_option("--steps", steps);
    cmd_compare->add_option("--rounding-repeats", repeats);

    auto* cmd_pipeline = app.add_subcommand("pipeline", "full main-strategy pipeline, JSON report");
    cmd_pipeline->add_option("--instance", instance_path)->required();
    cmd_pipeline->add_option("--b", b_str);
    cmd_pipeline->add_option("--steps", steps);
    cmd_pipeline->add_option("--rounding-repeats", repeats);
    cmd_pipeline->add_option("--trials", trials, "Monte Carlo trials (0 = exact)");
    cmd_pipeline->add_flag("--oracle", with_oracle);

    auto* cmd_batch = app.add_subcommand("batch", "pipeline over an experiment config, CSV report");
    std::string config_path;
    cmd_batch->add_option("--config", config_path)->required();

    try {
        app.parse(argc, argv);

        SolverConfig solver;
        solver.b = rat_from_string(b_str);
        solver.mcg_steps = steps;
        solver.rounding_repeats = repeats;
        if (lp_mode == "greedy") solver.lp_mode = LpMode::GreedyDirection;
        else if (lp_mode != "exact") throw StructuralError("--lp-mode: expected exact or greedy");
        if (format != "csv" && format != "json") throw StructuralError("--format: expected csv or json");
        const OracleGuards guards = OracleGuards::from_env();
        const long exact_guard = 1000000;

        if (cmd_generate->parsed()) {
            const Instance instance = generate_instance(resolve(gen_flags), seed);
            emit(out_path, instance_to_json(instance).dump(2) + "\n");
        } else if (cmd_reservation->parsed()) {
            emit(out_path, reservation_csv(load_checked(instance_path)));
        } else if (cmd_hypergraph->parsed()) {
            emit(out_path, hypergraph_csv(load_checked(instance_path)));
        } else if (cmd_solve->parsed()) {
            const Instance instance = load_checked(instance_path);
            const BlockHypergraph h = build_hypergraph(instance);
            const SubmodularObjective obj(h);
            if (with_oracle && h.edges.size() > 40)
                throw CapacityError("solve --oracle: ground set exceeds the 40-edge enumeration guard");
            const FractionalSolution fractional = measured_continuous_greedy(obj, h, solver);
            const Matching matching = crs_round(obj, fractional, solver.rounding_repeats, seed);
            const Rat f_value = obj.eval(matching);
            const Rat fractional_value = obj.multilinear(fractional.x);
            json report;
            report["fractional_value"] = rat_to_double(fractional_value);
            report["lp_mode"] = solver.lp_mode == LpMode::ExactLp ? "exact_lp" : "greedy_direction";
            json jm = json::array();
            for (int id : matching) jm.push_back(json::array({h.edge(id).box, h.edge(id).start}));
            report["matching"] = jm;
            report["f_value"] = rat_to_double(f_value);
            report["f_value_exact"] = rat_to_string(f_value);
            report["certified_lower_bound"] =
                (1.0 - std::exp(-rat_to_double(solver.b))) * rat_to_double(f_value);
            if (with_oracle) {
                const auto [best, best_value] = brute_force_best_matching(obj, h);
                report["oracle_value"] = rat_to_double(best_value);
                report["ratio"] = best_value == 0 ? 1.0 : rat_to_double(f_value / best_value);
            }
            emit(out_path, report.dump(2) + "\n");
        } else if (cmd_audit->parsed()) {
            std::ostringstream os;
            CsvWriter csv(os);
            csv.row({"hypergraph", "edge", "x", "empirical_keep_rate", "bound", "stderr", "pass"});
            for (int g = 0; g < audit_graphs; ++g) {
                GeneratorParams params = resolve(audit_flags);
                params.n = std::max(params.n, 3);
                const Instance instance = generate_instance(params, mix_seed(seed, {0x10u, (std::uint64_t)g}));
                const BlockHypergraph h = build_hypergraph(instance);
                if (h.edges.empty()) continue;
                const auto x = random_point_in_scaled_polytope(h, solver.b, mix_seed(seed, {0x11u, (std::uint64_t)g}));
                const auto audit = crs_audit(h, x, solver.b, audit_trials, mix_seed(seed, {0x12u, (std::uint64_t)g}));
                if (!audit.all_matchings) throw InvariantError("crs-audit: a composed outcome was not a matching");
                for (const auto& row : audit.rows)
                    csv.row({std::to_string(g), std::to_string(row.edge), fmt_double(row.x),
                             fmt_double(row.empirical), fmt_double(row.bound), fmt_double(row.stderr_),
                             row.pass ? "pass" : "fail"});
            }
            emit(out_path, os.str());
        } else if (cmd_run->parsed()) {
            const Instance instance = load_checked(instance_path);
            const FixedOrderMode order_mode =
                order == "heuristic" ? FixedOrderMode::HeuristicOrder : FixedOrderMode::HalfThreshold;
            const StrategyRun run = make_strategy(instance, strategy, solver, order_mode, seed);
            if (dump_traces) {
                emit(out_path, trace_dump_csv(instance, run, trials, seed));
            } else if (format == "csv") {
                std::ostringstream os;
                CsvWriter csv(os);
                csv.row({"strategy", "mode", "value", "stderr", "trials"});
                if (exact) {
                    const Rat value = exact_expected_utility(strategy_fn(instance, run), exact_guard);
                    csv.row({strategy, "exact", fmt_double(rat_to_double(value)), "0", ""});
                } else {
                    const EvalReport mc = monte_carlo(strategy_fn(instance, run), strategy, trials, seed);
                    csv.row({strategy, "monte_carlo", fmt_double(mc.mean), fmt_double(mc.stderr_),
                             std::to_string(mc.trials)});
                }
                emit(out_path, os.str());
            } else {
                json report;
                report["strategy"] = strategy;
                if (!run.adaptive) {
                    report["tau"] = rat_to_string(run.schedule.tau);
                    json js = json::array();
                    for (const auto& slot : run.schedule.slots) js.push_back(json::array({slot.box, slot.time}));
                    report["schedule"] = js;
                }
                if (exact) {
                    const Rat value = exact_expected_utility(strategy_fn(instance, run), exact_guard);
                    report["mode"] = "exact";
                    report["expected_utility"] = rat_to_double(value);
                    report["expected_utility_exact"] = rat_to_string(value);
                } else {
                    const EvalReport mc = monte_carlo(strategy_fn(instance, run), strategy, trials, seed);
                    report["mode"] = "monte_carlo";
                    report["trials"] = mc.trials;
                    report["mean"] = mc.mean;
                    report["stderr"] = mc.stderr_;
                }
                emit(out_path, report.dump(2) + "\n");
            }
        } else if (cmd_oracle->parsed()) {
            const Instance instance = load_checked(instance_path);
            const OracleResult oracle = optimal_adaptive_oracle(instance, guards);
            if (format == "csv") {
                std::ostringstream os;
                CsvWriter csv(os);
                csv.row({"value", "value_exact", "states"});
                csv.row({fmt_double(rat_to_double(oracle.optimal_value)),
                         rat_to_string(oracle.optimal_value), std::to_string(oracle.states)});
                emit(out_path, os.str());
            } else {
                json report;
                report["value"] = rat_to_double(oracle.optimal_value);
                report["value_exact"] = rat_to_string(oracle.optimal_value);
                report["states"] = oracle.states;
                emit(out_path, report.dump(2) + "\n");
            }
        } else if (cmd_compare->parsed()) {
            std::vector<CompareRow> rows;
            for (const auto& path : instance_paths) {
                const Instance instance = load_checked(path);
                const auto names = strategies.empty() ? applicable_strategies(instance) : strategies;
                for (const auto& name : names)
                    rows.push_back(compare_one(instance, path, name, solver, seed, guards, exact_guard));
            }
            emit(out_path, compare_csv(rows));
        } else if (cmd_pipeline->parsed()) {
            const Instance instance = load_checked(instance_path);
            PipelineOptions options;
            options.solver = solver;
            options.seed = seed;
            options.with_oracle = with_oracle;
            options.guards = guards;
            options.mc_trials = cmd_pipeline->count("--trials") ? trials : 0;
            emit(out_path, run_pipeline(instance, options).report.dump(2) + "\n");
        } else if (cmd_batch->parsed()) {
            std::ifstream f(config_path);
            if (!f) throw StructuralError("cannot open '" + config_path + "'");
            json config;
            f >> config;
            const std::uint64_t batch_seed = config.value("seed", seed);
            std::vector<std::pair<std::string, Instance>> instances;
            if (config.contains("instances"))
                for (const auto& p : config.at("instances"))
                    instances.emplace_back(p.get<std::string>(), load_checked(p.get<std::string>()));
            if (config.contains("generator")) {
                const auto& jg = config.at("generator");
                GenerateFlags flags;
                flags.params.n = jg.value("n", 2);
                flags.params.horizon = jg.value("horizon", 0);
                flags.params.support_max = jg.value("support_max", 3);
                flags.params.value_max = jg.value("value_max", 12);
                flags.params.p_max = jg.value("p_max", 0);
                flags.params.absent_prob = jg.value("absent_prob", 0.0);
                flags.variant = jg.value("variant", std::string("general"));
                flags.cost_max = jg.value("cost_max", std::string("3"));
                flags.params.discount = jg.value("discount", std::string("mixed"));
                const int count = jg.value("count", 1);
                for (int k = 0; k < count; ++k) {
                    const std::string id = "gen-" + std::to_string(batch_seed) + "-" + std::to_string(k);
                    instances.emplace_back(
                        id, generate_instance(resolve(flags), mix_seed(batch_seed, {0x9Eu, (std::uint64_t)k})));
                }
            }
            std::vector<CompareRow> rows;
            for (const auto& [id, instance] : instances) {
                const auto names = config.contains("strategies")
                                       ? config.at("strategies").get<std::vector<std::string>>()
                                       : applicable_strategies(instance);
                for (const auto& name : names)
                    rows.push_back(compare_one(instance, id, name, solver, batch_seed, guards, exact_guard));
            }
            emit(out_path, compare_csv(rows));
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const StructuralError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InvariantError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
