#include "pandora/engine.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "pandora/errors.hpp"

namespace pandora {

namespace {

// Replays a fixed prefix of atom choices and records the branching factor
// of every draw; the first draw past the prefix extends it with atom 0.
class ReplaySource : public ValueSource {
  public:
    ReplaySource(std::vector<std::size_t>& prefix, long guard) : prefix_(prefix), guard_(guard) {}

    Rat draw(int, int, const DiscreteDistribution& law) override {
        if (pos_ == prefix_.size()) prefix_.push_back(0);
        const std::size_t idx = prefix_[pos_];
        if (idx >= law.size()) throw InvariantError("exact evaluation: replay index out of range");
        sizes_.push_back(law.size());
        prob_ *= law.prob(idx);
        product_ *= static_cast<long>(law.size());
        if (product_ > guard_)
            throw CapacityError("exact evaluation: branch product exceeds guard; use Monte Carlo");
        ++pos_;
        return law.value(idx);
    }

    const Rat& prob() const { return prob_; }
    std::size_t draws() const { return pos_; }
    std::size_t size_at(std::size_t k) const { return sizes_[k]; }

  private:
    std::vector<std::size_t>& prefix_;
    std::vector<std::size_t> sizes_;
    std::size_t pos_ = 0;
    Rat prob_ = Rat(1);
    long product_ = 1;
    long guard_;
};

}  // namespace

void for_each_trace(const StrategyFn& strategy, long max_branch_product,
                    const std::function<void(const Rat&, const StrategyTrace&)>& visit) {
    std::vector<std::size_t> prefix;
    while (true) {
        ReplaySource source(prefix, max_branch_product);
        const StrategyTrace trace = strategy(source);
        visit(source.prob(), trace);
        prefix.resize(source.draws());
        while (!prefix.empty() && prefix.back() + 1 == source.size_at(prefix.size() - 1)) prefix.pop_back();
        if (prefix.empty()) break;
        ++prefix.back();
    }
}

std::vector<WeightedTrace> enumerate_traces(const StrategyFn& strategy, long max_branch_product) {
    std::vector<WeightedTrace> out;
    for_each_trace(strategy, max_branch_product,
                   [&](const Rat& p, const StrategyTrace& t) { out.push_back({p, t}); });
    return out;
}

Rat exact_expected_utility(const StrategyFn& strategy, long max_branch_product) {
    Rat total(0);
    for_each_trace(strategy, max_branch_product,
                   [&](const Rat& p, const StrategyTrace& t) { total += p * t.utility; });
    return total;
}

EvalReport monte_carlo(const StrategyFn& strategy, const std::string& strategy_id, long trials,
                       std::uint64_t seed) {
    if (trials < 1) throw StructuralError("monte_carlo: need at least one trial");
    EvalReport report;
    report.strategy_id = strategy_id;
    report.trials = trials;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long trial = 0; trial < trials; ++trial) {
        RngValueSource source(mix_seed(seed, {0x77A1u, static_cast<std::uint64_t>(trial)}));
        const double u = rat_to_double(strategy(source).utility);
        sum += u;
        sum_sq += u * u;
    }
    report.mean = sum / static_cast<double>(trials);
    if (trials > 1) {
        const double var = std::max(0.0, (sum_sq - sum * sum / trials) / static_cast<double>(trials - 1));
        report.stderr_ = std::sqrt(var / static_cast<double>(trials));
    }
    return report;
}

OracleGuards OracleGuards::from_env() {
    OracleGuards g;
    const char* raw = std::getenv("PANDORA_GUARD_OVERRIDE");
    if (!raw) return g;
    const std::string s(raw);
    if (s == "unsafe") {
        g.unsafe = true;
        return g;
    }
    std::stringstream ss(s);
    char comma;
    if (ss >> g.max_boxes >> comma >> g.max_horizon >> comma >> g.max_support) return g;
    throw StructuralError("PANDORA_GUARD_OVERRIDE: expected \"n,H,support\" or \"unsafe\"");
}

namespace {

// Oracle decision states. PRE: the current round has not been used yet
// (halt / idle / inspect). POST: a box was just inspected this round
// (halt now at zero discount / continue to the next round).
struct OracleContext {
    const Instance* instance;
    std::map<std::string, Rat> value;
    std::map<std::string, int> policy;

    // records[i] = -1 if box i uninspected, else time * 4096 + atom index.
    static std::string key(bool post, int t, const std::vector<int>& records) {
        std::string k;
        k.reserve(records.size() * 6 + 6);
        k += post ? 'P' : 'D';
        k += std::to_string(t);
        for (int r : records) {
            k += ':';
            k += std::to_string(r);
        }
        return k;
    }

    int earliest_inspection(const std::vector<int>& records) const {
        int earliest = 1;
        for (int i = 0; i < static_cast<int>(records.size()); ++i) {
            if (records[i] < 0) continue;
            const int t = records[i] / 4096;
            earliest = std::max(earliest, t + instance->processing(i) + 1);
        }
        return earliest;
    }

    Rat collect_now(int t, const std::vector<int>& records) const {
        Rat best(0);
        for (int i = 0; i < static_cast<int>(records.size()); ++i) {
            if (records[i] < 0) continue;
            const int ti = records[i] / 4096;
            const int atom = records[i] % 4096;
            const Rat v = instance->reward_at(i, ti).value(atom);
            best = std::max(best, instance->discounted(i, v, t - ti));
        }
        return best;
    }

    Rat pre_value(int t, std::vector<int>& records);
    Rat post_value(int t, std::vector<int>& records);
};

// Actions: 0 = halt, 1 = idle/continue, 2 + i = inspect box i.
Rat OracleContext::pre_value(int t, std::vector<int>& records) {
    const std::string k = key(false, t, records);
    auto hit = value.find(k);
    if (hit != value.end()) return hit->second;

    Rat best = collect_now(t, records);
    int action = 0;
    const int h = instance->horizon;
    if (t <= h) {
        const Rat idle = pre_value(t + 1, records);
        if (idle > best) {
            best = idle;
            action = 1;
        }
        if (t >= earliest_inspection(records)) {
            for (int i = 0; i < instance->n(); ++i) {
                if (records[i] >= 0) continue;
                const auto& cost = instance->cost_at(i, t);
                if (!cost) continue;
                const auto& law = instance->reward_at(i, t);
                if (law.size() >= 4096)
                    throw CapacityError("oracle: support too large for the state encoding");
                Rat total = -*cost;
                for (int atom = 0; atom < static_cast<int>(law.size()); ++atom) {
                    records[i] = t * 4096 + atom;
                    total += law.prob(atom) * post_value(t, records);
                    records[i] = -1;
                }
                if (total > best) {
                    best = total;
                    action = 2 + i;
                }
            }
        }
    }
    value.emplace(k, best);
    policy.emplace(k, action);
    return best;
}

Rat OracleContext::post_value(int t, std::vector<int>& records) {
    const std::string k = key(true, t, records);
    auto hit = value.find(k);
    if (hit != value.end()) return hit->second;

    Rat best = collect_now(t, records);
    int action = 0;
    const Rat cont = pre_value(t + 1, records);
    if (cont > best) {
        best = cont;
        action = 1;
    }
    value.emplace(k, best);
    policy.emplace(k, action);
    return best;
}

void check_guards(const Instance& instance, const OracleGuards& guards) {
    if (guards.unsafe) return;
    if (instance.n() > guards.max_boxes)
        throw CapacityError("oracle: instance exceeds the box guard (" + std::to_string(guards.max_boxes) + ")");
    if (instance.horizon > guards.max_horizon)
        throw CapacityError("oracle: instance exceeds the horizon guard (" +
                            std::to_string(guards.max_horizon) + ")");
    for (int i = 0; i < instance.n(); ++i)
        for (int t = 1; t <= instance.horizon; ++t)
            if (static_cast<int>(instance.reward_at(i, t).size()) > guards.max_support)
                throw CapacityError("oracle: instance exceeds the support guard (" +
                                    std::to_string(guards.max_support) + ")");
}

}  // namespace

OracleResult optimal_adaptive_oracle(const Instance& instance, const OracleGuards& guards) {
    require_valid(instance);
    check_guards(instance, guards);
    OracleContext ctx;
    ctx.instance = &instance;
    std::vector<int> records(instance.n(), -1);
    OracleResult result;
    result.optimal_value = ctx.pre_value(1, records);
    result.policy = std::move(ctx.policy);
    result.states = result.policy.size();
    return result;
}

namespace {

struct PolicyWalker {
    const Instance* instance;
    const std::map<std::string, int>* policy;

    int stored(bool post, int t, const std::vector<int>& records) const {
        const auto it = policy->find(OracleContext::key(post, t, records));
        if (it == policy->end()) throw InvariantError("oracle policy: unexplored state reached");
        return it->second;
    }

    Rat collect(int t, const std::vector<int>& records) const {
        OracleContext ctx;
        ctx.instance = instance;
        return ctx.collect_now(t, records);
    }

    Rat pre(int t, std::vector<int>& records) const {
        const int action = stored(false, t, records);
        if (action == 0) return collect(t, records);
        if (action == 1) return pre(t + 1, records);
        const int i = action - 2;
        const auto& law = instance->reward_at(i, t);
        Rat total = -*instance->cost_at(i, t);
        for (int atom = 0; atom < static_cast<int>(law.size()); ++atom) {
            records[i] = t * 4096 + atom;
            const int choice = stored(true, t, records);
            total += law.prob(atom) * (choice == 0 ? collect(t, records) : pre(t + 1, records));
            records[i] = -1;
        }
        return total;
    }
};

}  // namespace

Rat oracle_policy_value(const Instance& instance, const OracleResult& result) {
    PolicyWalker walker{&instance, &result.policy};
    std::vector<int> records(instance.n(), -1);
    return walker.pre(1, records);
}

Instance capped_zero_cost_instance(const Instance& instance, const BlockHypergraph& h) {
    Instance out = instance;
    out.variant = VariantTag::General;
    for (auto& b : out.boxes) {
        b.discount = DiscountRule::identity();
        for (auto& c : b.cost)
            if (c) c = Rat(0);
    }
    for (const auto& e : h.edges) out.boxes[e.box].rewards[e.start - 1] = e.y_law;
    return out;
}

AdaptivityGapProbe adaptivity_gap_probe(const Instance& instance, const OracleGuards& guards) {
    const BlockHypergraph h = build_hypergraph(instance);
    const SubmodularObjective obj(h);
    AdaptivityGapProbe probe;
    probe.adaptive_opt = optimal_adaptive_oracle(capped_zero_cost_instance(instance, h), guards).optimal_value;
    probe.best_matching_value = brute_force_best_matching(obj, h).second;
    probe.ratio = probe.adaptive_opt == 0
                      ? 1.0
                      : rat_to_double(probe.best_matching_value / probe.adaptive_opt);
    return probe;
}

}  // namespace pandora
