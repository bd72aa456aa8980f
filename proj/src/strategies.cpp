#include "pandora/strategies.hpp"

#include <algorithm>
#include <numeric>

#include "pandora/errors.hpp"

namespace pandora {

Schedule pi_main_schedule(const Instance& instance, const BlockHypergraph& h, const Matching& matching) {
    if (!is_matching(h, matching)) throw StructuralError("pi_main_schedule: input edge set is not a matching");
    Schedule schedule;
    std::vector<DiscreteDistribution> laws;
    for (int id : matching) {
        const HyperEdge& e = h.edge(id);
        schedule.slots.push_back({e.box, e.start, e.cost, e.r, e.y_law});
        laws.push_back(e.y_law);
    }
    std::sort(schedule.slots.begin(), schedule.slots.end(),
              [](const ScheduleSlot& a, const ScheduleSlot& b) { return a.time < b.time; });
    for (const auto& slot : schedule.slots)
        if (slot.time < 1 || slot.time > instance.horizon)
            throw StructuralError("pi_main_schedule: slot outside the instance horizon");
    const std::vector<Rat> ones(laws.size(), Rat(1));
    schedule.tau = expectation_of_max(laws, ones) / 2;
    return schedule;
}

StrategyTrace execute_schedule(const Instance& instance, const Schedule& schedule, ValueSource& source) {
    StrategyTrace trace;
    Rat costs(0);
    for (const auto& slot : schedule.slots) {
        if (slot.r < schedule.tau) continue;  // never inspected, no cost
        const Rat value = source.draw(slot.box, slot.time, instance.reward_at(slot.box, slot.time));
        trace.inspected.push_back({slot.box, slot.time, value, slot.cost});
        costs += slot.cost;
        if (value >= schedule.tau) {
            trace.accepted = true;
            trace.halted_at = slot.time;
            trace.collected_index = static_cast<int>(trace.inspected.size()) - 1;
            trace.collected_value = value;  // collected at elapsed 0
            break;
        }
    }
    if (!trace.accepted && !trace.inspected.empty()) {
        // No crossing: halt at the last inspection time, collect the best
        // discounted value among everything inspected.
        trace.halted_at = trace.inspected.back().time;
        for (int k = 0; k < static_cast<int>(trace.inspected.size()); ++k) {
            const auto& rec = trace.inspected[k];
            const Rat v = instance.discounted(rec.box, rec.value, trace.halted_at - rec.time);
            if (trace.collected_index < 0 || v > trace.collected_value) {
                trace.collected_index = k;
                trace.collected_value = v;
            }
        }
    }
    trace.utility = (trace.collected_index >= 0 ? trace.collected_value : Rat(0)) - costs;
    return trace;
}

Schedule pi_instant_schedule(const Instance& instance, const SolverConfig& config) {
    if (instance.variant != VariantTag::Instant)
        throw StructuralError("pi_instant: requires an instant-inspection instance");
    require_valid(instance);
    const BlockHypergraph h = build_hypergraph(instance);
    const SubmodularObjective obj(h);
    const Matching m = local_search_bipartite(obj, h, config.epsilon / 4);
    return pi_main_schedule(instance, h, m);
}

Schedule pi_fixed_schedule(const Instance& instance, FixedOrderMode mode) {
    if (instance.variant != VariantTag::Fixed)
        throw StructuralError("pi_fixed: requires a fixed costs-and-distributions instance");
    require_valid(instance);
    const int n = instance.n();
    std::vector<ReservationIndex> indices;
    for (int i = 0; i < n; ++i) {
        const auto& cost = instance.cost_at(i, 1);
        if (!cost) throw StructuralError("pi_fixed: box " + std::to_string(i) + " has no inspection cost");
        indices.push_back(reservation_index(i, 0, instance.reward_at(i, 1), *cost));
    }

    std::vector<DiscreteDistribution> laws;
    for (const auto& idx : indices) laws.push_back(idx.y_law);
    const std::vector<Rat> ones(laws.size(), Rat(1));
    const Rat tau = expectation_of_max(laws, ones) / 2;

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (mode == FixedOrderMode::HeuristicOrder) {
        std::vector<Rat> ey(n);
        for (int i = 0; i < n; ++i) ey[i] = indices[i].y_law.expectation();
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ey[a] > ey[b]; });
    }

    Schedule schedule;
    schedule.tau = tau;
    int t = 1;
    for (int i : order) {
        if (indices[i].r < tau) continue;  // skipped boxes consume no time
        schedule.slots.push_back({i, t, *instance.cost_at(i, 1), indices[i].r, indices[i].y_law});
        t += 1 + instance.processing(i);
    }
    return schedule;
}

bool is_classic_pandora(const Instance& instance) {
    if (instance.variant != VariantTag::Fixed) return false;
    for (const auto& b : instance.boxes) {
        if (b.processing_time != 0) return false;
        if (b.discount.kind != DiscountKind::Identity) return false;
        if (!b.cost_constant() || !b.rewards_constant()) return false;
        for (const auto& c : b.cost)
            if (!c) return false;
    }
    return true;
}

StrategyTrace weitzman_execute(const Instance& instance, ValueSource& source) {
    if (!is_classic_pandora(instance))
        throw StructuralError("weitzman: requires classic Pandora (fixed, identity discount, p = 0)");
    const int n = instance.n();
    std::vector<Rat> reservation(n);
    for (int i = 0; i < n; ++i)
        reservation[i] = reservation_value(instance.reward_at(i, 1), *instance.cost_at(i, 1));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return reservation[a] > reservation[b]; });

    StrategyTrace trace;
    Rat best(0);
    Rat costs(0);
    int t = 1;
    for (int i : order) {
        if (best >= reservation[i]) break;
        const Rat value = source.draw(i, t, instance.reward_at(i, t));
        trace.inspected.push_back({i, t, value, *instance.cost_at(i, t)});
        costs += *instance.cost_at(i, t);
        if (trace.collected_index < 0 || value > best) {
            best = value;
            trace.collected_index = static_cast<int>(trace.inspected.size()) - 1;
        }
        ++t;
    }
    trace.halted_at = trace.inspected.empty() ? 0 : trace.inspected.back().time;
    if (trace.collected_index >= 0) trace.collected_value = best;
    trace.utility = best - costs;
    return trace;
}

StrategyFn make_schedule_strategy(const Instance& instance, Schedule schedule) {
    return [&instance, schedule = std::move(schedule)](ValueSource& source) {
        return execute_schedule(instance, schedule, source);
    };
}

StrategyFn make_weitzman_strategy(const Instance& instance) {
    return [&instance](ValueSource& source) { return weitzman_execute(instance, source); };
}

}  // namespace pandora
