#pragma once

#include <functional>
#include <vector>

#include "pandora/crs.hpp"
#include "pandora/hypergraph.hpp"

namespace pandora {

// Supplies realized rewards to an executing strategy. RngValueSource backs
// simulation; the exact evaluation engine drives the same executors with a
// replay source, so one implementation serves both.
struct ValueSource {
    virtual ~ValueSource() = default;
    virtual Rat draw(int box, int time, const DiscreteDistribution& law) = 0;
};

class RngValueSource : public ValueSource {
  public:
    explicit RngValueSource(std::uint64_t seed) : rng_(seed) {}
    Rat draw(int, int, const DiscreteDistribution& law) override {
        return law.value(law.sample_index(rng_));
    }

  private:
    Rng rng_;
};

struct ScheduleSlot {
    int box = 0;
    int time = 0;
    Rat cost;
    Rat r;
    DiscreteDistribution y_law;
};

// Inspection plan: slots sorted by time, strictly increasing, induced edges
// a matching; plus the acceptance threshold tau.
struct Schedule {
    std::vector<ScheduleSlot> slots;
    Rat tau;
};

struct InspectionRecord {
    int box = 0;
    int time = 0;
    Rat value;
    Rat cost;
};

struct StrategyTrace {
    std::vector<InspectionRecord> inspected;
    int halted_at = 0;          // 0 when nothing was inspected
    bool accepted = false;      // halted by crossing the threshold
    int collected_index = -1;   // into inspected; -1 = nothing collected
    Rat collected_value;        // after discounting
    Rat utility;
};

using StrategyFn = std::function<StrategyTrace(ValueSource&)>;

// Phase 1 of the main strategy: order the matching by start slot and set
// tau = E[max_{e in M} Y_e] / 2.
Schedule pi_main_schedule(const Instance& instance, const BlockHypergraph& h, const Matching& matching);

// Phase 2, shared by every threshold strategy: walk the slots in time
// order, skip those with r < tau, pay the cost and draw a value otherwise,
// halt and collect on the first value >= tau. If the schedule runs out
// without a crossing, halt at the last inspection time and collect the best
// discounted inspected value.
StrategyTrace execute_schedule(const Instance& instance, const Schedule& schedule, ValueSource& source);

// Instant-inspection variant: local-search matching on the (unit-span)
// graph, then the usual threshold schedule. Requires variant == Instant.
Schedule pi_instant_schedule(const Instance& instance, const SolverConfig& config);

enum class FixedOrderMode { HalfThreshold, HeuristicOrder };

// Value-discounting variant: per-box reservation indices from the constant
// tables, tau = E[max_j Y_j] / 2, boxes with r >= tau packed back to back
// with their processing times. Requires variant == Fixed.
Schedule pi_fixed_schedule(const Instance& instance, FixedOrderMode mode);

// Weitzman's adaptive rule for classic Pandora (fixed tables, identity
// discount, zero processing times): inspect in descending reservation
// order, halt once the best observed value reaches the next reservation.
StrategyTrace weitzman_execute(const Instance& instance, ValueSource& source);

// True iff the instance is a classic Pandora embedding.
bool is_classic_pandora(const Instance& instance);

StrategyFn make_schedule_strategy(const Instance& instance, Schedule schedule);
StrategyFn make_weitzman_strategy(const Instance& instance);

}  // namespace pandora
