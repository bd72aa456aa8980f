#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pandora/distribution.hpp"

namespace pandora {

// How a realized reward deteriorates with the number of rounds elapsed
// between inspection and collection. Every rule is the identity at
// elapsed = 0 and pointwise non-increasing afterwards (validated).
enum class DiscountKind { Identity, Commit, Multiplicative, Table };

struct DiscountRule {
    DiscountKind kind = DiscountKind::Identity;
    Rat factor = Rat(1);            // Multiplicative: value * factor^elapsed
    std::vector<Rat> multipliers;   // Table: indexed by elapsed, clamped at the last entry

    Rat multiplier_at(int elapsed) const;
    Rat apply(const Rat& value, int elapsed) const { return value * multiplier_at(elapsed); }

    static DiscountRule identity() { return {}; }
    static DiscountRule commit();
    static DiscountRule multiplicative(const Rat& gamma);
    static DiscountRule table(std::vector<Rat> multipliers);
};

enum class VariantTag { General, Instant, Fixed };

std::string variant_to_string(VariantTag v);
VariantTag variant_from_string(const std::string& s);

// One box: per-slot cost (nullopt = cannot inspect at that slot, the
// infinite-cost encoding), processing time, per-slot reward law, discount.
// Tables are stored expanded to the full horizon; index is t-1 for slot t.
struct BoxSpec {
    std::vector<std::optional<Rat>> cost;
    int processing_time = 0;
    std::vector<DiscreteDistribution> rewards;
    DiscountRule discount;

    bool cost_constant() const;
    bool rewards_constant() const;
};

struct Instance {
    int horizon = 0;
    VariantTag variant = VariantTag::General;
    std::vector<BoxSpec> boxes;

    int n() const { return static_cast<int>(boxes.size()); }
    int processing(int i) const { return boxes[i].processing_time; }
    int total_processing() const;

    // t is 1-based throughout.
    const std::optional<Rat>& cost_at(int i, int t) const { return boxes[i].cost[t - 1]; }
    const DiscreteDistribution& reward_at(int i, int t) const { return boxes[i].rewards[t - 1]; }
    Rat discounted(int i, const Rat& value, int elapsed) const { return boxes[i].discount.apply(value, elapsed); }
};

// Empty iff every invariant holds; each violation names the field and rule.
std::vector<std::string> validate(const Instance& instance);

// Throws StructuralError listing the violations, if any.
void require_valid(const Instance& instance);

}  // namespace pandora
