#include "pandora/instance.hpp"

#include "pandora/errors.hpp"

namespace pandora {

Rat DiscountRule::multiplier_at(int elapsed) const {
    if (elapsed < 0) throw StructuralError("discount: negative elapsed time");
    switch (kind) {
        case DiscountKind::Identity:
            return Rat(1);
        case DiscountKind::Commit:
            return elapsed == 0 ? Rat(1) : Rat(0);
        case DiscountKind::Multiplicative:
            return rat_pow(factor, static_cast<unsigned long>(elapsed));
        case DiscountKind::Table: {
            if (multipliers.empty()) throw StructuralError("discount: empty table");
            const std::size_t idx = std::min<std::size_t>(elapsed, multipliers.size() - 1);
            return multipliers[idx];
        }
    }
    throw InvariantError("discount: unknown kind");
}

DiscountRule DiscountRule::commit() {
    DiscountRule r;
    r.kind = DiscountKind::Commit;
    return r;
}

DiscountRule DiscountRule::multiplicative(const Rat& gamma) {
    DiscountRule r;
    r.kind = DiscountKind::Multiplicative;
    r.factor = gamma;
    return r;
}

DiscountRule DiscountRule::table(std::vector<Rat> multipliers) {
    DiscountRule r;
    r.kind = DiscountKind::Table;
    r.multipliers = std::move(multipliers);
    return r;
}

std::string variant_to_string(VariantTag v) {
    switch (v) {
        case VariantTag::General: return "general";
        case VariantTag::Instant: return "instant";
        case VariantTag::Fixed: return "fixed";
    }
    throw InvariantError("variant: unknown tag");
}

VariantTag variant_from_string(const std::string& s) {
    if (s == "general") return VariantTag::General;
    if (s == "instant") return VariantTag::Instant;
    if (s == "fixed") return VariantTag::Fixed;
    throw StructuralError("variant: unknown tag '" + s + "'");
}

bool BoxSpec::cost_constant() const {
    for (std::size_t t = 1; t < cost.size(); ++t)
        if (cost[t] != cost[0]) return false;
    return true;
}

bool BoxSpec::rewards_constant() const {
    for (std::size_t t = 1; t < rewards.size(); ++t)
        if (!(rewards[t] == rewards[0])) return false;
    return true;
}

int Instance::total_processing() const {
    int total = 0;
    for (const auto& b : boxes) total += b.processing_time;
    return total;
}

namespace {

void check_discount(const DiscountRule& d, const std::string& where, std::vector<std::string>& out) {
    switch (d.kind) {
        case DiscountKind::Identity:
        case DiscountKind::Commit:
            break;
        case DiscountKind::Multiplicative:
            if (d.factor < 0 || d.factor > 1)
                out.push_back(where + ".discount: multiplicative factor must lie in [0,1]");
            break;
        case DiscountKind::Table: {
            if (d.multipliers.empty()) {
                out.push_back(where + ".discount: table must be non-empty");
                break;
            }
            if (d.multipliers.front() != 1)
                out.push_back(where + ".discount: table multiplier at elapsed 0 must be 1 (identity at inspection)");
            for (std::size_t k = 0; k < d.multipliers.size(); ++k) {
                if (d.multipliers[k] < 0 || d.multipliers[k] > 1)
                    out.push_back(where + ".discount: table multiplier out of [0,1]");
                if (k > 0 && d.multipliers[k] > d.multipliers[k - 1]) {
                    out.push_back(where + ".discount: table must be non-increasing in elapsed time");
                    break;
                }
            }
            break;
        }
    }
}

}  // namespace

std::vector<std::string> validate(const Instance& instance) {
    std::vector<std::string> out;
    const int n = instance.n();
    const int h = instance.horizon;
    if (h < 1) out.push_back("horizon: must be positive");
    if (h < n + instance.total_processing())
        out.push_back("horizon: must be at least n + sum of processing times (" +
                      std::to_string(n + instance.total_processing()) + ")");
    for (int i = 0; i < n; ++i) {
        const auto& b = instance.boxes[i];
        const std::string where = "boxes[" + std::to_string(i) + "]";
        if (b.processing_time < 0) out.push_back(where + ".p: must be nonnegative");
        if (static_cast<int>(b.cost.size()) != h)
            out.push_back(where + ".cost: table must cover slots 1.." + std::to_string(h));
        if (static_cast<int>(b.rewards.size()) != h)
            out.push_back(where + ".rewards: table must cover slots 1.." + std::to_string(h));
        for (const auto& c : b.cost)
            if (c && *c < 0) out.push_back(where + ".cost: negative cost");
        check_discount(b.discount, where, out);
        if (instance.variant == VariantTag::Instant && b.processing_time != 0)
            out.push_back(where + ".p: variant instant requires processing time 0");
        if (instance.variant == VariantTag::Fixed) {
            if (!b.cost_constant()) out.push_back(where + ".cost: variant fixed requires a constant cost table");
            if (!b.rewards_constant())
                out.push_back(where + ".rewards: variant fixed requires a constant reward table");
        }
    }
    return out;
}

void require_valid(const Instance& instance) {
    const auto violations = validate(instance);
    if (violations.empty()) return;
    std::string msg = "invalid instance:";
    for (const auto& v : violations) msg += "\n  - " + v;
    throw StructuralError(msg);
}

}  // namespace pandora
