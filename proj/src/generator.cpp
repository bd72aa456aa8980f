#include "pandora/generator.hpp"

#include <algorithm>

#include "pandora/errors.hpp"
#include "pandora/rng.hpp"

namespace pandora {

namespace {

DiscreteDistribution random_distribution(Rng& rng, const GeneratorParams& p) {
    const int support = static_cast<int>(rng.range(p.support_min, p.support_max));
    std::vector<long> values;
    while (static_cast<int>(values.size()) < support) {
        const long v = rng.range(0, p.value_max);
        if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
    }
    std::sort(values.begin(), values.end());
    std::vector<long> weights(support);
    long total = 0;
    for (auto& w : weights) {
        w = rng.range(1, 9);
        total += w;
    }
    std::vector<DiscreteDistribution::Atom> atoms;
    for (int k = 0; k < support; ++k)
        atoms.push_back({Rat(values[k]), make_rat(weights[k], total)});
    return DiscreteDistribution(std::move(atoms));
}

Rat random_cost(Rng& rng, const GeneratorParams& p) {
    if (p.zero_cost) return Rat(0);
    Rat grid = p.cost_max * p.cost_denominator;
    grid.canonicalize();
    const long grid_max = mpz_class(grid.get_num() / grid.get_den()).get_si();
    return make_rat(rng.range(0, grid_max), p.cost_denominator);
}

DiscountRule random_discount(Rng& rng, const std::string& kind) {
    std::string pick = kind;
    if (pick == "mixed") {
        const char* kinds[] = {"identity", "commit", "multiplicative", "table"};
        pick = kinds[rng.below(4)];
    }
    if (pick == "identity") return DiscountRule::identity();
    if (pick == "commit") return DiscountRule::commit();
    if (pick == "multiplicative") return DiscountRule::multiplicative(make_rat(rng.range(0, 10), 10));
    if (pick == "table") {
        std::vector<Rat> m{Rat(1)};
        long prev_tenths = 10;
        const int len = static_cast<int>(rng.range(1, 3));
        for (int k = 0; k < len; ++k) {
            prev_tenths = rng.range(0, prev_tenths);
            m.push_back(make_rat(prev_tenths, 10));
        }
        return DiscountRule::table(std::move(m));
    }
    throw StructuralError("generator: unknown discount kind '" + kind + "'");
}

}  // namespace

GeneratorParams GeneratorParams::classic(int n) {
    GeneratorParams p;
    p.n = n;
    p.variant = VariantTag::Fixed;
    p.discount = "identity";
    p.p_max = 0;
    p.absent_prob = 0.0;
    return p;
}

Instance generate_instance(const GeneratorParams& params, std::uint64_t seed) {
    if (params.n < 1) throw StructuralError("generator: need at least one box");
    if (params.support_min < 1 || params.support_max < params.support_min)
        throw StructuralError("generator: bad support range");
    if (params.p_max < 0) throw StructuralError("generator: negative processing bound");
    if (params.absent_prob < 0 || params.absent_prob >= 1)
        throw StructuralError("generator: absent probability must lie in [0, 1)");

    Rng rng(mix_seed(seed, {0x6E57u}));
    Instance out;
    out.variant = params.variant;

    std::vector<int> processing(params.n, 0);
    if (params.variant != VariantTag::Instant)
        for (auto& p : processing) p = static_cast<int>(rng.range(0, params.p_max));

    int total_p = 0;
    for (int p : processing) total_p += p;
    const int min_h = params.n + total_p;
    out.horizon = params.horizon > 0 ? params.horizon : min_h + params.horizon_slack;
    if (out.horizon < min_h)
        throw StructuralError("generator: horizon " + std::to_string(out.horizon) +
                              " below the minimum " + std::to_string(min_h));

    const bool fixed = params.variant == VariantTag::Fixed;
    for (int i = 0; i < params.n; ++i) {
        BoxSpec b;
        b.processing_time = processing[i];
        b.discount = random_discount(rng, params.discount);
        b.cost.assign(out.horizon, std::nullopt);
        b.rewards.assign(out.horizon, DiscreteDistribution());
        if (fixed) {
            const Rat c = random_cost(rng, params);
            const DiscreteDistribution d = random_distribution(rng, params);
            for (int t = 0; t < out.horizon; ++t) {
                b.cost[t] = c;
                b.rewards[t] = d;
            }
        } else {
            for (int t = 0; t < out.horizon; ++t) {
                if (params.absent_prob > 0 && rng.unit() < params.absent_prob) continue;
                b.cost[t] = random_cost(rng, params);
                b.rewards[t] = random_distribution(rng, params);
            }
        }
        out.boxes.push_back(std::move(b));
    }

    // Fixed-table fixtures must contain at least one economically live box
    // (cost <= E[V]): with every reservation negative the prophet upper
    // bound degenerates. Repair box 0 deterministically if needed.
    if (fixed && !params.zero_cost) {
        bool live = false;
        for (int i = 0; i < params.n && !live; ++i)
            live = *out.boxes[i].cost[0] <= out.boxes[i].rewards[0].expectation();
        if (!live) {
            const Rat half_ev = out.boxes[0].rewards[0].expectation() / 2;
            for (auto& c : out.boxes[0].cost) c = half_ev;
        }
    }

    require_valid(out);
    return out;
}

}  // namespace pandora
