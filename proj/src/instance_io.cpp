#include "pandora/instance_io.hpp"

#include <fstream>

#include "pandora/errors.hpp"

namespace pandora {

namespace {

using nlohmann::json;

json rat_json(const Rat& q) { return rat_to_string(q); }

Rat rat_from_json(const json& j, const std::string& where) {
    if (j.is_string()) return rat_from_string(j.get<std::string>());
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    throw StructuralError(where + ": expected a rational as \"num/den\" string or integer");
}

json dist_json(const DiscreteDistribution& d) {
    json out = json::array();
    for (const auto& a : d.atoms()) out.push_back(json::array({rat_json(a.value), rat_json(a.prob)}));
    return out;
}

DiscreteDistribution dist_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw StructuralError(where + ": expected an array of [value, prob] pairs");
    std::vector<DiscreteDistribution::Atom> atoms;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2)
            throw StructuralError(where + ": each atom must be a [value, prob] pair");
        atoms.push_back({rat_from_json(pair[0], where + ".value"), rat_from_json(pair[1], where + ".prob")});
    }
    try {
        return DiscreteDistribution(std::move(atoms));
    } catch (const StructuralError& e) {
        throw StructuralError(where + ": " + e.what());
    }
}

json discount_json(const DiscountRule& d) {
    json out;
    switch (d.kind) {
        case DiscountKind::Identity:
            out["kind"] = "identity";
            break;
        case DiscountKind::Commit:
            out["kind"] = "commit";
            break;
        case DiscountKind::Multiplicative:
            out["kind"] = "multiplicative";
            out["factor"] = rat_json(d.factor);
            break;
        case DiscountKind::Table: {
            out["kind"] = "table";
            json m = json::array();
            for (const auto& q : d.multipliers) m.push_back(rat_json(q));
            out["multipliers"] = m;
            break;
        }
    }
    return out;
}

DiscountRule discount_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind"))
        throw StructuralError(where + ": discount must be an object with a \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return DiscountRule::identity();
    if (kind == "commit") return DiscountRule::commit();
    if (kind == "multiplicative") return DiscountRule::multiplicative(rat_from_json(j.at("factor"), where + ".factor"));
    if (kind == "table") {
        std::vector<Rat> m;
        for (const auto& q : j.at("multipliers")) m.push_back(rat_from_json(q, where + ".multipliers"));
        return DiscountRule::table(std::move(m));
    }
    throw StructuralError(where + ": unknown discount kind '" + kind + "'");
}

// Emits {"const": v} when every slot is equal, else {"1": v1, "2": v2, ...};
// ABSENT slots are simply omitted from the map.
json cost_json(const BoxSpec& b) {
    json out = json::object();
    bool all_present = true;
    for (const auto& c : b.cost)
        if (!c) all_present = false;
    if (all_present && b.cost_constant() && !b.cost.empty()) {
        out["const"] = rat_json(*b.cost[0]);
        return out;
    }
    for (std::size_t t = 0; t < b.cost.size(); ++t)
        if (b.cost[t]) out[std::to_string(t + 1)] = rat_json(*b.cost[t]);
    return out;
}

json rewards_json(const BoxSpec& b) {
    json out = json::object();
    if (b.rewards_constant() && !b.rewards.empty()) {
        out["const"] = dist_json(b.rewards[0]);
        return out;
    }
    for (std::size_t t = 0; t < b.rewards.size(); ++t) out[std::to_string(t + 1)] = dist_json(b.rewards[t]);
    return out;
}

int slot_key(const std::string& key, int horizon, const std::string& where) {
    int t = 0;
    try {
        t = std::stoi(key);
    } catch (...) {
        throw StructuralError(where + ": bad slot key '" + key + "'");
    }
    if (t < 1 || t > horizon) throw StructuralError(where + ": slot " + key + " outside 1..horizon");
    return t;
}

}  // namespace

json instance_to_json(const Instance& instance) {
    json out;
    out["format"] = "pandora-time/1";
    out["horizon"] = instance.horizon;
    out["variant"] = variant_to_string(instance.variant);
    json boxes = json::array();
    for (const auto& b : instance.boxes) {
        json jb;
        jb["cost"] = cost_json(b);
        jb["p"] = b.processing_time;
        jb["rewards"] = rewards_json(b);
        jb["discount"] = discount_json(b.discount);
        boxes.push_back(jb);
    }
    out["boxes"] = boxes;
    return out;
}

Instance instance_from_json(const json& j) {
    if (!j.is_object()) throw StructuralError("instance: expected a JSON object");
    if (!j.contains("format") || j.at("format") != "pandora-time/1")
        throw StructuralError("instance: missing or unsupported \"format\" (want pandora-time/1)");
    Instance out;
    out.horizon = j.at("horizon").get<int>();
    if (out.horizon < 1) throw StructuralError("instance: horizon must be positive");
    out.variant = j.contains("variant") ? variant_from_string(j.at("variant").get<std::string>())
                                        : VariantTag::General;
    int i = 0;
    for (const auto& jb : j.at("boxes")) {
        const std::string where = "boxes[" + std::to_string(i) + "]";
        BoxSpec b;
        b.processing_time = jb.at("p").get<int>();
        b.discount = jb.contains("discount") ? discount_from_json(jb.at("discount"), where)
                                             : DiscountRule::identity();

        b.cost.assign(out.horizon, std::nullopt);
        const json& jc = jb.at("cost");
        if (jc.contains("const")) {
            const Rat c = rat_from_json(jc.at("const"), where + ".cost");
            for (auto& slot : b.cost) slot = c;
        } else {
            for (auto it = jc.begin(); it != jc.end(); ++it)
                b.cost[slot_key(it.key(), out.horizon, where + ".cost") - 1] = rat_from_json(*it, where + ".cost");
        }

        b.rewards.assign(out.horizon, DiscreteDistribution());
        const json& jr = jb.at("rewards");
        if (jr.contains("const")) {
            const DiscreteDistribution d = dist_from_json(jr.at("const"), where + ".rewards");
            for (auto& slot : b.rewards) slot = d;
        } else {
            for (auto it = jr.begin(); it != jr.end(); ++it)
                b.rewards[slot_key(it.key(), out.horizon, where + ".rewards") - 1] =
                    dist_from_json(*it, where + ".rewards");
        }
        out.boxes.push_back(std::move(b));
        ++i;
    }
    return out;
}

void save_instance(const Instance& instance, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw StructuralError("cannot open '" + path + "' for writing");
    f << instance_to_json(instance).dump(2) << "\n";
}

Instance load_instance(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw StructuralError("cannot open '" + path + "'");
    json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw StructuralError("cannot parse '" + path + "': " + e.what());
    }
    return instance_from_json(j);
}

}  // namespace pandora
