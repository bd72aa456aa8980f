#include "pandora/crs.hpp"

#include <algorithm>
#include <cmath>

#include "pandora/errors.hpp"
#include "pandora/rng.hpp"

namespace pandora {

namespace {

constexpr std::uint64_t kActiveTag = 0xA57u;
constexpr std::uint64_t kPriorityTag = 0x9817u;

// One-shot tape entries: a few splitmix rounds per (seed, tag, edge), cheap
// enough for 10^5-trial audits.
double tape_unit(std::uint64_t seed, std::uint64_t tag, int edge_id) {
    return static_cast<double>(mix_seed(seed, {tag, static_cast<std::uint64_t>(edge_id)}) >> 11) *
           0x1.0p-53;
}

double edge_priority(std::uint64_t seed, int edge_id) { return tape_unit(seed, kPriorityTag, edge_id); }

}  // namespace

namespace {

ActiveSet sample_active_from_doubles(const std::vector<double>& xd, std::uint64_t seed) {
    ActiveSet out;
    out.seed = seed;
    for (int e = 0; e < static_cast<int>(xd.size()); ++e) {
        if (xd[e] == 0.0) continue;
        if (tape_unit(seed, kActiveTag, e) < xd[e]) out.edges.push_back(e);
    }
    return out;
}

std::vector<double> to_doubles(const std::vector<Rat>& x) {
    std::vector<double> xd(x.size());
    for (std::size_t e = 0; e < x.size(); ++e) xd[e] = rat_to_double(x[e]);
    return xd;
}

}  // namespace

ActiveSet sample_active(const BlockHypergraph& h, const std::vector<Rat>& x, std::uint64_t seed) {
    if (x.size() != h.edges.size()) throw StructuralError("sample_active: vector length mismatch");
    return sample_active_from_doubles(to_doubles(x), seed);
}

CrsOutcome crs_matroid(const BlockHypergraph& h, const ActiveSet& active) {
    CrsOutcome out;
    out.scheme = CrsScheme::Matroid;
    std::vector<double> priority(active.edges.size());
    for (std::size_t k = 0; k < active.edges.size(); ++k)
        priority[k] = edge_priority(active.seed, active.edges[k]);
    for (std::size_t k = 0; k < active.edges.size(); ++k) {
        const int e = active.edges[k];
        bool survives = true;
        for (std::size_t j = 0; j < active.edges.size(); ++j) {
            const int g = active.edges[j];
            if (g == e || h.edge(g).box != h.edge(e).box) continue;
            // 53-bit tape entries; exact ties break by id so the pick stays a
            // deterministic function of (seed, active set).
            if (priority[j] < priority[k] || (priority[j] == priority[k] && g < e)) {
                survives = false;
                break;
            }
        }
        if (survives) out.kept.push_back(e);
    }
    return out;
}

CrsOutcome crs_interval(const BlockHypergraph& h, const ActiveSet& active) {
    CrsOutcome out;
    out.scheme = CrsScheme::Interval;
    for (int e : active.edges) {
        const HyperEdge& ee = h.edge(e);
        bool survives = true;
        for (int g : active.edges) {
            if (g == e) continue;
            const HyperEdge& ge = h.edge(g);
            if (ge.span_end < ee.start || ee.span_end < ge.start) continue;  // no overlap
            if (ge.start < ee.start || (ge.start == ee.start && g < e)) {
                survives = false;
                break;
            }
        }
        if (survives) out.kept.push_back(e);
    }
    return out;
}

CrsOutcome crs_composed(const BlockHypergraph& h, const ActiveSet& active) {
    const CrsOutcome a = crs_matroid(h, active);
    const CrsOutcome b = crs_interval(h, active);
    CrsOutcome out;
    out.scheme = CrsScheme::Composed;
    std::set_intersection(a.kept.begin(), a.kept.end(), b.kept.begin(), b.kept.end(),
                          std::back_inserter(out.kept));
    if (!is_matching(h, out.kept)) throw InvariantError("crs_composed: kept set is not a matching");
    return out;
}

std::vector<Rat> random_point_in_scaled_polytope(const BlockHypergraph& h, const Rat& b,
                                                 std::uint64_t seed) {
    const std::size_t m = h.edges.size();
    std::vector<Rat> raw(m);
    Rng rng(mix_seed(seed, {0xB0ADu}));
    for (auto& v : raw) v = Rat(1, 5) + Rat(4, 5) * rng.unit_rat();

    Rat worst(0);
    for (int i = 0; i < h.left_count; ++i) {
        Rat load(0);
        for (std::size_t e = 0; e < m; ++e)
            if (h.edges[e].box == i) load += raw[e];
        worst = std::max(worst, load);
    }
    for (int t = 1; t <= h.right_count; ++t) {
        Rat load(0);
        for (std::size_t e = 0; e < m; ++e)
            if (h.edges[e].start <= t && t <= h.edges[e].span_end) load += raw[e];
        worst = std::max(worst, load);
    }
    if (worst == 0) return std::vector<Rat>(m, Rat(0));
    const Rat scale = b / worst;
    for (auto& v : raw) {
        v *= scale;
        v.canonicalize();
    }
    return raw;
}

CrsAuditResult crs_audit(const BlockHypergraph& h, const std::vector<Rat>& x, const Rat& b, long trials,
                         std::uint64_t seed) {
    if (!in_scaled_polytope(h, x, b)) throw StructuralError("crs_audit: point outside bP");
    CrsAuditResult result;
    result.trials = trials;
    std::vector<long> kept_count(h.edges.size(), 0);
    const std::vector<double> xd = to_doubles(x);
    for (long trial = 0; trial < trials; ++trial) {
        const auto active =
            sample_active_from_doubles(xd, mix_seed(seed, {0xAD17u, static_cast<std::uint64_t>(trial)}));
        CrsOutcome outcome;
        try {
            outcome = crs_composed(h, active);
        } catch (const InvariantError&) {
            result.all_matchings = false;
            continue;
        }
        for (int e : outcome.kept) ++kept_count[e];
    }
    const double bd = rat_to_double(b);
    const double balance = std::exp(-bd) * (1.0 - std::exp(-bd)) / bd;
    for (std::size_t e = 0; e < h.edges.size(); ++e) {
        if (x[e] == 0) continue;
        CrsAuditRow row;
        row.edge = static_cast<int>(e);
        row.x = rat_to_double(x[e]);
        row.kept_trials = kept_count[e];
        row.empirical = static_cast<double>(kept_count[e]) / static_cast<double>(trials);
        row.bound = balance * row.x;
        row.stderr_ = std::sqrt(std::max(row.empirical * (1.0 - row.empirical), 1e-12) /
                                static_cast<double>(trials));
        row.pass = row.empirical >= row.bound - 3.0 * row.stderr_;
        result.rows.push_back(row);
    }
    return result;
}

bool crs_monotonicity_coupling(const BlockHypergraph& h, const std::vector<Rat>& x, long pairs,
                               std::uint64_t seed) {
    const std::vector<double> xd = to_doubles(x);
    for (long k = 0; k < pairs; ++k) {
        const std::uint64_t tape = mix_seed(seed, {0xC0AAu, static_cast<std::uint64_t>(k)});
        const ActiveSet big = sample_active_from_doubles(xd, tape);
        ActiveSet small;
        small.seed = big.seed;  // shared tape: both runs see identical priorities
        Rng drop(mix_seed(seed, {0xD80Fu, static_cast<std::uint64_t>(k)}));
        for (int e : big.edges)
            if (drop.unit() < 0.5) small.edges.push_back(e);

        const auto schemes = {&crs_matroid, &crs_interval, &crs_composed};
        for (auto scheme : schemes) {
            const auto kept_big = scheme(h, big).kept;
            const auto kept_small = scheme(h, small).kept;
            for (int e : kept_big) {
                const bool in_small =
                    std::binary_search(small.edges.begin(), small.edges.end(), e);
                if (!in_small) continue;
                if (!std::binary_search(kept_small.begin(), kept_small.end(), e)) return false;
            }
        }
    }
    return true;
}

Matching crs_round(const SubmodularObjective& obj, const FractionalSolution& fractional, int repeats,
                   std::uint64_t seed) {
    const BlockHypergraph& h = obj.hypergraph();
    if (!in_scaled_polytope(h, fractional.x, fractional.b))
        throw StructuralError("crs_round: fractional point outside bP");
    Matching best;
    Rat best_value(0);
    for (int rep = 0; rep < repeats; ++rep) {
        const auto active = sample_active(h, fractional.x, mix_seed(seed, {0xC125u, static_cast<std::uint64_t>(rep)}));
        const auto outcome = crs_composed(h, active);
        const Rat v = obj.eval(outcome.kept);
        if (v > best_value || (v == best_value && outcome.kept < best)) {
            best = outcome.kept;
            best_value = v;
        }
    }
    return best;
}

}  // namespace pandora
