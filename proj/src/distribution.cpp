#include "pandora/distribution.hpp"

#include <algorithm>

#include "pandora/errors.hpp"

namespace pandora {

DiscreteDistribution::DiscreteDistribution() : DiscreteDistribution({{Rat(0), Rat(1)}}) {}

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
    Rat total(0);
    for (auto& a : atoms) {
        if (a.value < 0) throw StructuralError("distribution: negative support value " + rat_to_string(a.value));
        if (a.prob < 0 || a.prob > 1)
            throw StructuralError("distribution: probability out of [0,1]: " + rat_to_string(a.prob));
        if (a.prob == 0) continue;
        total += a.prob;
        if (!atoms_.empty() && atoms_.back().value == a.value) {
            atoms_.back().prob += a.prob;
        } else {
            atoms_.push_back(a);
        }
    }
    if (total != 1)
        throw StructuralError("distribution: probabilities sum to " + rat_to_string(total) + ", expected 1");
}

DiscreteDistribution DiscreteDistribution::point(const Rat& value) {
    return DiscreteDistribution({{value, Rat(1)}});
}

Rat DiscreteDistribution::expectation() const {
    Rat e(0);
    for (const auto& a : atoms_) e += a.value * a.prob;
    return e;
}

Rat DiscreteDistribution::expected_excess(const Rat& r) const {
    Rat e(0);
    for (const auto& a : atoms_)
        if (a.value > r) e += a.prob * (a.value - r);
    return e;
}

std::size_t DiscreteDistribution::sample_index(Rng& rng) const {
    if (atoms_.size() == 1) return 0;
    const Rat u = rng.unit_rat();
    Rat cum(0);
    for (std::size_t k = 0; k + 1 < atoms_.size(); ++k) {
        cum += atoms_[k].prob;
        if (u < cum) return k;
    }
    return atoms_.size() - 1;
}

bool DiscreteDistribution::operator==(const DiscreteDistribution& other) const {
    if (atoms_.size() != other.atoms_.size()) return false;
    for (std::size_t k = 0; k < atoms_.size(); ++k)
        if (atoms_[k].value != other.atoms_[k].value || atoms_[k].prob != other.atoms_[k].prob) return false;
    return true;
}

DiscreteDistribution capped(const DiscreteDistribution& dist, const Rat& cap) {
    if (cap < 0) throw StructuralError("capped: negative cap " + rat_to_string(cap));
    std::vector<DiscreteDistribution::Atom> out;
    Rat mass_at_cap(0);
    for (const auto& a : dist.atoms()) {
        if (a.value < cap) {
            out.push_back(a);
        } else {
            mass_at_cap += a.prob;
        }
    }
    if (mass_at_cap > 0) out.push_back({cap, mass_at_cap});
    return DiscreteDistribution(std::move(out));
}

namespace {

// Shared sweep: Num is the arithmetic type, conv(q) converts a rational
// (support value or probability) into Num.
template <class Num, class ConvFn>
Num emax_sweep(std::span<const DiscreteDistribution> dists, std::span<const Num> probs, ConvFn conv) {
    const std::size_t k = dists.size();
    if (k == 0) return Num(0);

    std::vector<Rat> grid;
    for (const auto& d : dists)
        for (const auto& a : d.atoms()) grid.push_back(a.value);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    // cdf[e] tracks P(V_e <= current grid value) as the sweep advances.
    std::vector<Num> cdf(k, Num(0));
    std::vector<std::size_t> cursor(k, 0);

    Num g_prev(1);  // P(max < grid[0]) = prod (1 - q_e): all elements absent
    for (std::size_t e = 0; e < k; ++e) g_prev *= Num(1) - probs[e];

    Num total(0);
    for (const auto& v : grid) {
        Num g(1);
        for (std::size_t e = 0; e < k; ++e) {
            const auto& atoms = dists[e].atoms();
            while (cursor[e] < atoms.size() && atoms[cursor[e]].value <= v) {
                cdf[e] += conv(atoms[cursor[e]].prob);
                ++cursor[e];
            }
            g *= Num(1) - probs[e] * (Num(1) - cdf[e]);
        }
        total += conv(v) * (g - g_prev);
        g_prev = g;
    }
    return total;
}

}  // namespace

Rat expectation_of_max(std::span<const DiscreteDistribution> dists, std::span<const Rat> inclusion_probs) {
    if (dists.size() != inclusion_probs.size())
        throw StructuralError("expectation_of_max: length mismatch");
    for (const Rat& q : inclusion_probs)
        if (q < 0 || q > 1) throw StructuralError("expectation_of_max: inclusion probability out of [0,1]");
    return emax_sweep<Rat>(dists, inclusion_probs, [](const Rat& q) { return q; });
}

double expectation_of_max_double(std::span<const DiscreteDistribution> dists,
                                 std::span<const double> inclusion_probs) {
    if (dists.size() != inclusion_probs.size())
        throw StructuralError("expectation_of_max: length mismatch");
    return emax_sweep<double>(dists, inclusion_probs, [](const Rat& q) { return q.get_d(); });
}

}  // namespace pandora
