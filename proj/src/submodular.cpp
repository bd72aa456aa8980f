#include "pandora/submodular.hpp"

#include <algorithm>
#include <numeric>

#include "pandora/errors.hpp"
#include "pandora/simplex.hpp"

namespace pandora {

namespace {

std::vector<DiscreteDistribution> y_laws(const BlockHypergraph& h, const std::vector<int>& edge_ids) {
    std::vector<DiscreteDistribution> laws;
    laws.reserve(edge_ids.size());
    for (int id : edge_ids) laws.push_back(h.edge(id).y_law);
    return laws;
}

std::vector<DiscreteDistribution> all_y_laws(const BlockHypergraph& h) {
    std::vector<DiscreteDistribution> laws;
    laws.reserve(h.edges.size());
    for (const auto& e : h.edges) laws.push_back(e.y_law);
    return laws;
}

// Constraint rows of P: per left vertex, sum over the box's edges <= 1;
// per right vertex, sum over edges whose span covers it <= 1. Empty rows
// are dropped.
std::vector<std::vector<Rat>> polytope_rows(const BlockHypergraph& h) {
    std::vector<std::vector<Rat>> rows;
    const std::size_t m = h.edges.size();
    for (int i = 0; i < h.left_count; ++i) {
        std::vector<Rat> row(m, Rat(0));
        bool any = false;
        for (std::size_t e = 0; e < m; ++e)
            if (h.edges[e].box == i) row[e] = 1, any = true;
        if (any) rows.push_back(std::move(row));
    }
    for (int t = 1; t <= h.right_count; ++t) {
        std::vector<Rat> row(m, Rat(0));
        bool any = false;
        for (std::size_t e = 0; e < m; ++e)
            if (h.edges[e].start <= t && t <= h.edges[e].span_end) row[e] = 1, any = true;
        if (any) rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

Rat SubmodularObjective::eval(const std::vector<int>& edge_ids) const {
    const auto laws = y_laws(*h_, edge_ids);
    const std::vector<Rat> ones(edge_ids.size(), Rat(1));
    return expectation_of_max(laws, ones);
}

Rat SubmodularObjective::multilinear(const std::vector<Rat>& x) const {
    if (x.size() != h_->edges.size()) throw StructuralError("multilinear: vector length mismatch");
    return expectation_of_max(all_y_laws(*h_), x);
}

Rat SubmodularObjective::multilinear_marginal(const std::vector<Rat>& x, int edge) const {
    if (edge < 0 || edge >= static_cast<int>(h_->edges.size()))
        throw StructuralError("multilinear_marginal: unknown edge id " + std::to_string(edge));
    std::vector<Rat> pinned = x;
    pinned[edge] = 1;
    const Rat high = multilinear(pinned);
    pinned[edge] = 0;
    return high - multilinear(pinned);
}

double SubmodularObjective::multilinear_double(const std::vector<double>& x) const {
    if (x.size() != h_->edges.size()) throw StructuralError("multilinear: vector length mismatch");
    return expectation_of_max_double(all_y_laws(*h_), x);
}

void SolverConfig::check() const {
    if (b <= 0 || b > 1) throw StructuralError("solver config: b must lie in (0, 1]");
    if (mcg_steps < 10) throw StructuralError("solver config: need at least 10 continuous-greedy steps");
    if (rounding_repeats < 1) throw StructuralError("solver config: need at least 1 rounding repeat");
    if (epsilon <= 0) throw StructuralError("solver config: epsilon must be positive");
}

std::vector<Rat> lp_max_direction(const BlockHypergraph& h, const std::vector<Rat>& weights, LpMode mode) {
    const std::size_t m = h.edges.size();
    if (weights.size() != m) throw StructuralError("lp_max_direction: weight length mismatch");
    if (m == 0) return {};

    if (mode == LpMode::GreedyDirection) {
        std::vector<int> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return weights[a] > weights[b]; });
        std::vector<Rat> x(m, Rat(0));
        Matching chosen;
        for (int id : order) {
            if (weights[id] <= 0) break;
            bool ok = true;
            for (int c : chosen)
                if (!edges_disjoint(h.edges[c], h.edges[id])) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(id);
            x[id] = 1;
        }
        return x;
    }

    const auto rows = polytope_rows(h);
    const std::vector<Rat> rhs(rows.size(), Rat(1));
    return simplex_max(rows, rhs, weights).x;
}

FractionalSolution measured_continuous_greedy(const SubmodularObjective& obj, const BlockHypergraph& h,
                                              const SolverConfig& config) {
    config.check();
    const std::size_t m = h.edges.size();
    FractionalSolution out;
    out.b = config.b;
    out.x.assign(m, Rat(0));
    if (m == 0) return out;

    const Rat step = config.b / config.mcg_steps;
    std::vector<double> xd(m, 0.0);
    for (int s = 0; s < config.mcg_steps; ++s) {
        const double base = obj.multilinear_double(xd);
        std::vector<Rat> weights(m);
        for (std::size_t e = 0; e < m; ++e) {
            const double saved = xd[e];
            xd[e] = 1.0;
            const double marginal = obj.multilinear_double(xd) - base;
            xd[e] = saved;
            weights[e] = marginal > 0 ? Rat(marginal) : Rat(0);
        }
        const auto dir = lp_max_direction(h, weights, config.lp_mode);
        for (std::size_t e = 0; e < m; ++e) {
            if (dir[e] == 0) continue;
            out.x[e] += step * dir[e] * (1 - out.x[e]);
            out.x[e].canonicalize();
            xd[e] = out.x[e].get_d();
        }
    }
    if (!in_scaled_polytope(h, out.x, out.b))
        throw InvariantError("measured_continuous_greedy: iterate left bP");
    return out;
}

std::pair<Matching, Rat> brute_force_best_matching(const SubmodularObjective& obj, const BlockHypergraph& h) {
    Matching best;
    Rat best_value(0);
    // DFS emits matchings in lexicographic id order, so keeping the first
    // strict maximum also resolves ties lexicographically.
    for_each_matching(h, static_cast<int>(h.edges.size()), [&](const Matching& m) {
        const Rat v = obj.eval(m);
        if (v > best_value) {
            best = m;
            best_value = v;
        }
    });
    return {best, best_value};
}

Matching local_search_bipartite(const SubmodularObjective& obj, const BlockHypergraph& h, double epsilon) {
    const int m = static_cast<int>(h.edges.size());
    for (const auto& e : h.edges)
        if (e.span_length() != 1)
            throw StructuralError("local_search_bipartite: requires unit-span edges (instant inspection)");
    if (m == 0) return {};
    if (epsilon <= 0) throw StructuralError("local_search_bipartite: epsilon must be positive");

    const Rat gate = Rat(1) + Rat(epsilon) / m;

    auto feasible_with = [&](const Matching& base, int skip, int add1, int add2) {
        for (std::size_t k = 0; k < base.size(); ++k) {
            if (static_cast<int>(k) == skip) continue;
            if (!edges_disjoint(h.edges[base[k]], h.edges[add1])) return false;
            if (add2 >= 0 && !edges_disjoint(h.edges[base[k]], h.edges[add2])) return false;
        }
        if (add2 >= 0 && !edges_disjoint(h.edges[add1], h.edges[add2])) return false;
        return true;
    };

    Matching current;
    Rat current_value(0);
    for (int round = 0; round < 10000; ++round) {
        // Pure additions always improve under monotonicity and are accepted
        // whenever strict; the (1 + eps/|E|) factor gate applies to swaps.
        Matching best_add, best_swap;
        Rat best_add_value = current_value;
        Rat best_swap_value = current_value;
        auto consider = [&](Matching candidate, bool is_add) {
            std::sort(candidate.begin(), candidate.end());
            const Rat v = obj.eval(candidate);
            if (is_add && v > best_add_value) {
                best_add_value = v;
                best_add = std::move(candidate);
            } else if (!is_add && v > best_swap_value) {
                best_swap_value = v;
                best_swap = std::move(candidate);
            }
        };

        for (int add = 0; add < m; ++add) {
            if (std::find(current.begin(), current.end(), add) != current.end()) continue;
            if (feasible_with(current, -1, add, -1)) {
                Matching candidate = current;
                candidate.push_back(add);
                consider(std::move(candidate), true);
            }
            for (int out = 0; out < static_cast<int>(current.size()); ++out) {
                if (!feasible_with(current, out, add, -1)) continue;
                Matching base = current;
                base.erase(base.begin() + out);
                base.push_back(add);
                consider(base, false);
                for (int add2 = add + 1; add2 < m; ++add2) {
                    if (std::find(current.begin(), current.end(), add2) != current.end()) continue;
                    if (!feasible_with(current, out, add, add2)) continue;
                    Matching candidate = base;
                    candidate.push_back(add2);
                    consider(std::move(candidate), false);
                }
            }
        }

        if (best_swap_value > current_value * gate && best_swap_value >= best_add_value) {
            current = best_swap;
            current_value = best_swap_value;
        } else if (best_add_value > current_value) {
            current = best_add;
            current_value = best_add_value;
        } else if (best_swap_value > current_value * gate) {
            current = best_swap;
            current_value = best_swap_value;
        } else {
            break;
        }
    }
    std::sort(current.begin(), current.end());
    return current;
}

Matching greedy_matching(const SubmodularObjective& obj, const BlockHypergraph& h) {
    Matching current;
    Rat current_value(0);
    while (true) {
        int best = -1;
        Rat best_value = current_value;
        for (int id = 0; id < static_cast<int>(h.edges.size()); ++id) {
            if (std::find(current.begin(), current.end(), id) != current.end()) continue;
            bool ok = true;
            for (int c : current)
                if (!edges_disjoint(h.edges[c], h.edges[id])) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            Matching candidate = current;
            candidate.push_back(id);
            const Rat v = obj.eval(candidate);
            if (v > best_value) {
                best_value = v;
                best = id;
            }
        }
        if (best < 0) break;
        current.push_back(best);
        current_value = best_value;
    }
    std::sort(current.begin(), current.end());
    return current;
}

bool in_scaled_polytope(const BlockHypergraph& h, const std::vector<Rat>& x, const Rat& b) {
    if (x.size() != h.edges.size()) throw StructuralError("in_scaled_polytope: vector length mismatch");
    for (const auto& v : x)
        if (v < 0 || v > 1) return false;
    for (const auto& row : polytope_rows(h)) {
        Rat load(0);
        for (std::size_t e = 0; e < x.size(); ++e)
            if (row[e] != 0) load += x[e];
        if (load > b) return false;
    }
    return true;
}

}  // namespace pandora
