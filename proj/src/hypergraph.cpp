#include "pandora/hypergraph.hpp"

#include <algorithm>

#include "pandora/errors.hpp"

namespace pandora {

const HyperEdge& BlockHypergraph::edge(int id) const {
    if (id < 0 || id >= static_cast<int>(edges.size()))
        throw StructuralError("hypergraph: unknown edge id " + std::to_string(id));
    return edges[id];
}

BlockHypergraph build_hypergraph(const Instance& instance) {
    require_valid(instance);
    BlockHypergraph h;
    h.left_count = instance.n();
    int max_p = 0;
    for (int i = 0; i < instance.n(); ++i) max_p = std::max(max_p, instance.processing(i));
    h.right_count = instance.horizon + max_p;
    for (int i = 0; i < instance.n(); ++i) {
        for (int j = 1; j <= instance.horizon; ++j) {
            const auto& cost = instance.cost_at(i, j);
            if (!cost) continue;
            const auto idx = reservation_index(i, j, instance.reward_at(i, j), *cost);
            HyperEdge e;
            e.box = i;
            e.start = j;
            e.span_end = j + instance.processing(i);
            e.cost = *cost;
            e.r = idx.r;
            e.y_law = idx.y_law;
            h.edges.push_back(std::move(e));
        }
    }
    return h;
}

bool edges_disjoint(const HyperEdge& a, const HyperEdge& b) {
    if (a.box == b.box) return false;
    return a.span_end < b.start || b.span_end < a.start;
}

bool is_matching(const BlockHypergraph& h, const std::vector<int>& edge_ids) {
    for (std::size_t i = 0; i < edge_ids.size(); ++i) {
        const HyperEdge& a = h.edge(edge_ids[i]);
        for (std::size_t j = i + 1; j < edge_ids.size(); ++j) {
            if (edge_ids[i] == edge_ids[j]) return false;
            if (!edges_disjoint(a, h.edge(edge_ids[j]))) return false;
        }
    }
    return true;
}

void for_each_matching(const BlockHypergraph& h, int max_edges,
                       const std::function<void(const Matching&)>& visit) {
    if (h.edges.size() > 40)
        throw CapacityError("for_each_matching: ground set exceeds the 40-edge guard");
    Matching current;
    // DFS over edge ids in ascending order; emits matchings in lexicographic
    // order of their sorted id vectors.
    std::function<void(int)> dfs = [&](int from) {
        visit(current);
        if (static_cast<int>(current.size()) >= max_edges) return;
        for (int id = from; id < static_cast<int>(h.edges.size()); ++id) {
            bool ok = true;
            for (int chosen : current) {
                if (!edges_disjoint(h.edges[chosen], h.edges[id])) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            current.push_back(id);
            dfs(id + 1);
            current.pop_back();
        }
    };
    dfs(0);
}

std::vector<Matching> enumerate_matchings(const BlockHypergraph& h, int max_edges) {
    std::vector<Matching> out;
    for_each_matching(h, max_edges, [&](const Matching& m) { out.push_back(m); });
    return out;
}

bool proxy_feasible_prefix(const BlockHypergraph& h, const std::vector<int>& ordered_edge_ids) {
    for (std::size_t k = 1; k < ordered_edge_ids.size(); ++k)
        if (h.edge(ordered_edge_ids[k - 1]).start >= h.edge(ordered_edge_ids[k]).start) return false;
    return is_matching(h, ordered_edge_ids);
}

Rat polytope_density(const BlockHypergraph& h) {
    std::size_t widest = 1;
    for (int i = 0; i < h.left_count; ++i) {
        std::size_t row = 0;
        for (const auto& e : h.edges)
            if (e.box == i) ++row;
        widest = std::max(widest, row);
    }
    for (int t = 1; t <= h.right_count; ++t) {
        std::size_t row = 0;
        for (const auto& e : h.edges)
            if (e.start <= t && t <= e.span_end) ++row;
        widest = std::max(widest, row);
    }
    return Rat(1, static_cast<unsigned long>(widest));
}

}  // namespace pandora
