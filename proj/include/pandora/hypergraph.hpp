#pragma once

#include <functional>
#include <vector>

#include "pandora/indices.hpp"
#include "pandora/instance.hpp"

namespace pandora {

// Hyperedge e(i, j): box vertex i on the left, the consecutive slot block
// [start .. span_end] = [j .. j + p_i] on the right. Carries the slot's
// cost, reservation value and capped-value law so downstream stages never
// go back to the instance.
struct HyperEdge {
    int box = 0;
    int start = 0;
    int span_end = 0;
    Rat cost;
    Rat r;
    DiscreteDistribution y_law;

    int span_length() const { return span_end - start + 1; }
};

// Matchings are sets of pairwise disjoint edges, handled as sorted vectors
// of edge ids into BlockHypergraph::edges.
using Matching = std::vector<int>;

struct BlockHypergraph {
    int left_count = 0;   // n
    int right_count = 0;  // H_ext = H + max_i p_i, so every e(i,j), j <= H, fits
    std::vector<HyperEdge> edges;

    const HyperEdge& edge(int id) const;
};

// One edge per (i, j) with the cost present, ordered by (i, j). Edges at
// ABSENT slots are not materialized.
BlockHypergraph build_hypergraph(const Instance& instance);

bool edges_disjoint(const HyperEdge& a, const HyperEdge& b);

// True iff the edges are pairwise disjoint. Unknown ids are a structural error.
bool is_matching(const BlockHypergraph& h, const std::vector<int>& edge_ids);

// Visits every matching with at most max_edges edges exactly once (the empty
// matching included). Guarded at 40 ground-set edges.
void for_each_matching(const BlockHypergraph& h, int max_edges,
                       const std::function<void(const Matching&)>& visit);

std::vector<Matching> enumerate_matchings(const BlockHypergraph& h, int max_edges);

// Membership test for the proxy constraint family F: the tuple's edges form
// a matching and their start slots strictly increase. Prefix-closed by
// construction.
bool proxy_feasible_prefix(const BlockHypergraph& h, const std::vector<int>& ordered_edge_ids);

// d(P) = min_row b_row / sum of row coefficients = 1 / (largest row size).
// Returns 1 for an edgeless hypergraph.
Rat polytope_density(const BlockHypergraph& h);

}  // namespace pandora
