#pragma once

#include <utility>
#include <vector>

#include "pandora/hypergraph.hpp"

namespace pandora {

// f(M) = E[max_{e in M} Y_e], the Submodular Block Matching objective.
// Defined on all subsets of the ground set, not only matchings.
class SubmodularObjective {
  public:
    explicit SubmodularObjective(const BlockHypergraph& h) : h_(&h) {}

    const BlockHypergraph& hypergraph() const { return *h_; }

    // Exact f over a set of edge ids.
    Rat eval(const std::vector<int>& edge_ids) const;

    // Exact multilinear extension F(x); agrees with eval on 0/1 vectors.
    Rat multilinear(const std::vector<Rat>& x) const;

    // Exact partial derivative: F(x; x_e <- 1) - F(x; x_e <- 0).
    Rat multilinear_marginal(const std::vector<Rat>& x, int edge) const;

    // Double-precision F(x) for solver marginals.
    double multilinear_double(const std::vector<double>& x) const;

  private:
    const BlockHypergraph* h_;
};

struct FractionalSolution {
    std::vector<Rat> x;  // one entry per edge id
    Rat b;               // x lies in b * P
};

enum class LpMode { ExactLp, GreedyDirection };

struct SolverConfig {
    Rat b = Rat(5227, 10000);
    int mcg_steps = 100;
    LpMode lp_mode = LpMode::ExactLp;
    int rounding_repeats = 50;
    double epsilon = 0.5;  // local-search knob; the search threshold uses epsilon/4

    void check() const;
};

// A point of P maximizing <weights, .>. ExactLp solves the two-family LP
// with the exact simplex; GreedyDirection returns the indicator of the
// greedy maximal matching by descending weight (heuristic fallback).
std::vector<Rat> lp_max_direction(const BlockHypergraph& h, const std::vector<Rat>& weights,
                                  LpMode mode = LpMode::ExactLp);

// Measured continuous greedy over bP: T steps of size b/T, direction from
// lp_max_direction on the marginal weights F(x; x_e <- 1) - F(x), update
// x_e += (b/T) d_e (1 - x_e). The iterate stays exactly rational, so the
// bP membership check is exact.
FractionalSolution measured_continuous_greedy(const SubmodularObjective& obj, const BlockHypergraph& h,
                                              const SolverConfig& config);

// Exact argmax of f over all matchings, via enumeration (40-edge guard).
// Ties prefer the lexicographically smallest id vector.
std::pair<Matching, Rat> brute_force_best_matching(const SubmodularObjective& obj, const BlockHypergraph& h);

// Local search for the unit-span (bipartite graph) case: moves are
// {add one edge, swap one out / up to two in}, accepted when the value
// improves by a factor (1 + epsilon/|E|). Requires every span length 1.
Matching local_search_bipartite(const SubmodularObjective& obj, const BlockHypergraph& h, double epsilon);

// Greedy feasible insertion by descending marginal value; cheap matching
// candidate used alongside rounding.
Matching greedy_matching(const SubmodularObjective& obj, const BlockHypergraph& h);

// Exact x in bP check over both inequality families.
bool in_scaled_polytope(const BlockHypergraph& h, const std::vector<Rat>& x, const Rat& b);

}  // namespace pandora
