#pragma once

#include <cstdint>
#include <vector>

#include "pandora/submodular.hpp"

namespace pandora {

// R(x): each edge independently present with probability x_e, drawn from a
// per-edge tape derived from the seed. Both schemes below are deterministic
// functions of (seed, active set), which is what makes the monotonicity
// coupling checkable.
struct ActiveSet {
    std::vector<int> edges;  // sorted ids
    std::uint64_t seed = 0;
};

enum class CrsScheme { Matroid, Interval, Composed };

struct CrsOutcome {
    std::vector<int> kept;  // sorted ids, subset of the active set
    CrsScheme scheme = CrsScheme::Composed;
};

ActiveSet sample_active(const BlockHypergraph& h, const std::vector<Rat>& x, std::uint64_t seed);

// Partition-matroid scheme for the left-vertex family: per box, keep the
// active edge with the smallest priority on the per-edge tape (uniform
// among the active ones).
CrsOutcome crs_matroid(const BlockHypergraph& h, const ActiveSet& active);

// Interval scheme for the right-vertex family: keep an active edge iff no
// active edge with a strictly smaller span start (ties by edge id)
// overlaps it. Deterministic given the active set.
CrsOutcome crs_interval(const BlockHypergraph& h, const ActiveSet& active);

// Intersection of the two kept sets, independent internal randomness.
// The result is always a matching.
CrsOutcome crs_composed(const BlockHypergraph& h, const ActiveSet& active);

// Sample-then-compose `repeats` times and return the kept matching with the
// best f, ties by lexicographic matching encoding.
Matching crs_round(const SubmodularObjective& obj, const FractionalSolution& fractional, int repeats,
                   std::uint64_t seed);

// A random point of bP: raw per-edge loads in [0.2, 1] scaled so the most
// loaded constraint row sits exactly at b.
std::vector<Rat> random_point_in_scaled_polytope(const BlockHypergraph& h, const Rat& b,
                                                 std::uint64_t seed);

struct CrsAuditRow {
    int edge = 0;
    double x = 0.0;
    long kept_trials = 0;
    double empirical = 0.0;  // kept_trials / trials
    double bound = 0.0;      // c * x_e with c = e^-b (1 - e^-b) / b
    double stderr_ = 0.0;
    bool pass = false;       // empirical >= bound - 3 stderr
};

struct CrsAuditResult {
    std::vector<CrsAuditRow> rows;
    long trials = 0;
    bool all_matchings = true;  // every composed outcome passed is_matching
};

// Empirical balance audit of the composed scheme at the given point.
CrsAuditResult crs_audit(const BlockHypergraph& h, const std::vector<Rat>& x, const Rat& b, long trials,
                         std::uint64_t seed);

// Coupled subset check: A is a subsample of B sharing B's tape; an edge of A
// kept under B must be kept under A, for each scheme. Returns false on the
// first violation.
bool crs_monotonicity_coupling(const BlockHypergraph& h, const std::vector<Rat>& x, long pairs,
                               std::uint64_t seed);

}  // namespace pandora
