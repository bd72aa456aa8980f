#pragma once

#include <span>
#include <vector>

#include "pandora/rational.hpp"
#include "pandora/rng.hpp"

namespace pandora {

// Finite-support law over nonnegative rational rewards. The constructor
// canonicalizes (sorts by value, merges duplicates, drops zero-probability
// atoms) and rejects anything whose probabilities do not sum to exactly 1
// or whose values are negative.
class DiscreteDistribution {
  public:
    struct Atom {
        Rat value;
        Rat prob;
    };

    // Point mass at 0.
    DiscreteDistribution();
    explicit DiscreteDistribution(std::vector<Atom> atoms);

    static DiscreteDistribution point(const Rat& value);

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    const Rat& value(std::size_t k) const { return atoms_[k].value; }
    const Rat& prob(std::size_t k) const { return atoms_[k].prob; }

    Rat expectation() const;
    const Rat& max_value() const { return atoms_.back().value; }

    // E[(V - r)^+], exact; r may be negative.
    Rat expected_excess(const Rat& r) const;

    // Index of the atom drawn with its exact probability (up to the 2^-53
    // granularity of the uniform tape).
    std::size_t sample_index(Rng& rng) const;

    bool operator==(const DiscreteDistribution& other) const;

  private:
    std::vector<Atom> atoms_;
};

// Law of min(V, cap); atoms at or above cap merge into one atom at cap.
// cap must be >= 0 so the result is a valid (nonnegative) law.
DiscreteDistribution capped(const DiscreteDistribution& dist, const Rat& cap);

// E[max of the elements independently present with the given probabilities],
// max over the empty set = 0. Exact sweep over the union support with
// complementary-CDF products P(max <= v) = prod_e (1 - q_e * P(V_e > v)).
Rat expectation_of_max(std::span<const DiscreteDistribution> dists, std::span<const Rat> inclusion_probs);

// Same sweep in double precision; used for solver marginals only.
double expectation_of_max_double(std::span<const DiscreteDistribution> dists,
                                 std::span<const double> inclusion_probs);

}  // namespace pandora
