#pragma once

#include <gmpxx.h>

#include <string>

#include "pandora/errors.hpp"

namespace pandora {

// Exact rational scalar used for all probabilities, values and costs.
using Rat = mpq_class;

// Parses "n" or "n/d" (optionally signed). Throws StructuralError on junk.
Rat rat_from_string(const std::string& s);

// Canonical "n" or "n/d" form; round-trips through rat_from_string.
std::string rat_to_string(const Rat& q);

inline double rat_to_double(const Rat& q) { return q.get_d(); }

// q^k for k >= 0, exact.
Rat rat_pow(const Rat& q, unsigned long k);

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// mpq_class(num, den) does not reduce the fraction, and GMP comparisons
// assume canonical form; route every num/den construction through this.
inline Rat make_rat(long num, long den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

}  // namespace pandora
