#include "pandora/rational.hpp"

namespace pandora {

Rat rat_from_string(const std::string& s) {
    if (s.empty()) throw StructuralError("rational: empty string");
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw StructuralError("rational: cannot parse '" + s + "'");
    if (q.get_den() == 0) throw StructuralError("rational: zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

std::string rat_to_string(const Rat& q) {
    Rat c = q;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rat rat_pow(const Rat& q, unsigned long k) {
    Rat out(1);
    Rat base = q;
    while (k > 0) {
        if (k & 1) out *= base;
        base *= base;
        k >>= 1;
    }
    return out;
}

}  // namespace pandora
