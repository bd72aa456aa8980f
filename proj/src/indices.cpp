#include "pandora/indices.hpp"

#include "pandora/errors.hpp"

namespace pandora {

Rat reservation_tolerance() { return Rat(1, 1000000000000L); }

Rat reservation_value(const DiscreteDistribution& dist, const Rat& cost) {
    if (cost < 0) throw StructuralError("reservation_value: negative cost");
    if (cost == 0) return dist.max_value();
    const Rat ev = dist.expectation();
    // E[(V-r)^+] = E[V] - r for r <= 0, so the extension below zero is linear.
    if (cost > ev) return ev - cost;

    Rat lo = ev - cost;       // E[(V-lo)^+] >= E[V-lo] = cost
    Rat hi = dist.max_value();  // E[(V-hi)^+] = 0 <= cost
    const Rat tol = reservation_tolerance();
    Rat mid = lo;
    for (int iter = 0; iter < 200; ++iter) {
        mid = (lo + hi) / 2;
        const Rat residual = dist.expected_excess(mid) - cost;
        if (rat_abs(residual) <= tol) return mid;
        if (residual > 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return mid;
}

ReservationIndex reservation_index(int box, int time, const DiscreteDistribution& dist, const Rat& cost) {
    ReservationIndex idx;
    idx.box = box;
    idx.time = time;
    idx.r = reservation_value(dist, cost);
    idx.y_law = capped(dist, idx.r < 0 ? Rat(0) : idx.r);
    return idx;
}

Rat kleinberg_surrogate(const std::vector<SurrogateTrace>& traces,
                        const std::function<Rat(int box, int time)>& reservation_of) {
    Rat total(0);
    for (const auto& t : traces) {
        if (t.accepted < -1 || t.accepted >= static_cast<int>(t.inspected.size()))
            throw StructuralError("kleinberg_surrogate: accepted flag outside the inspected set (A > I)");
        if (t.accepted >= 0) {
            const auto& rec = t.inspected[t.accepted];
            const Rat r = reservation_of(rec.box, rec.time);
            total += t.prob * std::min(rec.value, r);
        }
    }
    return total;
}

}  // namespace pandora
