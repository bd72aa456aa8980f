#include "pandora/simplex.hpp"

#include "pandora/errors.hpp"

namespace pandora {

LpResult simplex_max(const std::vector<std::vector<Rat>>& A, const std::vector<Rat>& b,
                     const std::vector<Rat>& c) {
    const std::size_t m = A.size();
    const std::size_t n = c.size();
    if (b.size() != m) throw StructuralError("simplex: |b| must match the number of rows");
    for (const auto& row : A)
        if (row.size() != n) throw StructuralError("simplex: row width must match |c|");
    for (const auto& bi : b)
        if (bi < 0) throw StructuralError("simplex: negative right-hand side (phase 1 not supported)");

    // Tableau: columns [vars | slacks | rhs], last row is the objective.
    const std::size_t cols = n + m + 1;
    std::vector<std::vector<Rat>> d(m + 1, std::vector<Rat>(cols, Rat(0)));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) d[i][j] = A[i][j];
        d[i][n + i] = 1;
        d[i][cols - 1] = b[i];
        basis[i] = n + i;
    }
    for (std::size_t j = 0; j < n; ++j) d[m][j] = -c[j];

    while (true) {
        // Bland: entering = lowest-index column with a negative reduced cost.
        std::size_t enter = cols;
        for (std::size_t j = 0; j + 1 < cols; ++j) {
            if (d[m][j] < 0) {
                enter = j;
                break;
            }
        }
        if (enter == cols) break;

        // Leaving row: minimum ratio, ties broken by lowest basis variable.
        std::size_t leave = m;
        Rat best_ratio;
        for (std::size_t i = 0; i < m; ++i) {
            if (d[i][enter] <= 0) continue;
            Rat ratio = d[i][cols - 1] / d[i][enter];
            if (leave == m || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == m) throw InvariantError("simplex: unbounded program");

        const Rat pivot = d[leave][enter];
        for (auto& v : d[leave]) v /= pivot;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave || d[i][enter] == 0) continue;
            const Rat factor = d[i][enter];
            for (std::size_t j = 0; j < cols; ++j) d[i][j] -= factor * d[leave][j];
        }
        basis[leave] = enter;
    }

    LpResult out;
    out.x.assign(n, Rat(0));
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) out.x[basis[i]] = d[i][cols - 1];
    out.objective = d[m][cols - 1];
    return out;
}

}  // namespace pandora
