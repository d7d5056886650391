#pragma once

#include <vector>

#include "cww/interval.hpp"
#include "cww/rational.hpp"

namespace cww {

// Value-iteration table of certified lower bounds for the tail supremum B.
// Row k holds B_k at every grid x; every entry is a valid lower bound for B
// because the recursion only ever under-approximates:
//   - thresholds X(x, ±tau) are rounded UP (rational upper bound of the
//     enclosure) before lookup,
//   - lookups use the step-function lower interpolation: the table value at
//     the next grid point to the RIGHT, 0 beyond the last (B is
//     non-increasing).
// B_0(x) = 1 for x <= 0 and 0 otherwise; containing tau = 0 in the grid makes
// rows non-decreasing in depth.
struct DpGrid {
    unsigned depth = 0;
    std::vector<Rational> xs;    // strictly increasing, first entry 0
    std::vector<Rational> taus;  // inside (-1, 1)
    std::vector<std::vector<Rational>> table;  // table[k][i] = B_k(xs[i])
};

// xs = `inner` uniform points on [0, hi] followed by `extension` geometric
// points on (hi, reach]; the extension keeps thresholds above hi from being
// truncated to 0 immediately.
std::vector<Rational> dp_xgrid(std::size_t inner, const Rational& hi,
                               std::size_t extension = 32, const Rational& reach = Rational(4));
// k/denominator for k = 0..count-1 (tau = 0 included).
std::vector<Rational> dp_taugrid(std::size_t count);

// Fills table rows 0..depth. OpenMP kernel over grid columns; bit-identical
// to dp_oracle_serial (kept as the reference implementation).
DpGrid dp_oracle(DpGrid grid, Precision p = Precision{64});
DpGrid dp_oracle_serial(DpGrid grid, Precision p = Precision{64});

// Step lower interpolation used by the recursion (exposed for tests).
Rational dp_lookup(const std::vector<Rational>& xs, const std::vector<Rational>& row,
                   const Rational& u);

} // namespace cww
