#include "cww/dpgrid.hpp"

#include <algorithm>

#include "cww/parallel.hpp"

namespace cww {

std::vector<Rational> dp_xgrid(std::size_t inner, const Rational& hi, std::size_t extension,
                               const Rational& reach) {
    if (inner < 2) throw DomainError("dp_xgrid: need at least two inner points");
    std::vector<Rational> xs;
    for (std::size_t i = 0; i < inner; ++i)
        xs.push_back(hi * Rational(static_cast<long>(i)) /
                     Rational(static_cast<long>(inner - 1)));
    // Geometric-ish extension: uniform in sqrt scale between hi and reach.
    for (std::size_t j = 1; j <= extension; ++j) {
        const Rational f = Rational(static_cast<long>(j)) / Rational(static_cast<long>(extension));
        xs.push_back(hi + (reach - hi) * f * f);
    }
    return xs;
}

std::vector<Rational> dp_taugrid(std::size_t count) {
    std::vector<Rational> taus;
    for (std::size_t k = 0; k < count; ++k)
        taus.push_back(Rational(static_cast<long>(k), static_cast<unsigned long>(count)));
    return taus;
}

Rational dp_lookup(const std::vector<Rational>& xs, const std::vector<Rational>& row,
                   const Rational& u) {
    auto it = std::lower_bound(xs.begin(), xs.end(), u);  // first x >= u
    if (it == xs.end()) return Rational(0);
    return row[static_cast<std::size_t>(it - xs.begin())];
}

namespace {

struct TauData {
    Rational tau;
    Rational inv_lo, inv_hi;  // enclosure of 1/sqrt(1 - tau^2)
};

// Certified rational UPPER bound of X(x, tau) = (x + tau)/sqrt(1 - tau^2).
Rational x_upper(const Rational& x, const TauData& td, bool negate_tau) {
    const Rational num = negate_tau ? x - td.tau : x + td.tau;
    return num.sign() >= 0 ? num * td.inv_hi : num * td.inv_lo;
}

std::vector<TauData> prepare_taus(const std::vector<Rational>& taus, Precision p) {
    std::vector<TauData> out;
    out.reserve(taus.size());
    for (const auto& tau : taus) {
        if (!(tau.abs() < Rational(1))) throw DomainError("dp_oracle: tau outside (-1,1)");
        const RatInterval s = sqrt_enclosure(
            RatInterval::point(Rational(1) - tau * tau), Precision{p.bits});
        if (s.lo().sign() <= 0) throw DomainError("dp_oracle: tau too close to 1 for precision");
        out.push_back({tau, s.hi().inverse(), s.lo().inverse()});
    }
    return out;
}

Rational cell_value(const DpGrid& g, const std::vector<Rational>& prev,
                    const std::vector<TauData>& taus, std::size_t i) {
    Rational best(0);
    for (const auto& td : taus) {
        const Rational lo_branch = dp_lookup(g.xs, prev, x_upper(g.xs[i], td, true));
        const Rational hi_branch = dp_lookup(g.xs, prev, x_upper(g.xs[i], td, false));
        const Rational v = (lo_branch + hi_branch) / Rational(2);
        if (v > best) best = v;
    }
    return best;
}

DpGrid run(DpGrid g, Precision p, bool parallel) {
    if (g.xs.empty() || g.xs.front() != Rational(0))
        throw DomainError("dp_oracle: x-grid must start at 0");
    if (!std::is_sorted(g.xs.begin(), g.xs.end()))
        throw DomainError("dp_oracle: x-grid must be sorted");
    const auto taus = prepare_taus(g.taus, p);

    g.table.assign(g.depth + 1, std::vector<Rational>(g.xs.size(), Rational(0)));
    for (std::size_t i = 0; i < g.xs.size(); ++i)
        g.table[0][i] = (g.xs[i].sign() <= 0) ? Rational(1) : Rational(0);

    for (unsigned k = 1; k <= g.depth; ++k) {
        const auto& prev = g.table[k - 1];
        auto& row = g.table[k];
        if (parallel) {
#pragma omp parallel for schedule(dynamic, 4)
            for (long i = 0; i < static_cast<long>(g.xs.size()); ++i)
                row[static_cast<std::size_t>(i)] =
                    cell_value(g, prev, taus, static_cast<std::size_t>(i));
        } else {
            for (std::size_t i = 0; i < g.xs.size(); ++i) row[i] = cell_value(g, prev, taus, i);
        }
    }
    return g;
}

} // namespace

DpGrid dp_oracle(DpGrid grid, Precision p) { return run(std::move(grid), p, parallel_enabled()); }

DpGrid dp_oracle_serial(DpGrid grid, Precision p) { return run(std::move(grid), p, false); }

} // namespace cww
