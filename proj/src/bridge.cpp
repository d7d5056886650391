#include "cww/bridge.hpp"

#include "cww/parallel.hpp"

#include <algorithm>
#include <exception>

namespace cww {

namespace {

Rational two_pow_neg(unsigned bits) { return Rational::pow2(-static_cast<long>(bits)); }

} // namespace

RatInterval nonlinear_mean(const RatInterval& a, const RatInterval& b, Precision p) {
    const Rational input_slack = (a.width() + b.width()) * Rational(2);
    const Rational target = two_pow_neg(p.bits) + input_slack;
    for (unsigned bits = p.bits + 8;; bits *= 2) {
        const RatInterval num = a + b;
        const RatInterval den =
            sqrt_enclosure(RatInterval::point(Rational(4)) + (a - b).square(), Precision{bits});
        const RatInterval m = num / den;  // den >= 2 > 0
        if (m.width() <= target || bits > 16 * (p.bits + 64)) return m;
    }
}

RatInterval x_map(const RatInterval& x, const RatInterval& tau, Precision p) {
    if (!(tau.hi() < Rational(1) && tau.lo() > Rational(-1)))
        throw DomainError("x_map: tau not certified inside (-1,1): " + tau.to_string());
    const Rational input_slack = (x.width() + tau.width()) * Rational(4);
    const Rational target = two_pow_neg(p.bits) + input_slack;
    for (unsigned bits = p.bits + 8;; bits *= 2) {
        const RatInterval s =
            sqrt_enclosure(RatInterval::point(Rational(1)) - tau.square(), Precision{bits});
        if (s.lo().sign() <= 0) continue;  // refine until 1 - tau^2 bounded away from 0
        const RatInterval r = (x + tau) / s;
        if (r.width() <= target || bits > 16 * (p.bits + 64)) return r;
    }
}

TriplePoint make_triple(const Rational& x_minus, const Rational& x_plus, Precision p) {
    TriplePoint tp;
    tp.x_minus = RatInterval::point(x_minus);
    tp.x_plus = RatInterval::point(x_plus);
    tp.x = nonlinear_mean(tp.x_minus, tp.x_plus, p);
    const Rational d = x_plus - x_minus;
    const RatInterval den = sqrt_enclosure(
        RatInterval::point(Rational(4) + d * d), Precision{p.bits + 8});
    tp.tau = RatInterval::point(d) / den;
    return tp;
}

// ---------------------------------------------------------------------------
// BridgeCache

const RatInterval& BridgeCache::rec(Snapshot& snap, unsigned level, const mpz_class& k) const {
    // Normalize to lowest terms.
    mpz_class kk = k;
    unsigned lv = level;
    while (lv > 0 && mpz_even_p(kk.get_mpz_t())) {
        kk /= 2;
        --lv;
    }
    const Key key{lv, kk};
    if (auto it = snap.memo.find(key); it != snap.memo.end()) return it->second;

    RatInterval v;
    if (lv == 0) {
        v = RatInterval::point(Rational(0));  // t = 0 (k must be 0 inside [0,1/2])
    } else if (lv == 1) {
        v = RatInterval::point(Rational(1));  // t = 1/2
    } else {
        const RatInterval& left = rec(snap, lv, kk - 1);
        const RatInterval& right = rec(snap, lv, kk + 1);
        v = nonlinear_mean(left, right, Precision{snap.bits});
        // Deep recursions would otherwise accumulate endpoint size linearly
        // per level; outward coarsening keeps enclosure soundness.
        v = v.coarsen(snap.bits);
    }
    return snap.memo.emplace(key, std::move(v)).first->second;
}

RatInterval BridgeCache::value_at_bits(const DyadicRational& t, unsigned bits) const {
    // Exclusive snapshot extension; the copy is made under the lock so
    // concurrent callers never observe a partially built entry.
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = snaps_[bits];
    if (!slot) slot = std::make_shared<Snapshot>(Snapshot{bits, {}});
    return rec(*slot, t.level(), t.k());
}

RatInterval BridgeCache::value(const DyadicRational& t, Precision p) const {
    if (!t.in_unit_half()) throw DomainError("bridge value outside [0, 1/2]: " + t.to_string());
    const Rational target = two_pow_neg(p.bits);
    for (unsigned bits = p.bits + 2 * t.level() + 8;; bits *= 2) {
        const RatInterval v = value_at_bits(t, bits);
        if (v.width() <= target) return v;
        if (bits > 64 * (p.bits + 2 * t.level() + 64))
            throw InconclusiveError("bridge enclosure did not reach width target at " +
                                    t.to_string());
    }
}

std::vector<RatInterval> BridgeCache::level_values(unsigned n, Precision p) const {
    std::vector<RatInterval> out;
    for (const auto& t : grid_points(n)) out.push_back(value(t, p));
    return out;
}

std::vector<RatInterval> BridgeCache::separated_level_values(unsigned n, Precision p) const {
    for (unsigned bits = p.bits;; bits *= 2) {
        std::vector<RatInterval> vals = level_values(n, Precision{bits});
        bool ok = true;
        for (std::size_t i = 0; i + 1 < vals.size() && ok; ++i)
            ok = vals[i].hi() < vals[i + 1].lo();
        if (ok) return vals;
        if (bits >= cap_bits_)
            throw InconclusiveError("could not separate neighboring bridge enclosures at level " +
                                    std::to_string(n));
    }
}

RatInterval BridgeCache::tau_at(const DyadicRational& t, Precision p) const {
    if (t.is_zero() || t.level() < 2)
        throw DomainError("tau_at: no defining triple at " + t.to_string());
    const RatInterval lo = value(t.left_parent(), p);
    const RatInterval hi = value(t.right_parent(), p);
    const RatInterval d = hi - lo;
    const RatInterval den = sqrt_enclosure(RatInterval::point(Rational(4)) + d.square(),
                                           Precision{p.bits + 8});
    return d / den;
}

RatInterval bridge_value(const DyadicRational& t, Precision p, const BridgeCache& cache) {
    return cache.value(t, p);
}

std::pair<DyadicRational, DyadicRational> bridge_inverse(const Rational& x,
                                                         const DyadicRational& tol,
                                                         const BridgeCache& cache) {
    if (x < Rational(0) || x > Rational(1))
        throw DomainError("bridge_inverse: x outside [0,1]");
    if (x == Rational(0)) return {DyadicRational(0, 0), DyadicRational(0, 0)};
    if (x == Rational(1)) return {DyadicRational(1, 1), DyadicRational(1, 1)};

    DyadicRational t_lo(0, 0), t_hi(1, 1);
    const Rational tol_r = tol.to_rational();
    while (t_hi.to_rational() - t_lo.to_rational() > tol_r) {
        const DyadicRational mid = t_lo.midpoint_with(t_hi);
        const Ordering cmp = sign_with_refinement(
            [&](unsigned bits) {
                return cache.value(mid, Precision{bits}) - RatInterval::point(x);
            },
            kDefaultPrecisionBits, cache.cap_bits(),
            "A(" + mid.to_string() + ") vs " + x.to_string());
        if (cmp == Ordering::Greater)
            t_hi = mid;  // A(mid) > x
        else
            t_lo = mid;
    }
    return {t_lo, t_hi};
}

RatInterval big_b(const Rational& x, Precision p, const BridgeCache& cache) {
    if (x > Rational(1))
        throw BellmanDomainError("B is only computed on (-inf, 1]; for x > 1 only the bound "
                                 "1/(1+x^2) is available",
                                 tilde_b(x));
    if (x.sign() <= 0) return RatInterval::point(Rational(1));
    const auto [t_lo, t_hi] = bridge_inverse(x, DyadicRational(1, p.bits), cache);
    return RatInterval(Rational(1) - t_hi.to_rational(), Rational(1) - t_lo.to_rational());
}

RatInterval big_b_interval(const RatInterval& x, Precision p, const BridgeCache& cache) {
    if (x.hi() > Rational(1))
        throw BellmanDomainError("B enclosure requested beyond x = 1", tilde_b(x.hi()));
    const RatInterval upper = big_b(std::max(x.lo(), Rational(0)), p, cache);
    const RatInterval lower = big_b(std::max(x.hi(), Rational(0)), p, cache);
    return RatInterval(lower.lo(), upper.hi());
}

Rational tilde_b(const Rational& x) {
    if (x.sign() <= 0) return Rational(1);
    return Rational(1) / (Rational(1) + x * x);
}

RatInterval tilde_b_interval(const RatInterval& x) {
    return RatInterval(tilde_b(x.hi()), tilde_b(x.lo()));
}

TripleCheck check_bellman_triple_tilde(const Rational& x_minus, const Rational& x_plus) {
    if (x_minus.sign() < 0 || x_plus.sign() < 0)
        throw DomainError("check_bellman_triple_tilde: arguments must be non-negative");
    // x = M[x_-, x_+] has rational square, so everything here is exact.
    const Rational d = x_plus - x_minus;
    const Rational s = x_plus + x_minus;
    const Rational x_sq = (s * s) / (Rational(4) + d * d);
    const Rational lhs = Rational(1) / (Rational(1) + x_sq);
    const Rational rhs = (tilde_b(x_minus) + tilde_b(x_plus)) / Rational(2);
    if (lhs >= rhs) return TripleCheck::Holds;
    return TripleCheck::Violated;
}

TripleCheck check_bellman_triple(const BellmanEvaluator& b, const Rational& x_minus,
                                 const Rational& x_plus, Precision p, unsigned cap_bits) {
    if (x_minus == x_plus) return TripleCheck::Holds;  // x = x_pm, equality by definition
    for (unsigned bits = p.bits; bits <= cap_bits; bits *= 2) {
        const RatInterval x = nonlinear_mean(RatInterval::point(x_minus),
                                             RatInterval::point(x_plus), Precision{bits});
        const RatInterval lhs = b(x, Precision{bits});
        const RatInterval rhs =
            (b(RatInterval::point(x_minus), Precision{bits}) +
             b(RatInterval::point(x_plus), Precision{bits})) *
            RatInterval::point(Rational(1, 2));
        const Ordering cmp = compare_strict(lhs, rhs);
        if (cmp == Ordering::Greater) return TripleCheck::Holds;
        if (cmp == Ordering::Less) return TripleCheck::Violated;
    }
    return TripleCheck::Inconclusive;
}

TripleCheck check_ratio_monotone(unsigned n, Precision p, const BridgeCache& cache) {
    if (n == 0) throw DomainError("check_ratio_monotone: level must be >= 1");
    const auto pts = grid_points(n);
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const Rational t = pts[i].to_rational();
        const Rational t_next = pts[i + 1].to_rational();
        // A(t)/t <= A(t')/t'  <=>  A(t) t' - A(t') t <= 0 (strict away from ties)
        try {
            const Ordering cmp = sign_with_refinement(
                [&](unsigned bits) {
                    const RatInterval a = cache.value(pts[i], Precision{bits});
                    const RatInterval b = cache.value(pts[i + 1], Precision{bits});
                    return RatInterval::point(t_next) * a - RatInterval::point(t) * b;
                },
                p.bits, cache.cap_bits(), "ratio at " + pts[i].to_string());
            if (cmp == Ordering::Greater) return TripleCheck::Violated;
        } catch (const InconclusiveError&) {
            return TripleCheck::Inconclusive;
        }
    }
    return TripleCheck::Holds;
}

std::size_t audit_upper_bound_2t(unsigned n, Precision p, const BridgeCache& cache) {
    const auto pts = grid_points(n);
    const auto vals = cache.level_values(n, p);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Rational bound = Rational(2) * pts[i].to_rational();
        if (!(vals[i].lo() <= bound))  // endpoints attain equality, interior is strict
            throw std::logic_error("A(t) <= 2t violated at " + pts[i].to_string());
        if (vals[i].hi() > bound) {
            // Enclosure pokes above the bound: certify strictly below with refinement.
            const Ordering cmp = sign_with_refinement(
                [&](unsigned bits) {
                    return cache.value(pts[i], Precision{bits}) - RatInterval::point(bound);
                },
                p.bits, cache.cap_bits(), "A(t) vs 2t at " + pts[i].to_string());
            if (cmp == Ordering::Greater)
                throw std::logic_error("A(t) <= 2t violated at " + pts[i].to_string());
        }
    }
    return pts.size();
}

std::size_t audit_neighbor_bound(unsigned n, Precision p, const BridgeCache& cache) {
    if (n == 0) return 0;
    const auto vals = cache.level_values(n, p);
    const Rational bound = Rational(3, 4).pow(n - 1);
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        const Rational diff_hi = vals[i + 1].hi() - vals[i].lo();
        if (diff_hi > bound) {
            const auto pts = grid_points(n);
            const Ordering cmp = sign_with_refinement(
                [&](unsigned bits) {
                    return cache.value(pts[i + 1], Precision{bits}) -
                           cache.value(pts[i], Precision{bits}) - RatInterval::point(bound);
                },
                p.bits, cache.cap_bits(), "neighbor bound at index " + std::to_string(i));
            if (cmp == Ordering::Greater)
                throw std::logic_error("neighbor difference bound violated at level " +
                                       std::to_string(n));
        }
    }
    return vals.size() - 1;
}

std::size_t audit_strict_monotone(unsigned n, Precision p, const BridgeCache& cache) {
    const auto vals = cache.separated_level_values(n, p);
    return vals.size() - 1;
}

std::size_t audit_midpoint_inequality(unsigned n, Precision p, const BridgeCache& cache) {
    const auto pts = grid_points(n);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i; j < pts.size(); ++j) pairs.emplace_back(i, j);

    // Warm the snapshot serially so the parallel loop mostly reads memoized
    // values; midpoints live one level deeper.
    cache.level_values(n + 1, p);

    std::exception_ptr first_error;
    const bool parallel = parallel_enabled();
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
    for (long idx = 0; idx < static_cast<long>(pairs.size()); ++idx) {
        const auto [i, j] = pairs[static_cast<std::size_t>(idx)];
        if (i == j) continue;  // A(s) >= M[A(s), A(s)], equality
        const DyadicRational mid = pts[i].midpoint_with(pts[j]);
        // Defining pair: A(mid) literally is M[A(s), A(t)].
        if (mid.level() >= 2 && mid.left_parent() == pts[i] && mid.right_parent() == pts[j])
            continue;
        try {
            const Ordering cmp = sign_with_refinement(
                [&](unsigned bits) {
                    const RatInterval m =
                        nonlinear_mean(cache.value(pts[i], Precision{bits}),
                                       cache.value(pts[j], Precision{bits}), Precision{bits});
                    return cache.value(mid, Precision{bits}) - m;
                },
                p.bits, cache.cap_bits(),
                "midpoint inequality at (" + pts[i].to_string() + ", " + pts[j].to_string() + ")");
            if (cmp == Ordering::Less)
                throw std::logic_error("midpoint inequality violated at (" + pts[i].to_string() +
                                       ", " + pts[j].to_string() + ")");
        } catch (...) {
#pragma omp critical
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return pairs.size();
}

} // namespace cww
