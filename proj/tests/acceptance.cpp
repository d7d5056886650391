// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "cww/bridge.hpp"
#include "cww/certify.hpp"
#include "cww/dpgrid.hpp"
#include "cww/extremal.hpp"
#include "cww/lineartest.hpp"

using namespace cww;

namespace {

int g_failures = 0;

void criterion(int num, const std::string& desc, bool ok) {
    std::printf("CRITERION %2d [%s] %s\n", num, ok ? "PASS" : "FAIL", desc.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool step_ok(const Certificate& c, const std::string& needle) {
    for (const auto& s : c.steps)
        if (s.desc.find(needle) != std::string::npos) return s.ok;
    return false;
}

struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return s >> 33;
    }
    Rational unit(unsigned long den = 739) {
        return Rational(static_cast<long>(next() % (den + 1)), den);
    }
};

// --- criteria 1-4: the four polynomial pipelines --------------------------

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const Certificate c = prove_mean_assoc();
    const double secs = seconds_since(t0);
    const bool ok = c.success && step_ok(c, "divide by 4(x-y)(x-z)") &&
                    step_ok(c, "P1(0,y,z) = y(y-z)^2") &&
                    step_ok(c, "P2(0,y,z) (y-z)^2 = P1(0,y,z)^2") &&
                    step_ok(c, "test on P1 - P1(0,y,z)") &&
                    step_ok(c, "test on P2 - P2(0,y,z)") &&
                    step_ok(c, "control: direct test on P1 reports failure") && secs < 300.0;
    criterion(1, "pipeline 4.3: success with controls, " + std::to_string(c.ms) + " ms", ok);
}

void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    const Certificate c = prove_merge_max();
    const double secs = seconds_since(t0);
    const bool ok = c.success && step_ok(c, "degree of P1 in u equals 8") &&
                    step_ok(c, "integer coefficients") &&
                    step_ok(c, "control: test on P3 without the y-flip reports failure") &&
                    step_ok(c, "test on P3 with y replaced by 1-y") && secs < 300.0;
    criterion(2, "pipeline 4.4: success with degree and flip controls, " +
                     std::to_string(c.ms) + " ms",
              ok);
}

void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    const Certificate c = prove_tail_ratio();
    const double secs = seconds_since(t0);
    const bool ok = c.success && step_ok(c, "y factors out of P2") &&
                    step_ok(c, "left half-cube") && step_ok(c, "right half-cube") &&
                    secs < 120.0;
    criterion(3, "pipeline 4.5: success twice on the half-cubes, " + std::to_string(c.ms) + " ms",
              ok);
}

void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    const Certificate c = prove_midpoint_step();
    const double secs = seconds_since(t0);
    const bool ok = c.success && step_ok(c, "10^20 scaling yields integer coefficients") &&
                    secs < 60.0;
    criterion(4, "pipeline 4.6: success with 10^20 integer scaling, " + std::to_string(c.ms) +
                     " ms",
              ok);
}

void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    const Certificate c = prove_level5();
    const double secs = seconds_since(t0);
    const bool ok = c.success && step_ok(c, "845 > 841") && step_ok(c, "68/140 = 17/35") &&
                    step_ok(c, "4284 > 4225") && step_ok(c, "355/1775 = 1/5") &&
                    step_ok(c, "interval cross-check") &&
                    step_ok(c, "margin enclosure meets [9.0e-4, 9.3e-4]") && secs < 1.0;
    criterion(5, "level 5 numeric chain exact + interval margin ~ 0.000912384, " +
                     std::to_string(c.ms) + " ms",
              ok);
}

void criterion_6(BridgeCache& cache) {
    bool ok = true;
    // A(1/4) contains 1/sqrt5, certified via 5 m^2 vs 1.
    const RatInterval a14 = cache.value(DyadicRational(1, 2), Precision{128});
    ok = ok && a14.lo() * a14.lo() * Rational(5) <= Rational(1) &&
         a14.hi() * a14.hi() * Rational(5) >= Rational(1);

    // A(3/8) contains (sqrt5+1)/sqrt(26-2 sqrt5).
    const RatInterval r5 = sqrt_enclosure(RatInterval::point(Rational(5)), Precision{160});
    const RatInterval ref = (r5 + RatInterval::point(Rational(1))) /
                            sqrt_enclosure(RatInterval::point(Rational(26)) -
                                               RatInterval::point(Rational(2)) * r5,
                                           Precision{160});
    const RatInterval a38 = cache.value(DyadicRational(3, 3), Precision{128});
    ok = ok && a38.intersects(ref) && a38.width() <= Rational::pow2(-128);

    // B(1) of width <= 2^-128 containing 1/2.
    const RatInterval b1 = big_b(Rational(1), Precision{128}, cache);
    ok = ok && b1.contains(Rational(1, 2)) && b1.width() <= Rational::pow2(-128);

    // All of D10 at width <= 2^-53, under 10 seconds.
    const auto t0 = std::chrono::steady_clock::now();
    BridgeCache fresh;
    const auto vals = fresh.level_values(10, Precision{53});
    const double secs = seconds_since(t0);
    bool widths_ok = vals.size() == 513;
    for (const auto& v : vals) widths_ok = widths_ok && v.width() <= Rational::pow2(-53);
    ok = ok && widths_ok && secs < 10.0;

    criterion(6, "bridge exactness: A(1/4), A(3/8), B(1), D10 table in " +
                     std::to_string(secs).substr(0, 5) + " s",
              ok);
}

void criterion_7(BridgeCache& cache) {
    const Precision p{128};
    bool ok = true;
    std::string detail;
    try {
        for (unsigned n = 1; n <= 12; ++n) audit_upper_bound_2t(n, p, cache);
        for (unsigned n = 1; n <= 12; ++n) audit_neighbor_bound(n, p, cache);
        for (unsigned n = 1; n <= 12; ++n) audit_strict_monotone(n, p, cache);
        audit_midpoint_inequality(6, p, cache);
        ok = ok && check_ratio_monotone(10, p, cache) == TripleCheck::Holds;

        // Mean properties (1),(2),(3),(5),(6) on 10^3 random rational pairs.
        Rng rng(2026);
        for (int i = 0; i < 1000 && ok; ++i) {
            const Rational a = rng.unit(), b = rng.unit();
            const RatInterval ia = RatInterval::point(a), ib = RatInterval::point(b);
            const RatInterval m = nonlinear_mean(ia, ib, p);
            ok = ok && nonlinear_mean(ia, ia, p) == ia;                       // (1)
            ok = ok && nonlinear_mean(ib, ia, p) == m;                        // (2)
            ok = ok && m.lo() <= (a + b) / Rational(2);                       // (3)
            ok = ok && (m - ia).abs().lo() <= Rational(3, 4) * (a - b).abs(); // (6)
            if (a != b) {                                                     // (5)
                const Rational lo = std::min(a, b), hi = std::max(a, b);
                const Ordering mono = sign_with_refinement(
                    [&](unsigned bits) {
                        const Precision pb{bits};
                        return nonlinear_mean(RatInterval::point(hi), ib, pb) -
                               nonlinear_mean(RatInterval::point(lo), ib, pb);
                    },
                    64, kDefaultPrecisionCap, "mean monotonicity");
                ok = ok && mono == Ordering::Greater;
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    criterion(7, "property suite: A<=2t, neighbor bound, monotone, midpoint D6, ratio D10, "
                 "mean properties" + (detail.empty() ? "" : " (" + detail + ")"),
              ok);
}

void criterion_8(BridgeCache& cache) {
    const Precision p{128};
    bool ok = true;
    std::string detail;
    try {
        for (const auto& t : grid_points(8)) {
            const auto tree = build_extremal(t, p, cache);
            const TailResult tail = tail_measure(tree, Threshold::at_grid(t), p, cache);
            ok = ok && tail.measure.to_rational() == Rational(1) - t.to_rational();
            const RatInterval sq = square_function_sup(tree, p, cache);
            ok = ok && sq.hi() <= Rational(1);
            if (!ok) {
                detail = " first failure at t = " + t.to_string();
                break;
            }
        }

        // A(3/8): Haar coefficients match the 4-term display, measure 5/8.
        const auto t38 = build_extremal(DyadicRational(3, 3), p, cache);
        ok = ok &&
             tail_measure(t38, Threshold::at_grid(DyadicRational(3, 3)), p, cache)
                     .measure.to_rational() == Rational(5, 8);
        const auto coeffs = haar_coefficients(t38, p, cache);
        const RatInterval r5 = sqrt_enclosure(RatInterval::point(Rational(5)), Precision{160});
        const RatInterval rad = sqrt_enclosure(RatInterval::point(Rational(26)) -
                                                   RatInterval::point(Rational(2)) * r5,
                                               Precision{160});
        const RatInterval one = RatInterval::point(Rational(1));
        ok = ok && coeffs.size() == 4;
        ok = ok && coeffs.at("").intersects((r5 - one) / rad);
        ok = ok && coeffs.at("-").intersects(RatInterval::point(Rational(2)) * r5 / rad);
        ok = ok && coeffs.at("+").intersects(RatInterval::point(Rational(2)) / rad);
        ok = ok && coeffs.at("+-").intersects(RatInterval::point(Rational(4)) / rad);

        // Two-value formula at t = 2^-n for n <= 6.
        for (unsigned n = 1; n <= 6 && ok; ++n) {
            const auto tree = build_extremal(DyadicRational(1, n), p, cache);
            const auto values = leaf_values(tree, p, cache);
            const mpz_class two_n = mpz_class(1) << n;
            const Rational pos_sq(mpz_class(3), two_n * two_n - 1);
            const Rational big = Rational(1) - Rational(two_n);
            for (const auto& lv : values) {
                const RatInterval sq = lv.value.square();
                if (lv.value.lo().sign() > 0)
                    ok = ok && sq.contains(pos_sq);
                else
                    ok = ok && sq.contains(pos_sq * big * big);
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    criterion(8, "extremal optimality on D8, A(3/8) Haar display, two-value trees" + detail, ok);
}

void criterion_9(BridgeCache& cache) {
    bool ok = true;
    std::string detail;
    try {
        DpGrid g;
        g.depth = 12;
        g.xs = dp_xgrid(64, Rational(9, 10), 32, Rational(4));
        g.taus = dp_taugrid(512);
        g = dp_oracle(std::move(g));

        // Monotone in depth everywhere.
        for (unsigned k = 1; k <= g.depth && ok; ++k)
            for (std::size_t i = 0; i < g.xs.size() && ok; ++i)
                ok = g.table[k][i] >= g.table[k - 1][i];
        if (!ok) detail = " (depth monotonicity)";

        // Never exceeds tilde_b anywhere, nor B's upper enclosure on [0,1].
        for (std::size_t i = 0; i < g.xs.size() && ok; ++i)
            ok = g.table[g.depth][i] <= tilde_b(g.xs[i]);
        if (!ok && detail.empty()) detail = " (tilde bound)";
        for (std::size_t i = 0; i < g.xs.size() && ok; ++i) {
            if (g.xs[i] > Rational(1)) continue;
            const RatInterval b = big_b(g.xs[i], Precision{40}, cache);
            ok = g.table[g.depth][i] <= b.hi();
        }
        if (!ok && detail.empty()) detail = " (B upper bound)";

        // Convergence smoke test: >= 0.95 (1 - A^-1(x)) on the 64 points in
        // [0, 0.9], certified against the UPPER enclosure of B.
        Rational worst(2);
        for (std::size_t i = 0; i < 64 && ok; ++i) {
            const RatInterval b = big_b(g.xs[i], Precision{40}, cache);
            const Rational ratio = g.table[g.depth][i] / b.hi();
            if (ratio < worst) worst = ratio;
            ok = g.table[g.depth][i] >= Rational(95, 100) * b.hi();
        }
        if (ok) detail = ", worst dp/B ratio " + worst.to_decimal(4);
        else if (detail.empty()) detail = " (0.95 convergence)";
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string(" (") + e.what() + ")";
    }
    criterion(9, "oracle sandwich: monotone, bounded by B and tilde_B, 0.95 convergence" + detail,
              ok);
}

void criterion_10(BridgeCache& cache) {
    bool ok = true;
    std::string detail;
    try {
        ok = ok && prove_tilde_b_supersolution().success;
        ok = ok && prove_case3_boundary().success;
        ok = ok && prove_phi_coeffs(10000).success;
        ok = ok && audit_reduction_instances(6, Precision{128}, cache).success;
        if (!ok) detail = " (auxiliary pipeline failed)";

        PipelineOptions broken;
        broken.perturb_final = true;
        const bool controls_fail =
            !prove_mean_assoc(broken).success && !prove_merge_max(broken).success &&
            !prove_tail_ratio(broken).success && !prove_midpoint_step(broken).success;
        ok = ok && controls_fail;
        if (!controls_fail) detail = " (a perturbed pipeline still passed)";
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string(" (") + e.what() + ")";
    }
    criterion(10, "auxiliary identities + reductions(6) succeed; negative controls fail" + detail,
              ok);
}

} // namespace

int main() {
    std::printf("acceptance suite (exact arithmetic, %d-bit default precision)\n",
                kDefaultPrecisionBits);
    BridgeCache cache;
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6(cache);
    criterion_7(cache);
    criterion_8(cache);
    criterion_9(cache);
    criterion_10(cache);
    if (g_failures == 0) {
        std::printf("all 10 criteria PASS\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
}
