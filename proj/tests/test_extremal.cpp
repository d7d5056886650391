#include "doctest.h"

#include "cww/extremal.hpp"

using namespace cww;

namespace {

const Precision kP{128};

// Reference enclosures for the A(3/8) Haar display, built from certified
// square roots only: [(sqrt5-1), 2 sqrt5, 2, 4] / sqrt(26-2 sqrt5).
RatInterval ref_over_radical(const RatInterval& num, unsigned bits) {
    const RatInterval r5 = sqrt_enclosure(RatInterval::point(Rational(5)), Precision{bits});
    const RatInterval rad = sqrt_enclosure(
        RatInterval::point(Rational(26)) - RatInterval::point(Rational(2)) * r5, Precision{bits});
    return num / rad;
}

RatInterval sqrt5_iv(unsigned bits) {
    return sqrt_enclosure(RatInterval::point(Rational(5)), Precision{bits});
}

} // namespace

TEST_CASE("build_extremal: base cases and structure") {
    BridgeCache cache;
    const auto leaf = build_extremal(DyadicRational(0, 0), kP, cache);
    CHECK(leaf->kind == ExtremalTree::Kind::Leaf);
    CHECK(leaf->depth() == 0);

    const auto haar = build_extremal(DyadicRational(1, 1), kP, cache);
    CHECK(haar->kind == ExtremalTree::Kind::PureHaar);
    CHECK(haar->depth() == 1);
    CHECK(haar->to_json() == R"({"pure_haar":true})");

    const auto t38 = build_extremal(DyadicRational(3, 3), kP, cache);
    CHECK(t38->kind == ExtremalTree::Kind::Node);
    CHECK(t38->depth() == 3);
    CHECK(t38->left->kind == ExtremalTree::Kind::PureHaar);   // subtree for A(1/2)
    CHECK(t38->right->kind == ExtremalTree::Kind::Node);      // subtree for A(1/4)
    CHECK(t38->right->left->kind == ExtremalTree::Kind::PureHaar);
    CHECK(t38->right->right->kind == ExtremalTree::Kind::Leaf);

    CHECK_THROWS_AS(build_extremal(DyadicRational(5, 3), kP, cache), DomainError);
}

TEST_CASE("tail measure: the three worked examples") {
    BridgeCache cache;
    // mu{h_I >= 1} = 1/2
    const auto t12 = build_extremal(DyadicRational(1, 1), kP, cache);
    const TailResult r1 = tail_measure(t12, Threshold::at_exact(Rational(1)), kP, cache);
    CHECK(r1.measure.to_rational() == Rational(1, 2));

    // tree(1/4) at A(1/4): measure 3/4 = 1 - 1/4
    const auto t14 = build_extremal(DyadicRational(1, 2), kP, cache);
    const TailResult r2 = tail_measure(t14, Threshold::at_grid(DyadicRational(1, 2)), kP, cache);
    CHECK(r2.measure.to_rational() == Rational(3, 4));

    // tree(3/8) at A(3/8): measure exactly 5/8
    const auto t38 = build_extremal(DyadicRational(3, 3), kP, cache);
    const TailResult r3 = tail_measure(t38, Threshold::at_grid(DyadicRational(3, 3)), kP, cache);
    CHECK(r3.measure.to_rational() == Rational(5, 8));
}

TEST_CASE("tail measure: off-grid rational thresholds bracket the optimum") {
    BridgeCache cache;
    const auto t38 = build_extremal(DyadicRational(3, 3), kP, cache);
    const RatInterval a38 = cache.value(DyadicRational(3, 3), Precision{96});
    // Slightly below A(3/8): the closed tail set only grows.
    const TailResult below =
        tail_measure(t38, Threshold::at_exact(a38.lo() - Rational(1, 1000)), kP, cache);
    CHECK(below.measure.to_rational() >= Rational(5, 8));
    // Slightly above: the extremal plateau at A(3/8) drops out of the set.
    const TailResult above =
        tail_measure(t38, Threshold::at_exact(a38.hi() + Rational(1, 1000)), kP, cache);
    CHECK(above.measure.to_rational() < Rational(5, 8));
    CHECK(below.strict_margin.lo().sign() >= 0);
}

TEST_CASE("tail measure: exact equality at an algebraic leaf is indeterminate") {
    BridgeCache cache(512);  // low cap to keep the failure quick
    const auto t14 = build_extremal(DyadicRational(1, 2), kP, cache);
    // Threshold = the positive leaf value tau = 1/sqrt5 itself, as an
    // enclosure the recursion cannot split.
    const RatInterval tau = cache.tau_at(DyadicRational(1, 2), Precision{64});
    CHECK_THROWS_AS(tail_measure(t14, Threshold::at_enclosure(tau), kP, cache),
                    IndeterminateError);
}

TEST_CASE("optimality on D6: measure = 1 - t exactly, square function <= 1") {
    BridgeCache cache;
    for (const auto& t : grid_points(6)) {
        const auto tree = build_extremal(t, kP, cache);
        if (t.is_zero()) {
            const TailResult r = tail_measure(tree, Threshold::at_grid(t), kP, cache);
            CHECK(r.measure.to_rational() == Rational(1));
            continue;
        }
        const TailResult r = tail_measure(tree, Threshold::at_grid(t), kP, cache);
        CHECK(r.measure.to_rational() == Rational(1) - t.to_rational());
        const RatInterval sq = square_function_sup(tree, kP, cache);
        CHECK(sq.hi() <= Rational(1));
    }
}

TEST_CASE("square function: leaf report for the A(3/8) tree") {
    BridgeCache cache;
    const auto leaf0 = build_extremal(DyadicRational(0, 0), kP, cache);
    CHECK(square_function_sup(leaf0, kP, cache) == RatInterval::point(Rational(0)));

    const auto t12 = build_extremal(DyadicRational(1, 1), kP, cache);
    CHECK(square_function_sup(t12, kP, cache) == RatInterval::point(Rational(1)));

    const auto t38 = build_extremal(DyadicRational(3, 3), kP, cache);
    const auto leaves = square_function_leaves(t38, kP, cache);
    REQUIRE(leaves.size() == 3);
    // (Sf)^2 = 1 exactly on I_- and I_+-, strictly below 1 on I_++.
    bool minus_one = false, plusminus_one = false, plusplus_below = false;
    for (const auto& l : leaves) {
        if (l.address == "-") minus_one = l.exactly_one;
        if (l.address == "+-") plusminus_one = l.exactly_one;
        if (l.address == "++") plusplus_below = !l.exactly_one && l.value.hi() < Rational(1);
    }
    CHECK(minus_one);
    CHECK(plusminus_one);
    CHECK(plusplus_below);
    CHECK(square_function_sup(t38, kP, cache) == RatInterval::point(Rational(1)));
}

TEST_CASE("haar coefficients of tree(3/8) match the 4-term display") {
    BridgeCache cache;
    const auto t38 = build_extremal(DyadicRational(3, 3), kP, cache);
    const auto coeffs = haar_coefficients(t38, kP, cache);
    REQUIRE(coeffs.size() == 4);
    const unsigned bits = 160;
    const RatInterval one = RatInterval::point(Rational(1));
    const auto r5 = sqrt5_iv(bits);
    CHECK(coeffs.at("").intersects(ref_over_radical(r5 - one, bits)));
    CHECK(coeffs.at("-").intersects(ref_over_radical(r5 * RatInterval::point(Rational(2)), bits)));
    CHECK(coeffs.at("+").intersects(ref_over_radical(RatInterval::point(Rational(2)), bits)));
    CHECK(coeffs.at("+-").intersects(ref_over_radical(RatInterval::point(Rational(4)), bits)));
    for (const auto& [addr, c] : coeffs) CHECK(c.width() <= Rational::pow2(-100));
}

TEST_CASE("two-value trees at t = 2^-n") {
    BridgeCache cache;
    for (unsigned n = 1; n <= 6; ++n) {
        const DyadicRational t(1, n);
        const auto tree = build_extremal(t, kP, cache);
        const auto values = leaf_values(tree, kP, cache);

        // Exactly two distinct values: sqrt(3/(4^n-1)) and sqrt(3/(4^n-1))(1-2^n).
        const mpz_class two_n = mpz_class(1) << n;
        const Rational pos_sq(mpz_class(3), two_n * two_n - 1);
        const Rational big = Rational(1) - Rational(two_n);
        Rational pos_measure(0), neg_measure(0);
        for (const auto& lv : values) {
            const RatInterval sq = lv.value.square();
            if (lv.value.lo().sign() > 0) {
                CHECK(sq.contains(pos_sq));
                pos_measure += lv.measure;
            } else {
                CHECK(sq.contains(pos_sq * big * big));
                neg_measure += lv.measure;
            }
        }
        const Rational two_pow(two_n);
        CHECK(pos_measure == Rational(1) - Rational(1) / two_pow);
        CHECK(neg_measure == Rational(1) / two_pow);

        // And the tail at A(2^-n) is exactly 1 - 2^-n.
        const TailResult r = tail_measure(tree, Threshold::at_grid(t), kP, cache);
        CHECK(r.measure.to_rational() == Rational(1) - Rational(1) / two_pow);
    }
}

TEST_CASE("tree JSON shape") {
    BridgeCache cache;
    const auto t14 = build_extremal(DyadicRational(1, 2), kP, cache);
    const std::string j = t14->to_json();
    CHECK(j.find("\"tau\"") != std::string::npos);
    CHECK(j.find("\"left\":{\"pure_haar\":true}") != std::string::npos);
    CHECK(j.find("\"right\":{\"leaf\":true}") != std::string::npos);
}

TEST_CASE("tail measure accepts point enclosures as exact thresholds") {
    BridgeCache cache;
    const auto t12 = build_extremal(DyadicRational(1, 1), kP, cache);
    // "x enclosing 1": the point interval [1,1] resolves {h_I >= 1} = 1/2.
    const TailResult r =
        tail_measure(t12, Threshold::at_enclosure(RatInterval::point(Rational(1))), kP, cache);
    CHECK(r.measure.to_rational() == Rational(1, 2));
}

TEST_CASE("tail measure is non-increasing in the threshold, leaf measures partition") {
    BridgeCache cache;
    struct Rng {
        std::uint64_t s = 99;
        std::uint64_t next() {
            s = s * 6364136223846793005ULL + 1442695040888963407ULL;
            return s >> 33;
        }
    } rng;
    for (const auto& t : grid_points(5)) {
        const auto tree = build_extremal(t, kP, cache);

        Rational total(0);
        for (const auto& lv : leaf_values(tree, kP, cache)) total += lv.measure;
        CHECK(total == Rational(1));

        Rational prev_threshold(-3);
        Rational prev_measure(2);
        for (int i = 0; i < 8; ++i) {
            // Random rational thresholds, increasing; generic rationals never
            // coincide with the algebraic leaf values.
            prev_threshold += Rational(static_cast<long>(1 + rng.next() % 997), 997);
            const TailResult r =
                tail_measure(tree, Threshold::at_exact(prev_threshold), kP, cache);
            CHECK(r.measure.to_rational() <= prev_measure);
            prev_measure = r.measure.to_rational();
            const mpz_class den = r.measure.to_rational().denominator();
            mpz_class cap = 1;
            mpz_mul_2exp(cap.get_mpz_t(), cap.get_mpz_t(), tree->depth());
            CHECK(den <= cap);
        }
    }
}
