#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "cww/rational.hpp"

namespace cww {

// Binary rational k/2^n in normalized form (k odd, or n = 0).
// The grids D_n = { k/2^n : 0 <= k <= 2^(n-1) } cover [0, 1/2].
class DyadicRational {
public:
    DyadicRational() : k_(0), n_(0) {}
    DyadicRational(mpz_class k, unsigned n) : k_(std::move(k)), n_(n) { normalize(); }

    static DyadicRational from_rational(const Rational& r);  // DomainError if not dyadic
    // Accepts "k/2^n", "p/q" with q a power of two, or an integer.
    static DyadicRational parse(const std::string& s);

    const mpz_class& k() const { return k_; }
    unsigned level() const { return n_; }  // least n with value in D_n (0 for integers)

    Rational to_rational() const;
    bool is_zero() const { return sgn(k_) == 0; }
    bool in_unit_half() const;  // 0 <= value <= 1/2
    bool member_of(unsigned n) const;  // exact membership test in D_n

    // Neighbors t ± 2^-n in D_(n-1); only defined for level >= 2 points of (0,1/2),
    // plus level 1 handled by callers. DomainError otherwise.
    DyadicRational left_parent() const;   // t - 2^-n
    DyadicRational right_parent() const;  // t + 2^-n

    DyadicRational midpoint_with(const DyadicRational& o) const;

    friend bool operator==(const DyadicRational& a, const DyadicRational& b) {
        return a.n_ == b.n_ && a.k_ == b.k_;
    }
    friend bool operator<(const DyadicRational& a, const DyadicRational& b);
    friend bool operator<=(const DyadicRational& a, const DyadicRational& b) {
        return a == b || a < b;
    }

    std::string to_string() const;  // "k/2^n" (or "k" when n = 0)

private:
    void normalize();
    mpz_class k_;
    unsigned n_;
};

// All points of D_n in increasing order (0, 1/2^n, ..., 1/2).
std::vector<DyadicRational> grid_points(unsigned n);

} // namespace cww
