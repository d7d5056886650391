#pragma once

#include "cww/interval.hpp"
#include "cww/rational.hpp"

namespace cww {

// Exact element a + b*sqrt(d) of a real quadratic field, d a fixed positive
// non-square integer per computation. Sign determination and comparisons are
// exact (reduce to integer inequalities), no intervals involved.
class QuadExt {
public:
    QuadExt(long d, Rational a, Rational b) : d_(d), a_(std::move(a)), b_(std::move(b)) {}
    static QuadExt rational(long d, const Rational& a) { return QuadExt(d, a, Rational(0)); }
    static QuadExt root(long d) { return QuadExt(d, Rational(0), Rational(1)); }

    long d() const { return d_; }
    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    bool is_rational() const { return b_.is_zero(); }

    QuadExt operator-() const { return QuadExt(d_, -a_, -b_); }
    friend QuadExt operator+(const QuadExt& x, const QuadExt& y);
    friend QuadExt operator-(const QuadExt& x, const QuadExt& y);
    friend QuadExt operator*(const QuadExt& x, const QuadExt& y);
    friend QuadExt operator/(const QuadExt& x, const QuadExt& y);

    // Exact sign of a + b*sqrt(d).
    int sign() const;

    friend bool operator==(const QuadExt& x, const QuadExt& y) {
        return x.d_ == y.d_ && x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator<(const QuadExt& x, const QuadExt& y) { return (x - y).sign() < 0; }
    friend bool operator>(const QuadExt& x, const QuadExt& y) { return (x - y).sign() > 0; }

    // Enclosure via a certified enclosure of sqrt(d).
    RatInterval enclosure(Precision p) const;

    std::string to_string() const;

private:
    long d_;
    Rational a_, b_;
};

} // namespace cww
