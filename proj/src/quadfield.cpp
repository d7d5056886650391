#include "cww/quadfield.hpp"

namespace cww {

namespace {
void check_same_field(const QuadExt& x, const QuadExt& y) {
    if (x.d() != y.d()) throw DomainError("mixing elements of different quadratic fields");
}
} // namespace

QuadExt operator+(const QuadExt& x, const QuadExt& y) {
    check_same_field(x, y);
    return QuadExt(x.d_, x.a_ + y.a_, x.b_ + y.b_);
}

QuadExt operator-(const QuadExt& x, const QuadExt& y) {
    check_same_field(x, y);
    return QuadExt(x.d_, x.a_ - y.a_, x.b_ - y.b_);
}

QuadExt operator*(const QuadExt& x, const QuadExt& y) {
    check_same_field(x, y);
    return QuadExt(x.d_, x.a_ * y.a_ + Rational(x.d_) * x.b_ * y.b_,
                   x.a_ * y.b_ + x.b_ * y.a_);
}

QuadExt operator/(const QuadExt& x, const QuadExt& y) {
    check_same_field(x, y);
    // 1/(a + b sqrt d) = (a - b sqrt d) / (a^2 - d b^2)
    const Rational norm = y.a_ * y.a_ - Rational(y.d_) * y.b_ * y.b_;
    if (norm.is_zero()) throw DomainError("division by zero in quadratic field");
    const QuadExt conj(y.d_, y.a_, -y.b_);
    QuadExt num = x * conj;
    return QuadExt(x.d_, num.a_ / norm, num.b_ / norm);
}

int QuadExt::sign() const {
    const int sa = a_.sign(), sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 with d b^2; sign follows the larger magnitude.
    const Rational a2 = a_ * a_, db2 = Rational(d_) * b_ * b_;
    if (a2 == db2) return 0;  // cannot happen for non-square d and b != 0
    return (a2 > db2) ? sa : sb;
}

RatInterval QuadExt::enclosure(Precision p) const {
    const RatInterval rt = sqrt_enclosure(RatInterval::point(Rational(d_)), Precision{p.bits + 4});
    return RatInterval::point(a_) + RatInterval::point(b_) * rt;
}

std::string QuadExt::to_string() const {
    return a_.to_string() + " + (" + b_.to_string() + ")*sqrt(" + std::to_string(d_) + ")";
}

} // namespace cww
