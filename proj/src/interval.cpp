#include "cww/interval.hpp"

#include <algorithm>
#include <optional>

namespace cww {

RatInterval::RatInterval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (hi_ < lo_) throw DomainError("interval with lo > hi");
}

RatInterval operator+(const RatInterval& a, const RatInterval& b) {
    return RatInterval(a.lo_ + b.lo_, a.hi_ + b.hi_);
}

RatInterval operator-(const RatInterval& a, const RatInterval& b) {
    return RatInterval(a.lo_ - b.hi_, a.hi_ - b.lo_);
}

RatInterval operator*(const RatInterval& a, const RatInterval& b) {
    const Rational p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_;
    const Rational p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
    return RatInterval(std::min(std::min(p1, p2), std::min(p3, p4)),
                       std::max(std::max(p1, p2), std::max(p3, p4)));
}

RatInterval operator/(const RatInterval& a, const RatInterval& b) {
    if (b.contains_zero()) throw DomainError("interval division by interval containing 0");
    const RatInterval inv(b.hi_.inverse(), b.lo_.inverse());
    return a * inv;
}

RatInterval RatInterval::square() const {
    if (lo_.sign() >= 0) return RatInterval(lo_ * lo_, hi_ * hi_);
    if (hi_.sign() <= 0) return RatInterval(hi_ * hi_, lo_ * lo_);
    return RatInterval(Rational(0), std::max(lo_ * lo_, hi_ * hi_));
}

RatInterval RatInterval::abs() const {
    if (lo_.sign() >= 0) return *this;
    if (hi_.sign() <= 0) return -*this;
    return RatInterval(Rational(0), std::max(-lo_, hi_));
}

RatInterval RatInterval::hull(const RatInterval& a, const RatInterval& b) {
    return RatInterval(std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_));
}

RatInterval RatInterval::max(const RatInterval& a, const RatInterval& b) {
    return RatInterval(std::max(a.lo_, b.lo_), std::max(a.hi_, b.hi_));
}

RatInterval RatInterval::min(const RatInterval& a, const RatInterval& b) {
    return RatInterval(std::min(a.lo_, b.lo_), std::min(a.hi_, b.hi_));
}

RatInterval RatInterval::coarsen(unsigned bits) const {
    const unsigned b = bits + 8;
    mpz_class scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), b);
    auto round_down = [&](const Rational& r) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), mpz_class(r.numerator() * scale).get_mpz_t(),
                   r.denominator().get_mpz_t());
        return Rational(q, scale);
    };
    auto round_up = [&](const Rational& r) {
        mpz_class q;
        mpz_cdiv_q(q.get_mpz_t(), mpz_class(r.numerator() * scale).get_mpz_t(),
                   r.denominator().get_mpz_t());
        return Rational(q, scale);
    };
    return RatInterval(round_down(lo_), round_up(hi_));
}

std::string RatInterval::to_string() const {
    return "[" + lo_.to_string() + ", " + hi_.to_string() + "]";
}

RatInterval operator+(const RatInterval& a, const Rational& b) {
    return a + RatInterval::point(b);
}

RatInterval operator*(const Rational& a, const RatInterval& b) {
    return RatInterval::point(a) * b;
}

namespace {

// Lower bound of sqrt(r): s/2^bits with s = floor(sqrt(floor(4^bits r))),
// so s <= sqrt(4^bits r) < s+1. Exact when r is a perfect square and
// exact_out reports it.
Rational sqrt_lower(const Rational& r, unsigned bits, bool* exact_out) {
    mpz_class scaled_num = r.numerator();
    mpz_mul_2exp(scaled_num.get_mpz_t(), scaled_num.get_mpz_t(), 2 * bits);
    mpz_class t = scaled_num / r.denominator();
    bool division_exact = (t * r.denominator() == scaled_num);
    bool sqrt_exact = false;
    mpz_class s = isqrt_floor(t, &sqrt_exact);
    if (exact_out) *exact_out = division_exact && sqrt_exact;
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
    return Rational(s, den);
}

} // namespace

namespace {

// sqrt(r) when r is the square of a rational, else nullopt.
std::optional<Rational> exact_sqrt(const Rational& r) {
    bool num_exact = false, den_exact = false;
    const mpz_class sn = isqrt_floor(r.numerator(), &num_exact);
    if (!num_exact) return std::nullopt;
    const mpz_class sd = isqrt_floor(r.denominator(), &den_exact);
    if (!den_exact) return std::nullopt;
    return Rational(sn, sd);
}

} // namespace

RatInterval sqrt_enclosure(const RatInterval& v, Precision p) {
    if (v.lo().sign() < 0) throw DomainError("sqrt_enclosure of interval with negative lower end");
    const unsigned bits = std::max(1u, p.bits) + 1;

    if (v.is_point()) {
        if (auto root = exact_sqrt(v.lo())) return RatInterval::point(*root);
    }

    bool lo_exact = false;
    Rational l = sqrt_lower(v.lo(), bits, &lo_exact);

    bool hi_exact = false;
    Rational h = sqrt_lower(v.hi(), bits, &hi_exact);
    if (!hi_exact) h += Rational::pow2(-static_cast<long>(bits));

    return RatInterval(l, h);
}

Ordering compare_strict(const RatInterval& a, const RatInterval& b) {
    if (a.hi() < b.lo()) return Ordering::Less;
    if (a.lo() > b.hi()) return Ordering::Greater;
    return Ordering::Inconclusive;
}

Ordering sign_with_refinement(const std::function<RatInterval(unsigned)>& make,
                              unsigned start_bits, unsigned cap_bits,
                              const std::string& what) {
    for (unsigned bits = start_bits;; bits *= 2) {
        const RatInterval e = make(bits);
        if (e.hi().sign() < 0) return Ordering::Less;
        if (e.lo().sign() > 0) return Ordering::Greater;
        if (bits >= cap_bits) break;
    }
    throw InconclusiveError("comparison inconclusive at precision cap: " + what);
}

} // namespace cww
