#include "cww/dyadic.hpp"

#include <stdexcept>

namespace cww {

void DyadicRational::normalize() {
    while (n_ > 0 && mpz_even_p(k_.get_mpz_t())) {
        k_ /= 2;
        --n_;
    }
}

DyadicRational DyadicRational::from_rational(const Rational& r) {
    mpz_class den = r.denominator();
    unsigned n = 0;
    while (mpz_even_p(den.get_mpz_t())) {
        den /= 2;
        ++n;
    }
    if (den != 1) throw DomainError("not a binary rational: " + r.to_string());
    return DyadicRational(r.numerator(), n);
}

DyadicRational DyadicRational::parse(const std::string& s) {
    if (auto pos = s.find("/2^"); pos != std::string::npos) {
        mpz_class k(s.substr(0, pos));
        unsigned long n = std::stoul(s.substr(pos + 3));
        return DyadicRational(k, static_cast<unsigned>(n));
    }
    return from_rational(Rational::parse(s));
}

Rational DyadicRational::to_rational() const {
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), n_);
    return Rational(k_, den);
}

bool DyadicRational::in_unit_half() const {
    if (sgn(k_) < 0) return false;
    // k/2^n <= 1/2  <=>  2k <= 2^n
    mpz_class lim = 1;
    mpz_mul_2exp(lim.get_mpz_t(), lim.get_mpz_t(), n_);
    return 2 * k_ <= lim;
}

bool DyadicRational::member_of(unsigned n) const { return n_ <= n && in_unit_half(); }

DyadicRational DyadicRational::left_parent() const {
    if (n_ < 1 || !in_unit_half()) throw DomainError("no parent neighbors at " + to_string());
    return DyadicRational(k_ - 1, n_);
}

DyadicRational DyadicRational::right_parent() const {
    if (n_ < 1 || !in_unit_half()) throw DomainError("no parent neighbors at " + to_string());
    return DyadicRational(k_ + 1, n_);
}

DyadicRational DyadicRational::midpoint_with(const DyadicRational& o) const {
    unsigned n = std::max(n_, o.n_) + 1;
    mpz_class a = k_ << (n - n_);
    mpz_class b = o.k_ << (n - o.n_);
    return DyadicRational((a + b) / 2, n);
}

bool operator<(const DyadicRational& a, const DyadicRational& b) {
    unsigned n = std::max(a.n_, b.n_);
    mpz_class x = a.k_ << (n - a.n_);
    mpz_class y = b.k_ << (n - b.n_);
    return x < y;
}

std::string DyadicRational::to_string() const {
    if (n_ == 0) return k_.get_str();
    return k_.get_str() + "/2^" + std::to_string(n_);
}

std::vector<DyadicRational> grid_points(unsigned n) {
    std::vector<DyadicRational> pts;
    mpz_class top = 1;
    mpz_mul_2exp(top.get_mpz_t(), top.get_mpz_t(), n == 0 ? 0 : n - 1);
    for (mpz_class k = 0; k <= top; ++k) pts.emplace_back(k, n);
    return pts;
}

} // namespace cww
