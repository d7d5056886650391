#include "cww/rational.hpp"

#include <ostream>
#include <sstream>

namespace cww {

Rational::Rational(const mpz_class& n, const mpz_class& d) {
    if (sgn(d) == 0) throw DomainError("rational with zero denominator");
    v_ = mpq_class(n);
    v_ /= mpq_class(d);
    v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("rational division by zero");
    v_ /= o.v_;
    return *this;
}

Rational Rational::parse(const std::string& s) {
    auto bad = [&] { throw DomainError("malformed rational '" + s + "'"); };
    if (s.empty()) bad();
    std::string num = s, den = "1";
    if (auto pos = s.find('/'); pos != std::string::npos) {
        num = s.substr(0, pos);
        den = s.substr(pos + 1);
        if (num.empty() || den.empty()) bad();
    }
    auto digits_ok = [](const std::string& t, bool allow_sign) {
        std::size_t i = 0;
        if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    if (!digits_ok(num, true) || !digits_ok(den, false)) bad();
    mpz_class n(num), d(den);
    if (sgn(d) == 0) bad();
    return Rational(n, d);
}

Rational Rational::inverse() const {
    if (is_zero()) throw DomainError("inverse of zero");
    return Rational(denominator(), numerator());
}

Rational Rational::pow(unsigned long e) const {
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), numerator().get_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), denominator().get_mpz_t(), e);
    return Rational(n, d);
}

Rational Rational::pow2(long e) {
    mpz_class p = 1;
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
    return e >= 0 ? Rational(p) : Rational(mpz_class(1), p);
}

std::string Rational::to_string() const {
    std::string s = numerator().get_str();
    if (!is_integer()) {
        s += '/';
        s += denominator().get_str();
    }
    return s;
}

std::string Rational::to_decimal(int digits) const {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    mpz_class n2 = numerator() * scale * 2;
    mpz_class q = (n2 / denominator() + (sign() >= 0 ? 1 : -1)) / 2;  // round half away
    bool neg = sgn(q) < 0;
    mpz_class a = ::abs(q);
    std::string d = a.get_str();
    if (static_cast<int>(d.size()) <= digits) d.insert(0, digits + 1 - d.size(), '0');
    d.insert(d.size() - digits, ".");
    return (neg ? "-" : "") + d;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

mpz_class isqrt_floor(const mpz_class& n, bool* exact) {
    if (sgn(n) < 0) throw DomainError("isqrt of negative integer");
    mpz_class root, rem;
    mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
    if (exact) *exact = (sgn(rem) == 0);
    return root;
}

} // namespace cww
