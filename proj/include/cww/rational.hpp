#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>

#include "cww/errors.hpp"

namespace cww {

// Arbitrary-precision rational number. Always canonical: denominator > 0 and
// gcd(|numerator|, denominator) = 1. Serialized as "p/q" ("p" when q = 1).
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}                       // NOLINT: implicit by design
    Rational(long n, unsigned long d) : v_(n, d) { v_.canonicalize(); }
    explicit Rational(const mpz_class& n) : v_(n) {}
    Rational(const mpz_class& n, const mpz_class& d);
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    // Parses "p", "p/q", or "-p/q" (whitespace not allowed).
    static Rational parse(const std::string& s);

    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    Rational abs() const { return Rational(mpq_class(::abs(v_))); }
    Rational inverse() const;
    Rational pow(unsigned long e) const;

    // 2^e (e may be negative).
    static Rational pow2(long e);

    std::string to_string() const;
    // Display-only decimal approximation, round-to-nearest with `digits` fraction digits.
    std::string to_decimal(int digits = 12) const;

    const mpq_class& raw() const { return v_; }

private:
    mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// floor(sqrt(n)) for n >= 0, plus exactness flag.
mpz_class isqrt_floor(const mpz_class& n, bool* exact = nullptr);

} // namespace cww
