#pragma once

#include <map>
#include <string>

#include "cww/multipoly.hpp"

namespace cww {

// Quotient of two polynomials. Arithmetic keeps the represented function
// exactly equal; simplification happens only by exact division by known
// common factors (the other operand's numerator/denominator), never by
// polynomial gcd. Denominators therefore stay the structural products the
// derivations produce.
class RationalFn {
public:
    RationalFn() = default;
    explicit RationalFn(MultiPoly num);
    RationalFn(MultiPoly num, MultiPoly den);

    static RationalFn constant(std::vector<std::string> vars, const Rational& c);
    static RationalFn variable(std::vector<std::string> vars, const std::string& name);

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RationalFn operator-() const;
    friend RationalFn operator+(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator*(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator/(const RationalFn& a, const RationalFn& b);
    RationalFn operator*(const Rational& c) const;
    RationalFn pow(unsigned e) const;

    // Exact value; DomainError when the denominator vanishes at the point.
    Rational eval(const std::map<std::string, Rational>& point) const;

    // Quotient-rule derivative, exact.
    RationalFn derivative(const std::string& var) const;

    // True iff num = den * r for a polynomial r (checked by exact division).
    bool is_polynomial() const;
    MultiPoly to_polynomial() const;  // DivisionError if not a polynomial
    // (num * clearing) / den as a polynomial; the standard "clear the known
    // denominators, assert exactness" step of the proof pipelines.
    MultiPoly cleared_by(const MultiPoly& clearing) const;

    std::string to_string() const;

private:
    MultiPoly num_, den_;
};

// f == g as functions: num_f * den_g == num_g * den_f as term maps.
bool identical_function(const RationalFn& f, const RationalFn& g);

// Exact composition: every variable of f's polynomials must be a key of
// `assignments` or is mapped to itself in the target ring. Denominators are
// multiplied through; the result is exact.
RationalFn substitute(const RationalFn& f,
                      const std::map<std::string, RationalFn>& assignments);
RationalFn substitute(const MultiPoly& p,
                      const std::map<std::string, RationalFn>& assignments);

} // namespace cww
