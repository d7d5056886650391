#include "cww/rationalfn.hpp"

#include <algorithm>

namespace cww {

RationalFn::RationalFn(MultiPoly num)
    : num_(std::move(num)), den_(MultiPoly::constant(num_.vars(), Rational(1))) {}

RationalFn::RationalFn(MultiPoly num, MultiPoly den) {
    if (den.is_zero()) throw DomainError("rational function with zero denominator");
    auto [n, d] = unify(num, den);
    num_ = std::move(n);
    den_ = std::move(d);
}

RationalFn RationalFn::constant(std::vector<std::string> vars, const Rational& c) {
    return RationalFn(MultiPoly::constant(std::move(vars), c));
}

RationalFn RationalFn::variable(std::vector<std::string> vars, const std::string& name) {
    return RationalFn(MultiPoly::variable(std::move(vars), name));
}

RationalFn RationalFn::operator-() const { return RationalFn(-num_, den_); }

namespace {

bool is_one(const MultiPoly& p) { return p.is_constant() && p.constant_term() == Rational(1); }

} // namespace

RationalFn operator+(const RationalFn& a, const RationalFn& b) {
    if (a.den_ == b.den_) return RationalFn(a.num_ + b.num_, a.den_);
    // a/b + c/d with b | d (or d | b): single common denominator, no growth.
    if (auto e = try_divide(b.den_, a.den_)) return RationalFn(a.num_ * *e + b.num_, b.den_);
    if (auto e = try_divide(a.den_, b.den_)) return RationalFn(a.num_ + b.num_ * *e, a.den_);
    return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + (-b); }

RationalFn operator*(const RationalFn& a, const RationalFn& b) {
    // Cross-cancel known factors before multiplying out.
    if (!a.num_.is_zero() && !b.num_.is_zero()) {
        if (a.den_ == b.num_) return RationalFn(a.num_, b.den_);
        if (b.den_ == a.num_) return RationalFn(b.num_, a.den_);
        if (auto e = try_divide(b.num_, a.den_)) return RationalFn(a.num_ * *e, b.den_);
        if (auto e = try_divide(a.den_, b.num_)) return RationalFn(a.num_, *e * b.den_);
        if (auto e = try_divide(a.num_, b.den_)) return RationalFn(*e * b.num_, a.den_);
        if (auto e = try_divide(b.den_, a.num_)) return RationalFn(b.num_, a.den_ * *e);
    }
    return RationalFn(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFn operator/(const RationalFn& a, const RationalFn& b) {
    if (b.num_.is_zero()) throw DomainError("division by the zero rational function");
    return a * RationalFn(b.den_, b.num_);
}

RationalFn RationalFn::operator*(const Rational& c) const {
    return RationalFn(num_ * c, den_);
}

RationalFn RationalFn::pow(unsigned e) const {
    RationalFn acc = RationalFn::constant(num_.vars(), Rational(1));
    RationalFn base = *this;
    while (e > 0) {
        if (e & 1u) acc = acc * base;
        base = (e >>= 1) ? base * base : base;
    }
    return acc;
}

Rational RationalFn::eval(const std::map<std::string, Rational>& point) const {
    const Rational d = den_.eval(point);
    if (d.is_zero()) throw DomainError("rational function denominator vanishes at point");
    return num_.eval(point) / d;
}

RationalFn RationalFn::derivative(const std::string& var) const {
    // (n/d)' = (n'd - nd') / d^2
    return RationalFn(num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_);
}

bool RationalFn::is_polynomial() const {
    if (is_one(den_)) return true;
    return try_divide(num_, den_).has_value();
}

MultiPoly RationalFn::to_polynomial() const {
    if (is_one(den_)) return num_;
    return exact_divide(num_, den_);
}

MultiPoly RationalFn::cleared_by(const MultiPoly& clearing) const {
    return exact_divide(num_ * clearing, den_);
}

std::string RationalFn::to_string() const {
    if (is_one(den_)) return num_.to_string();
    return "(" + num_.to_string() + ") / (" + den_.to_string() + ")";
}

bool identical_function(const RationalFn& f, const RationalFn& g) {
    return f.num() * g.den() == g.num() * f.den();
}

namespace {

// Horner evaluation of p under `sub`, recursing over the variables of p.
RationalFn substitute_rec(const MultiPoly& p,
                          const std::map<std::string, RationalFn>& sub,
                          const std::vector<std::string>& target_vars) {
    // Find the last variable of p carrying a positive degree.
    const auto& vars = p.vars();
    std::string pivot;
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        if (p.degree_in(*it) > 0) {
            pivot = *it;
            break;
        }
    }
    if (pivot.empty())
        return RationalFn::constant(target_vars, p.is_zero() ? Rational(0) : p.constant_term());

    const auto sub_it = sub.find(pivot);
    const RationalFn image = sub_it != sub.end()
                                 ? sub_it->second
                                 : RationalFn::variable(target_vars, pivot);

    const std::vector<MultiPoly> cs = p.coefficients_in(pivot);
    RationalFn acc = substitute_rec(cs.back(), sub, target_vars);
    for (auto it = cs.rbegin() + 1; it != cs.rend(); ++it)
        acc = acc * image + substitute_rec(*it, sub, target_vars);
    return acc;
}

std::vector<std::string> substitution_target_vars(
    const std::vector<std::string>& source_vars,
    const std::map<std::string, RationalFn>& assignments) {
    std::vector<std::string> target;
    auto add = [&target](const std::string& v) {
        if (std::find(target.begin(), target.end(), v) == target.end()) target.push_back(v);
    };
    for (const auto& [var, image] : assignments)
        for (const auto& v : image.num().vars()) add(v);
    for (const auto& v : source_vars)
        if (!assignments.count(v)) add(v);
    return target;
}

} // namespace

RationalFn substitute(const MultiPoly& p,
                      const std::map<std::string, RationalFn>& assignments) {
    return substitute_rec(p, assignments, substitution_target_vars(p.vars(), assignments));
}

RationalFn substitute(const RationalFn& f,
                      const std::map<std::string, RationalFn>& assignments) {
    const auto target = substitution_target_vars(f.num().vars(), assignments);
    const RationalFn n = substitute_rec(f.num(), assignments, target);
    const RationalFn d = substitute_rec(f.den(), assignments, target);
    if (d.is_zero()) throw DomainError("substitution makes a denominator identically zero");
    return n / d;
}

} // namespace cww
