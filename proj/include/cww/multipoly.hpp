#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cww/rational.hpp"

namespace cww {

// Sparse multivariate polynomial over the rationals. Terms are kept in a
// canonical graded-lexicographic order on the stored variable list; no zero
// coefficients are stored, so equal polynomials have identical term maps.
class MultiPoly {
public:
    using Exponents = std::vector<std::uint32_t>;

    struct GrlexLess {
        bool operator()(const Exponents& a, const Exponents& b) const;
    };
    using TermMap = std::map<Exponents, Rational, GrlexLess>;

    MultiPoly() = default;  // zero polynomial of the empty ring
    explicit MultiPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    static MultiPoly constant(std::vector<std::string> vars, const Rational& c);
    static MultiPoly variable(std::vector<std::string> vars, const std::string& name);
    static MultiPoly monomial(std::vector<std::string> vars, Exponents e, const Rational& c);

    const std::vector<std::string>& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;

    long degree_in(const std::string& var) const;  // -1 for the zero polynomial
    long total_degree() const;

    MultiPoly operator-() const;
    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    MultiPoly operator*(const Rational& c) const;
    MultiPoly pow(unsigned e) const;

    friend bool operator==(const MultiPoly& a, const MultiPoly& b);
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

    // Exact value at a rational point (vars missing from `point` default to 0).
    Rational eval(const std::map<std::string, Rational>& point) const;

    MultiPoly derivative(const std::string& var) const;
    MultiPoly subst_zero(const std::string& var) const;  // var -> 0
    MultiPoly negate_var(const std::string& var) const;  // var -> -var
    MultiPoly flip_var(const std::string& var) const;    // var -> 1 - var, expanded
    // Shift one power of `var` out of every term; requires var | *this.
    MultiPoly divide_by_var(const std::string& var) const;
    // Coefficients as polynomials of the remaining variables; index = power of var.
    std::vector<MultiPoly> coefficients_in(const std::string& var) const;

    // Embeds into a ring whose variable list contains vars() as a subsequence.
    MultiPoly embedded(const std::vector<std::string>& target_vars) const;

    bool all_coefficients_integer() const;
    bool all_coefficients_nonnegative() const;

    std::string to_string() const;
    std::string to_json() const;  // {"vars": [...], "terms": [{"c": "p/q", "e": [...]}, ...]}
    static MultiPoly from_json(const std::string& text);

    // Kernel selection for large products (see parallel.hpp); tests compare both.
    static MultiPoly mul_serial(const MultiPoly& a, const MultiPoly& b);
    static MultiPoly mul_parallel(const MultiPoly& a, const MultiPoly& b);

private:
    void insert_term(const Exponents& e, const Rational& c);  // accumulates, drops zeros
    std::size_t var_index(const std::string& var) const;      // DomainError if absent
    static std::optional<MultiPoly> divide_impl(const MultiPoly& p, const MultiPoly& q,
                                                MultiPoly* remainder_out);

    std::vector<std::string> vars_;
    TermMap terms_;

    friend std::pair<MultiPoly, MultiPoly> unify(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly exact_divide(const MultiPoly& p, const MultiPoly& q);
    friend std::optional<MultiPoly> try_divide(const MultiPoly& p, const MultiPoly& q);
};

// Exact division failed: carries the nonzero remainder reached.
class DivisionError : public std::runtime_error {
public:
    DivisionError(std::string what, MultiPoly remainder)
        : std::runtime_error(std::move(what)), remainder_(std::move(remainder)) {}
    const MultiPoly& remainder() const { return remainder_; }

private:
    MultiPoly remainder_;
};

// Quotient r with p = q * r exactly; the identity is re-verified by
// multiplication after the division. Nonzero remainder -> DivisionError.
MultiPoly exact_divide(const MultiPoly& p, const MultiPoly& q);
// Same, but returns nullopt instead of throwing (and skips the re-check).
std::optional<MultiPoly> try_divide(const MultiPoly& p, const MultiPoly& q);

// Union of the two variable lists (left order first), with both embedded.
std::pair<MultiPoly, MultiPoly> unify(const MultiPoly& a, const MultiPoly& b);

} // namespace cww
