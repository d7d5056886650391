#include "cww/multipoly.hpp"

#include <algorithm>
#include <sstream>

#include "cww/parallel.hpp"
#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cww {

bool MultiPoly::GrlexLess::operator()(const Exponents& a, const Exponents& b) const {
    long da = 0, db = 0;
    for (auto e : a) da += e;
    for (auto e : b) db += e;
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

MultiPoly MultiPoly::constant(std::vector<std::string> vars, const Rational& c) {
    MultiPoly p(std::move(vars));
    if (!c.is_zero()) p.terms_.emplace(Exponents(p.vars_.size(), 0), c);
    return p;
}

MultiPoly MultiPoly::variable(std::vector<std::string> vars, const std::string& name) {
    MultiPoly p(std::move(vars));
    Exponents e(p.vars_.size(), 0);
    e[p.var_index(name)] = 1;
    p.terms_.emplace(std::move(e), Rational(1));
    return p;
}

MultiPoly MultiPoly::monomial(std::vector<std::string> vars, Exponents e, const Rational& c) {
    MultiPoly p(std::move(vars));
    if (e.size() != p.vars_.size()) throw DomainError("monomial exponent length mismatch");
    if (!c.is_zero()) p.terms_.emplace(std::move(e), c);
    return p;
}

bool MultiPoly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const auto& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](std::uint32_t x) { return x == 0; });
}

Rational MultiPoly::constant_term() const {
    const auto it = terms_.find(Exponents(vars_.size(), 0));
    return it == terms_.end() ? Rational(0) : it->second;
}

long MultiPoly::degree_in(const std::string& var) const {
    if (terms_.empty()) return -1;
    const std::size_t i = var_index(var);
    long d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, static_cast<long>(e[i]));
    return d;
}

long MultiPoly::total_degree() const {
    if (terms_.empty()) return -1;
    long d = 0;
    for (const auto& [e, c] : terms_) {
        long s = 0;
        for (auto x : e) s += x;
        d = std::max(d, s);
    }
    return d;
}

std::size_t MultiPoly::var_index(const std::string& var) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == var) return i;
    throw DomainError("unknown variable '" + var + "'");
}

void MultiPoly::insert_term(const Exponents& e, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

MultiPoly MultiPoly::embedded(const std::vector<std::string>& target_vars) const {
    if (target_vars == vars_) return *this;
    std::vector<std::size_t> pos(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::find(target_vars.begin(), target_vars.end(), vars_[i]);
        if (it == target_vars.end()) throw DomainError("embedding target misses '" + vars_[i] + "'");
        pos[i] = static_cast<std::size_t>(it - target_vars.begin());
    }
    MultiPoly out(target_vars);
    for (const auto& [e, c] : terms_) {
        Exponents ne(target_vars.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) ne[pos[i]] = e[i];
        out.terms_.emplace(std::move(ne), c);
    }
    return out;
}

std::pair<MultiPoly, MultiPoly> unify(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ == b.vars_) return {a, b};
    std::vector<std::string> merged = a.vars_;
    for (const auto& v : b.vars_)
        if (std::find(merged.begin(), merged.end(), v) == merged.end()) merged.push_back(v);
    return {a.embedded(merged), b.embedded(merged)};
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly out(vars_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
    return out;
}

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ != b.vars_) {
        auto [ua, ub] = unify(a, b);
        return ua + ub;
    }
    MultiPoly out = a;
    for (const auto& [e, c] : b.terms_) out.insert_term(e, c);
    return out;
}

MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ != b.vars_) {
        auto [ua, ub] = unify(a, b);
        return ua - ub;
    }
    MultiPoly out = a;
    for (const auto& [e, c] : b.terms_) out.insert_term(e, -c);
    return out;
}

MultiPoly MultiPoly::mul_serial(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly out(a.vars_);
    const std::size_t n = a.vars_.size();
    Exponents e(n);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
            out.insert_term(e, ca * cb);
        }
    }
    return out;
}

MultiPoly MultiPoly::mul_parallel(const MultiPoly& a, const MultiPoly& b) {
#ifdef _OPENMP
    std::vector<const std::pair<const Exponents, Rational>*> at;
    at.reserve(a.terms_.size());
    for (const auto& t : a.terms_) at.push_back(&t);

    const int nthreads = std::max(1, thread_count());
    std::vector<MultiPoly> partial(static_cast<std::size_t>(nthreads), MultiPoly(a.vars_));

#pragma omp parallel num_threads(nthreads)
    {
        const int tid = omp_get_thread_num();
        MultiPoly& local = partial[static_cast<std::size_t>(tid)];
        const std::size_t n = a.vars_.size();
        Exponents e(n);
#pragma omp for schedule(static)
        for (long idx = 0; idx < static_cast<long>(at.size()); ++idx) {
            const auto& [ea, ca] = *at[static_cast<std::size_t>(idx)];
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
                local.insert_term(e, ca * cb);
            }
        }
    }
    MultiPoly out(a.vars_);
    for (auto& part : partial)
        for (const auto& [e, c] : part.terms_) out.insert_term(e, c);
    return out;
#else
    return mul_serial(a, b);
#endif
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ != b.vars_) {
        auto [ua, ub] = unify(a, b);
        return ua * ub;
    }
    const std::size_t work = a.terms_.size() * b.terms_.size();
    if (parallel_enabled() && work > 16384) return MultiPoly::mul_parallel(a, b);
    return MultiPoly::mul_serial(a, b);
}

MultiPoly MultiPoly::operator*(const Rational& c) const {
    MultiPoly out(vars_);
    if (c.is_zero()) return out;
    for (const auto& [e, coeff] : terms_) out.terms_.emplace(e, coeff * c);
    return out;
}

MultiPoly MultiPoly::pow(unsigned e) const {
    MultiPoly acc = MultiPoly::constant(vars_, Rational(1));
    MultiPoly base = *this;
    while (e > 0) {
        if (e & 1u) acc = acc * base;
        base = (e >>= 1) ? base * base : base;
    }
    return acc;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ != b.vars_) {
        auto [ua, ub] = unify(a, b);
        return ua.terms_ == ub.terms_;
    }
    return a.terms_ == b.terms_;
}

Rational MultiPoly::eval(const std::map<std::string, Rational>& point) const {
    // Powers cached per variable up to its degree.
    std::vector<std::vector<Rational>> pows(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        long d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, static_cast<long>(e[i]));
        auto it = point.find(vars_[i]);
        const Rational x = it == point.end() ? Rational(0) : it->second;
        pows[i].resize(static_cast<std::size_t>(d) + 1, Rational(1));
        for (long k = 1; k <= d; ++k) pows[i][static_cast<std::size_t>(k)] = pows[i][static_cast<std::size_t>(k - 1)] * x;
    }
    Rational sum(0);
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) t *= pows[i][e[i]];
        sum += t;
    }
    return sum;
}

MultiPoly MultiPoly::derivative(const std::string& var) const {
    const std::size_t i = var_index(var);
    MultiPoly out(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Exponents ne = e;
        ne[i] -= 1;
        out.insert_term(ne, c * Rational(static_cast<long>(e[i])));
    }
    return out;
}

MultiPoly MultiPoly::subst_zero(const std::string& var) const {
    const std::size_t i = var_index(var);
    MultiPoly out(vars_);
    for (const auto& [e, c] : terms_)
        if (e[i] == 0) out.terms_.emplace(e, c);
    return out;
}

MultiPoly MultiPoly::negate_var(const std::string& var) const {
    const std::size_t i = var_index(var);
    MultiPoly out(vars_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, (e[i] % 2 == 0) ? c : -c);
    return out;
}

MultiPoly MultiPoly::flip_var(const std::string& var) const {
    const std::size_t i = var_index(var);
    // Pascal rows up to the degree in var, computed once.
    const long d = std::max(degree_in(var), 0L);
    std::vector<std::vector<mpz_class>> binom(static_cast<std::size_t>(d) + 1);
    for (long n = 0; n <= d; ++n) {
        auto& row = binom[static_cast<std::size_t>(n)];
        row.resize(static_cast<std::size_t>(n) + 1);
        for (long k = 0; k <= n; ++k)
            mpz_bin_uiui(row[static_cast<std::size_t>(k)].get_mpz_t(),
                         static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    }
    MultiPoly out(vars_);
    for (const auto& [e, c] : terms_) {
        const std::uint32_t n = e[i];
        // (1 - v)^n = sum_k C(n,k) (-1)^k v^k
        for (std::uint32_t k = 0; k <= n; ++k) {
            Exponents ne = e;
            ne[i] = k;
            Rational coeff = c * Rational(binom[n][k]);
            out.insert_term(ne, (k % 2 == 0) ? coeff : -coeff);
        }
    }
    return out;
}

MultiPoly MultiPoly::divide_by_var(const std::string& var) const {
    const std::size_t i = var_index(var);
    MultiPoly out(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) throw DomainError("divide_by_var: term without factor " + var);
        Exponents ne = e;
        ne[i] -= 1;
        out.terms_.emplace(std::move(ne), c);
    }
    return out;
}

std::vector<MultiPoly> MultiPoly::coefficients_in(const std::string& var) const {
    const std::size_t i = var_index(var);
    const long d = std::max(degree_in(var), 0L);
    std::vector<MultiPoly> cs(static_cast<std::size_t>(d) + 1, MultiPoly(vars_));
    for (const auto& [e, c] : terms_) {
        Exponents ne = e;
        const std::uint32_t k = ne[i];
        ne[i] = 0;
        cs[k].terms_.emplace(std::move(ne), c);
    }
    return cs;
}

bool MultiPoly::all_coefficients_integer() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.second.is_integer(); });
}

bool MultiPoly::all_coefficients_nonnegative() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.second.sign() >= 0; });
}

std::optional<MultiPoly> MultiPoly::divide_impl(const MultiPoly& p, const MultiPoly& q,
                                                MultiPoly* remainder_out) {
    if (q.is_zero()) throw DomainError("exact_divide by the zero polynomial");
    auto [pp, qq] = unify(p, q);
    const std::size_t n = pp.vars().size();
    const auto& qlead = *qq.terms_.rbegin();  // grlex-greatest term

    MultiPoly quotient(pp.vars());
    TermMap& qt = quotient.terms_;
    TermMap rem = pp.terms_;
    Exponents e(n), me(n);
    while (!rem.empty()) {
        const auto& rlead = *rem.rbegin();
        bool divisible = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (rlead.first[i] < qlead.first[i]) {
                divisible = false;
                break;
            }
            e[i] = rlead.first[i] - qlead.first[i];
        }
        if (!divisible) {
            if (remainder_out) {
                *remainder_out = MultiPoly(pp.vars());
                remainder_out->terms_ = std::move(rem);
            }
            return std::nullopt;
        }
        const Rational coeff = rlead.second / qlead.second;
        qt.emplace(e, coeff);
        for (const auto& [eq, cq] : qq.terms_) {
            for (std::size_t i = 0; i < n; ++i) me[i] = e[i] + eq[i];
            auto [it, inserted] = rem.emplace(me, -(coeff * cq));
            if (!inserted) {
                it->second -= coeff * cq;
                if (it->second.is_zero()) rem.erase(it);
            }
        }
    }
    return quotient;
}

MultiPoly exact_divide(const MultiPoly& p, const MultiPoly& q) {
    MultiPoly rem;
    auto quotient = MultiPoly::divide_impl(p, q, &rem);
    if (!quotient) throw DivisionError("exact_divide: nonzero remainder", rem);
    if (q * *quotient != p) throw DivisionError("exact_divide: round-trip check failed", rem);
    return *quotient;
}

std::optional<MultiPoly> try_divide(const MultiPoly& p, const MultiPoly& q) {
    return MultiPoly::divide_impl(p, q, nullptr);
}

std::string MultiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        if (!first) os << (c.sign() >= 0 ? " + " : " - ");
        else if (c.sign() < 0) os << "-";
        first = false;
        const Rational a = c.abs();
        bool printed_coeff = false;
        bool any_var = std::any_of(e.begin(), e.end(), [](std::uint32_t x) { return x != 0; });
        if (a != Rational(1) || !any_var) {
            os << a.to_string();
            printed_coeff = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (printed_coeff) os << "*";
            os << vars_[i];
            if (e[i] > 1) os << "^" << e[i];
            printed_coeff = true;
        }
    }
    return os.str();
}

std::string MultiPoly::to_json() const {
    nlohmann::ordered_json j;
    j["vars"] = vars_;
    j["terms"] = nlohmann::ordered_json::array();
    for (const auto& [e, c] : terms_) {
        nlohmann::ordered_json t;
        t["c"] = c.to_string();
        t["e"] = e;
        j["terms"].push_back(std::move(t));
    }
    return j.dump();
}

MultiPoly MultiPoly::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    MultiPoly p(j.at("vars").get<std::vector<std::string>>());
    for (const auto& t : j.at("terms")) {
        Exponents e = t.at("e").get<Exponents>();
        if (e.size() != p.vars_.size()) throw DomainError("polynomial JSON exponent length mismatch");
        p.insert_term(e, Rational::parse(t.at("c").get<std::string>()));
    }
    return p;
}

} // namespace cww
