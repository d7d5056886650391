#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "cww/dyadic.hpp"
#include "cww/interval.hpp"

namespace cww {

// M[a,b] = (a+b)/sqrt(4+(a-b)^2), certified. Exact for point inputs with a = b.
RatInterval nonlinear_mean(const RatInterval& a, const RatInterval& b, Precision p);

// X(x,tau) = (x+tau)/sqrt(1-tau^2). DomainError unless tau is certified
// strictly inside (-1,1).
RatInterval x_map(const RatInterval& x, const RatInterval& tau, Precision p);

// The triple (x_-, x, x_+) with x = M[x_-, x_+] and x_pm = X(x, ±tau),
// tau = (x_+ - x_-)/sqrt(4 + (x_+ - x_-)^2).
struct TriplePoint {
    RatInterval x_minus, x, x_plus;
    RatInterval tau;
};
TriplePoint make_triple(const Rational& x_minus, const Rational& x_plus, Precision p);

// Memoized enclosures of the dyadic suspension bridge A on [0, 1/2]:
// A(0) = 0, A(1/2) = 1, A(t) = M[A(t-), A(t+)] level by level. Level tables
// are immutable snapshots per working precision; concurrent reads are safe,
// building a new snapshot takes an exclusive lock.
class BridgeCache {
public:
    explicit BridgeCache(unsigned cap_bits = kDefaultPrecisionCap) : cap_bits_(cap_bits) {}

    // Enclosure of A(t) with width <= 2^-p.bits. DomainError if t not in [0,1/2].
    RatInterval value(const DyadicRational& t, Precision p) const;

    // All of D_n in grid order, each of width <= 2^-p.bits.
    std::vector<RatInterval> level_values(unsigned n, Precision p) const;

    // Level values refined until neighboring enclosures are strictly ordered
    // (hi of left < lo of right). InconclusiveError at the cap.
    std::vector<RatInterval> separated_level_values(unsigned n, Precision p) const;

    // tau of the defining triple at t: (A(t+) - A(t-))/sqrt(4 + (A(t+) - A(t-))^2).
    // For t = 1/2 the construction uses the pure Haar function; DomainError here.
    RatInterval tau_at(const DyadicRational& t, Precision p) const;

    unsigned cap_bits() const { return cap_bits_; }

private:
    struct Key {
        unsigned level;
        mpz_class k;
        bool operator<(const Key& o) const {
            if (level != o.level) return level < o.level;
            return k < o.k;
        }
    };
    struct Snapshot {
        unsigned bits;
        std::map<Key, RatInterval> memo;
    };

    RatInterval value_at_bits(const DyadicRational& t, unsigned bits) const;
    const RatInterval& rec(Snapshot& snap, unsigned level, const mpz_class& k) const;

    mutable std::mutex mu_;
    mutable std::map<unsigned, std::shared_ptr<Snapshot>> snaps_;
    unsigned cap_bits_;
};

// Enclosure of A(t): bridge recursion with memoization and width refinement.
RatInterval bridge_value(const DyadicRational& t, Precision p, const BridgeCache& cache);

// Bisection bracket [t_lo, t_hi] with t_hi - t_lo <= tol and certified
// A(t_lo) <= x <= A(t_hi). Collapses at the endpoints x = 0 and x = 1.
std::pair<DyadicRational, DyadicRational> bridge_inverse(const Rational& x,
                                                         const DyadicRational& tol,
                                                         const BridgeCache& cache);

// DomainError for x > 1 carrying the only bound the problem still provides there.
class BellmanDomainError : public DomainError {
public:
    BellmanDomainError(const std::string& what, Rational upper)
        : DomainError(what), upper_bound_(std::move(upper)) {}
    const Rational& upper_bound() const { return upper_bound_; }  // 1/(1+x^2)

private:
    Rational upper_bound_;
};

// B(x) = 1 for x <= 0, 1 - A^-1(x) on [0,1]; enclosure of width <= 2^-p.bits.
// DomainError (with the 1/(1+x^2) bound attached) for x > 1.
RatInterval big_b(const Rational& x, Precision p, const BridgeCache& cache);
// Monotone extension to interval arguments (requires x.hi <= 1).
RatInterval big_b_interval(const RatInterval& x, Precision p, const BridgeCache& cache);

// The relaxed problem's answer: 1 for x <= 0, exactly 1/(1+x^2) for x >= 0.
Rational tilde_b(const Rational& x);
RatInterval tilde_b_interval(const RatInterval& x);

enum class TripleCheck { Holds, Violated, Inconclusive };

// Bellman inequality B(M[x_-,x_+]) >= (B(x_-)+B(x_+))/2 for tilde_b, checked
// exactly in rational arithmetic (M^2 is rational), equality included.
TripleCheck check_bellman_triple_tilde(const Rational& x_minus, const Rational& x_plus);

// Generic certified check against an enclosure evaluator. Defining triples
// (x_- = A(s), x_+ = A(t) around a new grid point) make the inequality an
// exact equality, which no interval refinement can certify: those escalate
// to the cap and come back Inconclusive. audit_midpoint_inequality treats
// them structurally instead.
using BellmanEvaluator = std::function<RatInterval(const RatInterval&, Precision)>;
TripleCheck check_bellman_triple(const BellmanEvaluator& b, const Rational& x_minus,
                                 const Rational& x_plus, Precision p, unsigned cap_bits);

// A(t)/t non-decreasing across consecutive points of D_n \ {0} (certified
// strict, except the vacuous n = 1 case).
TripleCheck check_ratio_monotone(unsigned n, Precision p, const BridgeCache& cache);

// Grid audits used by the property suite. Each returns the number of
// instances checked and throws InconclusiveError (with the offending grid
// point in the message) on a certification failure; a Violated outcome
// throws std::logic_error since it would disprove a theorem.
std::size_t audit_upper_bound_2t(unsigned n, Precision p, const BridgeCache& cache);
std::size_t audit_neighbor_bound(unsigned n, Precision p, const BridgeCache& cache);
std::size_t audit_strict_monotone(unsigned n, Precision p, const BridgeCache& cache);
// A((s+t)/2) >= M[A(s), A(t)] over D_n x D_n; definitional pairs (s, t
// adjacent around a new grid point) hold as identities and are counted.
std::size_t audit_midpoint_inequality(unsigned n, Precision p, const BridgeCache& cache);

} // namespace cww
