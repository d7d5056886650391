#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cww/bridge.hpp"
#include "cww/dyadic.hpp"
#include "cww/interval.hpp"

namespace cww {

// Finite binary tree of Haar coefficients encoding the recursively built
// extremal function at x = A(t):
//   f = tau h_I + sqrt(1-tau^2) * (f_left rescaled to [0,1/2], f_right to [1/2,1]).
// The left subtree is the extremal function for A(t+), the right one for
// A(t-): h_I = -1 on the left half, so {f >= x} there reduces to
// f_left >= X(x, +tau) = x_+ (and symmetrically on the right).
// Base cases: t = 0 is the zero function (Leaf) and t = 1/2 is the pure Haar
// function h_I, stored exactly instead of as tau = 1.
class ExtremalTree {
public:
    enum class Kind { Leaf, PureHaar, Node };
    using Ptr = std::shared_ptr<const ExtremalTree>;

    Kind kind = Kind::Leaf;
    DyadicRational t;                  // grid point this node realizes
    RatInterval tau;                   // Node only; certified inside (-1,1)
    Ptr left, right;                   // Node only

    unsigned depth() const;            // Leaf 0, PureHaar 1, Node 1 + max(children)
    std::string to_json() const;       // {"tau": {...}, "left": ..., "right": ...} /
                                       // {"leaf": true} / {"pure_haar": true}
};

ExtremalTree::Ptr build_extremal(const DyadicRational& t, Precision p, const BridgeCache& cache);

// Threshold x of a tail-measure query {f >= x}. Grid thresholds mean the
// exact value A(s) and are propagated through the recursion symbolically
// (X(A(t), ±tau_t) = A(t^±) exactly), so the defining equalities resolve;
// Exact and Enclosure thresholds are compared with certified refinement.
struct Threshold {
    enum class Kind { Grid, Exact, Enclosure };
    Kind kind = Kind::Exact;
    DyadicRational grid;
    Rational exact;
    RatInterval enclosure;

    static Threshold at_grid(const DyadicRational& s);
    static Threshold at_exact(const Rational& r);
    static Threshold at_enclosure(const RatInterval& e);
};

struct TailResult {
    DyadicRational measure;    // exact, denominator divides 2^depth
    RatInterval threshold;     // enclosure of the threshold actually used
    RatInterval strict_margin; // smallest certified gap among strict comparisons
};

// Exact measure of {f >= x} ({f >= x} is closed: equality counts in).
// Comparisons that stay inconclusive at the cap raise IndeterminateError
// naming the leaf.
TailResult tail_measure(const ExtremalTree::Ptr& f, const Threshold& x, Precision p,
                        const BridgeCache& cache);

// ess-sup (Sf)^2 via per-leaf path sums. For constructed trees the result is
// certified <= 1: paths ending at a pure Haar leaf telescope to exactly 1,
// all others equal 1 - prod(1 - tau^2) < 1.
RatInterval square_function_sup(const ExtremalTree::Ptr& f, Precision p,
                                const BridgeCache& cache);

struct LeafSquare {
    std::string address;   // "", "-", "+", "+-", ... (dyadic interval of constancy)
    bool exactly_one;      // path ends in the pure Haar function
    RatInterval value;     // enclosure of (Sf)^2 on that interval
};
std::vector<LeafSquare> square_function_leaves(const ExtremalTree::Ptr& f, Precision p,
                                               const BridgeCache& cache);

// Haar coefficient of every dyadic interval in the support, keyed by address.
std::map<std::string, RatInterval> haar_coefficients(const ExtremalTree::Ptr& f, Precision p,
                                                     const BridgeCache& cache);

struct LeafValue {
    std::string address;   // region where f is constant
    Rational measure;      // its length
    RatInterval value;     // enclosure of the constant value of f there
};
std::vector<LeafValue> leaf_values(const ExtremalTree::Ptr& f, Precision p,
                                   const BridgeCache& cache);

} // namespace cww
