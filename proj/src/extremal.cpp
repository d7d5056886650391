#include "cww/extremal.hpp"

#include <algorithm>

#include "json.hpp"

namespace cww {

unsigned ExtremalTree::depth() const {
    switch (kind) {
        case Kind::Leaf: return 0;
        case Kind::PureHaar: return 1;
        case Kind::Node: return 1 + std::max(left->depth(), right->depth());
    }
    return 0;
}

namespace {

nlohmann::ordered_json tree_json(const ExtremalTree& n) {
    nlohmann::ordered_json j;
    switch (n.kind) {
        case ExtremalTree::Kind::Leaf:
            j["leaf"] = true;
            break;
        case ExtremalTree::Kind::PureHaar:
            j["pure_haar"] = true;
            break;
        case ExtremalTree::Kind::Node:
            j["tau"] = {{"lo", n.tau.lo().to_string()}, {"hi", n.tau.hi().to_string()}};
            j["left"] = tree_json(*n.left);
            j["right"] = tree_json(*n.right);
            break;
    }
    return j;
}

} // namespace

std::string ExtremalTree::to_json() const { return tree_json(*this).dump(); }

ExtremalTree::Ptr build_extremal(const DyadicRational& t, Precision p, const BridgeCache& cache) {
    if (!t.in_unit_half()) throw DomainError("build_extremal: t outside [0, 1/2] or not dyadic");
    auto node = std::make_shared<ExtremalTree>();
    node->t = t;
    if (t.is_zero()) {
        node->kind = ExtremalTree::Kind::Leaf;
        return node;
    }
    if (t.level() == 1) {  // t = 1/2: the pure Haar function, tau = 1 held exactly
        node->kind = ExtremalTree::Kind::PureHaar;
        return node;
    }
    node->kind = ExtremalTree::Kind::Node;
    node->tau = cache.tau_at(t, p);
    node->left = build_extremal(t.right_parent(), p, cache);   // realizes x_+ = A(t+)
    node->right = build_extremal(t.left_parent(), p, cache);   // realizes x_- = A(t-)
    return node;
}

Threshold Threshold::at_grid(const DyadicRational& s) {
    Threshold t;
    t.kind = Kind::Grid;
    t.grid = s;
    // A(0) and A(1/2) are exact rationals; fold them into the Exact kind so
    // every comparison against them is decidable.
    if (s.is_zero()) {
        t.kind = Kind::Exact;
        t.exact = Rational(0);
    } else if (s.level() == 1) {
        t.kind = Kind::Exact;
        t.exact = Rational(1);
    }
    return t;
}

Threshold Threshold::at_exact(const Rational& r) {
    Threshold t;
    t.kind = Kind::Exact;
    t.exact = r;
    return t;
}

Threshold Threshold::at_enclosure(const RatInterval& e) {
    Threshold t;
    t.kind = Kind::Enclosure;
    t.enclosure = e;
    return t;
}

namespace {

// Signals "re-run the whole pass at doubled precision".
struct RetryTail {
    std::string leaf;
};

struct TailPass {
    const BridgeCache* cache;
    unsigned bits;
    unsigned cap;
    Rational margin;      // min certified gap seen (starts at +infinity marker)
    bool margin_set = false;

    void note_margin(const Rational& gap) {
        if (!margin_set || gap < margin) {
            margin = gap;
            margin_set = true;
        }
    }
};

RatInterval threshold_enclosure(const Threshold& x, TailPass& pass) {
    switch (x.kind) {
        case Threshold::Kind::Grid:
            return pass.cache->value(x.grid, Precision{pass.bits});
        case Threshold::Kind::Exact:
            return RatInterval::point(x.exact);
        case Threshold::Kind::Enclosure:
            return x.enclosure;
    }
    throw DomainError("unreachable threshold kind");
}

// measure{c >= x} over a unit-mass region for a constant c given exactly.
Rational constant_tail(const Rational& c, const Threshold& x, TailPass& pass,
                       const std::string& leaf) {
    if (x.kind == Threshold::Kind::Exact)
        return c >= x.exact ? Rational(1) : Rational(0);  // closed set: equality counts
    if (x.kind == Threshold::Kind::Enclosure && x.enclosure.is_point())
        return c >= x.enclosure.lo() ? Rational(1) : Rational(0);
    const RatInterval e = threshold_enclosure(x, pass);
    if (e.hi() < c) {
        pass.note_margin(c - e.hi());
        return Rational(1);
    }
    if (e.lo() > c) {
        pass.note_margin(e.lo() - c);
        return Rational(0);
    }
    throw RetryTail{leaf};
}

Rational tail_rec(const ExtremalTree& node, const Threshold& x, TailPass& pass,
                  const std::string& addr) {
    switch (node.kind) {
        case ExtremalTree::Kind::Leaf:
            return constant_tail(Rational(0), x, pass, addr.empty() ? "(root)" : addr);
        case ExtremalTree::Kind::PureHaar: {
            // h_I is -1 on the left half and +1 on the right half.
            const std::string leaf = addr.empty() ? "(root haar)" : addr;
            const bool exact_point =
                x.kind == Threshold::Kind::Exact ||
                (x.kind == Threshold::Kind::Enclosure && x.enclosure.is_point());
            if (exact_point) {
                const Rational r =
                    x.kind == Threshold::Kind::Exact ? x.exact : x.enclosure.lo();
                if (r <= Rational(-1)) return Rational(1);
                if (r <= Rational(1)) return Rational(1, 2);
                return Rational(0);
            }
            const RatInterval e = threshold_enclosure(x, pass);
            if (e.hi() < Rational(-1)) return Rational(1);
            if (e.lo() > Rational(1)) return Rational(0);
            if (e.lo() > Rational(-1) && e.hi() < Rational(1)) {
                pass.note_margin(std::min(e.lo() - Rational(-1), Rational(1) - e.hi()));
                return Rational(1, 2);
            }
            throw RetryTail{leaf};
        }
        case ExtremalTree::Kind::Node:
            break;
    }

    // On-grid threshold at the node's own grid point: the defining triple
    // maps it to the children's grid points exactly.
    if (x.kind == Threshold::Kind::Grid && x.grid == node.t) {
        const Rational ml =
            tail_rec(*node.left, Threshold::at_grid(node.t.right_parent()), pass, addr + "-");
        const Rational mr =
            tail_rec(*node.right, Threshold::at_grid(node.t.left_parent()), pass, addr + "+");
        return (ml + mr) / Rational(2);
    }

    const RatInterval e = threshold_enclosure(x, pass);
    const RatInterval tau = pass.cache->tau_at(node.t, Precision{pass.bits});
    const RatInterval xl = x_map(e, tau, Precision{pass.bits});
    const RatInterval xr = x_map(e, -tau, Precision{pass.bits});
    const Rational ml = tail_rec(*node.left, Threshold::at_enclosure(xl), pass, addr + "-");
    const Rational mr = tail_rec(*node.right, Threshold::at_enclosure(xr), pass, addr + "+");
    return (ml + mr) / Rational(2);
}

} // namespace

TailResult tail_measure(const ExtremalTree::Ptr& f, const Threshold& x, Precision p,
                        const BridgeCache& cache) {
    if (!f) throw DomainError("tail_measure: empty tree");
    std::string last_leaf;
    for (unsigned bits = p.bits; bits <= cache.cap_bits(); bits *= 2) {
        TailPass pass{&cache, bits, cache.cap_bits(), Rational(0), false};
        try {
            const Rational m = tail_rec(*f, x, pass, "");
            TailResult out;
            out.measure = DyadicRational::from_rational(m);
            out.threshold = threshold_enclosure(x, pass);
            out.strict_margin = pass.margin_set ? RatInterval::point(pass.margin)
                                                : RatInterval::point(Rational(0));
            return out;
        } catch (const RetryTail& r) {
            last_leaf = r.leaf;  // enclosure thresholds given by the caller
            if (x.kind == Threshold::Kind::Enclosure && !x.enclosure.is_point())
                break;  // cannot be refined further by us
        }
    }
    throw IndeterminateError("tail_measure: comparison at leaf '" + last_leaf +
                             "' inconclusive at the precision cap");
}

namespace {

void square_leaves_rec(const ExtremalTree& node, const std::string& addr,
                       const RatInterval& scale, const BridgeCache& cache, unsigned bits,
                       std::vector<LeafSquare>& out) {
    switch (node.kind) {
        case ExtremalTree::Kind::Leaf:
            // (Sf)^2 = 1 - prod(1 - tau^2) along the path, held as 1 - scale.
            out.push_back({addr, false, RatInterval::point(Rational(1)) - scale});
            return;
        case ExtremalTree::Kind::PureHaar:
            // The path telescopes: tau^2 + (1-tau^2)*1 = 1 exactly at each level.
            out.push_back({addr, true, RatInterval::point(Rational(1))});
            return;
        case ExtremalTree::Kind::Node: {
            const RatInterval tau = cache.tau_at(node.t, Precision{bits});
            const RatInterval next =
                scale * (RatInterval::point(Rational(1)) - tau.square());
            square_leaves_rec(*node.left, addr + "-", next, cache, bits, out);
            square_leaves_rec(*node.right, addr + "+", next, cache, bits, out);
            return;
        }
    }
}

} // namespace

std::vector<LeafSquare> square_function_leaves(const ExtremalTree::Ptr& f, Precision p,
                                               const BridgeCache& cache) {
    if (!f) throw DomainError("square_function_leaves: empty tree");
    for (unsigned bits = p.bits; bits <= cache.cap_bits(); bits *= 2) {
        std::vector<LeafSquare> out;
        square_leaves_rec(*f, "", RatInterval::point(Rational(1)), cache, bits, out);
        // The representation 1 - scale certifies <= 1 only once every scale
        // enclosure is inside [0, 1].
        const bool certified = std::all_of(out.begin(), out.end(), [](const LeafSquare& l) {
            return l.exactly_one || (l.value.hi() <= Rational(1) && l.value.lo() >= Rational(0));
        });
        if (certified) return out;
    }
    throw InconclusiveError("square_function_leaves: tau enclosures too wide at the cap");
}

RatInterval square_function_sup(const ExtremalTree::Ptr& f, Precision p,
                                const BridgeCache& cache) {
    const auto leaves = square_function_leaves(f, p, cache);
    RatInterval sup = leaves.front().value;
    for (const auto& l : leaves) sup = RatInterval::max(sup, l.value);
    return sup;
}

namespace {

void haar_rec(const ExtremalTree& node, const std::string& addr, const RatInterval& scale,
              const BridgeCache& cache, unsigned bits, Precision sqrt_p,
              std::map<std::string, RatInterval>& out) {
    switch (node.kind) {
        case ExtremalTree::Kind::Leaf:
            return;
        case ExtremalTree::Kind::PureHaar:
            out.emplace(addr, scale);
            return;
        case ExtremalTree::Kind::Node: {
            const RatInterval tau = cache.tau_at(node.t, Precision{bits});
            out.emplace(addr, scale * tau);
            const RatInterval s = sqrt_enclosure(
                RatInterval::point(Rational(1)) - tau.square(), sqrt_p);
            const RatInterval next = scale * s;
            haar_rec(*node.left, addr + "-", next, cache, bits, sqrt_p, out);
            haar_rec(*node.right, addr + "+", next, cache, bits, sqrt_p, out);
            return;
        }
    }
}

} // namespace

std::map<std::string, RatInterval> haar_coefficients(const ExtremalTree::Ptr& f, Precision p,
                                                     const BridgeCache& cache) {
    if (!f) throw DomainError("haar_coefficients: empty tree");
    std::map<std::string, RatInterval> out;
    haar_rec(*f, "", RatInterval::point(Rational(1)), cache, p.bits + 8, Precision{p.bits + 8},
             out);
    return out;
}

namespace {

void leaf_values_rec(const ExtremalTree& node, const std::string& addr, const Rational& measure,
                     const RatInterval& offset, const RatInterval& scale,
                     const BridgeCache& cache, unsigned bits, std::vector<LeafValue>& out) {
    switch (node.kind) {
        case ExtremalTree::Kind::Leaf:
            out.push_back({addr.empty() ? "(all)" : addr, measure, offset});
            return;
        case ExtremalTree::Kind::PureHaar: {
            out.push_back({addr + "-", measure / Rational(2), offset - scale});
            out.push_back({addr + "+", measure / Rational(2), offset + scale});
            return;
        }
        case ExtremalTree::Kind::Node: {
            const RatInterval tau = cache.tau_at(node.t, Precision{bits});
            const RatInterval s = sqrt_enclosure(
                RatInterval::point(Rational(1)) - tau.square(), Precision{bits});
            // f = tau h_I + sqrt(1-tau^2) * children: -tau offset on the left half.
            leaf_values_rec(*node.left, addr + "-", measure / Rational(2),
                            offset - scale * tau, scale * s, cache, bits, out);
            leaf_values_rec(*node.right, addr + "+", measure / Rational(2),
                            offset + scale * tau, scale * s, cache, bits, out);
            return;
        }
    }
}

} // namespace

std::vector<LeafValue> leaf_values(const ExtremalTree::Ptr& f, Precision p,
                                   const BridgeCache& cache) {
    if (!f) throw DomainError("leaf_values: empty tree");
    std::vector<LeafValue> out;
    leaf_values_rec(*f, "", Rational(1), RatInterval::point(Rational(0)),
                    RatInterval::point(Rational(1)), cache, p.bits + 8, out);
    return out;
}

} // namespace cww
