#pragma once

#include <functional>
#include <string>
#include <utility>

#include "cww/rational.hpp"

namespace cww {

// Target enclosure width 2^(-bits).
struct Precision {
    unsigned bits = 128;
};

inline constexpr unsigned kDefaultPrecisionBits = 128;
inline constexpr unsigned kDefaultPrecisionCap = 4096;

enum class Ordering { Less, Greater, Inconclusive };

// Closed interval with rational endpoints enclosing an exact real value.
// All arithmetic is outward: the result encloses every x op y with x, y in
// the operands. Rational +,-,*,/ are exact, so only sqrt introduces width.
class RatInterval {
public:
    RatInterval() = default;
    RatInterval(Rational lo, Rational hi);
    static RatInterval point(const Rational& r) { return RatInterval(r, r); }

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    Rational width() const { return hi_ - lo_; }
    Rational midpoint() const { return (lo_ + hi_) / 2; }
    bool is_point() const { return lo_ == hi_; }
    bool contains(const Rational& r) const { return lo_ <= r && r <= hi_; }
    bool contains_zero() const { return contains(0); }
    bool intersects(const RatInterval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }

    RatInterval operator-() const { return RatInterval(-hi_, -lo_); }
    friend RatInterval operator+(const RatInterval& a, const RatInterval& b);
    friend RatInterval operator-(const RatInterval& a, const RatInterval& b);
    friend RatInterval operator*(const RatInterval& a, const RatInterval& b);
    friend RatInterval operator/(const RatInterval& a, const RatInterval& b);  // DomainError if 0 in b

    // Tighter than (*this) * (*this) when the interval straddles zero.
    RatInterval square() const;
    RatInterval abs() const;

    // Smallest interval containing both.
    static RatInterval hull(const RatInterval& a, const RatInterval& b);
    // Enclosure of max / min of two enclosed reals.
    static RatInterval max(const RatInterval& a, const RatInterval& b);
    static RatInterval min(const RatInterval& a, const RatInterval& b);

    // Optional outward rounding of the endpoints to denominators <= 2^(bits+8);
    // keeps enclosure, bounds memory. Off by default everywhere.
    RatInterval coarsen(unsigned bits) const;

    std::string to_string() const;

    friend bool operator==(const RatInterval& a, const RatInterval& b) {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

private:
    Rational lo_, hi_;
};

RatInterval operator+(const RatInterval& a, const Rational& b);
RatInterval operator*(const Rational& a, const RatInterval& b);

// Certified enclosure [l, h] of sqrt over v: l^2 <= v.lo and h^2 >= v.hi,
// h - l <= (sqrt(v.hi) - sqrt(v.lo)) + 2^(-p.bits). Exact for perfect squares
// of point intervals. DomainError if v.lo < 0.
RatInterval sqrt_enclosure(const RatInterval& v, Precision p);

// Less iff a.hi < b.lo, Greater iff a.lo > b.hi; never wrong, may be inconclusive.
Ordering compare_strict(const RatInterval& a, const RatInterval& b);

// Certified sign of the real enclosed by make(bits), retrying with doubled
// precision up to cap_bits. Returns Less (negative) / Greater (positive) or
// throws InconclusiveError at the cap. `what` names the comparison for errors.
Ordering sign_with_refinement(const std::function<RatInterval(unsigned)>& make,
                              unsigned start_bits, unsigned cap_bits,
                              const std::string& what);

} // namespace cww
