#pragma once

// Truncated Laurent series over Rat in one formal variable, with the exact
// order bookkeeping needed to certify every coefficient that is reported.
// A series knows its coefficients for exponents < order(); asking beyond the
// certified order is an error rather than a silent zero.

#include <climits>
#include <map>

#include "vacua/matrix.hpp"
#include "vacua/rational.hpp"

namespace vacua {

class FormalSeries {
public:
    static constexpr int kExact = INT_MAX / 4;  // polynomial: all tails known zero

    FormalSeries() : order_(kExact) {}
    explicit FormalSeries(const Rat& c) : order_(kExact) { set(0, c); }

    static FormalSeries monomial(int exp, const Rat& c = Rat(1));
    static FormalSeries zero(int order = kExact);

    int order() const { return order_; }
    void truncate(int order);

    // Lowest exponent with nonzero known coefficient; kExact when none.
    int valuation() const;

    const Rat& coeff(int exp) const;    // certified coefficient; throws past order
    const Rat& coeff_or_zero(int exp) const;  // no certification check
    void set(int exp, const Rat& c);
    bool known_zero() const { return c_.empty(); }
    bool is_exact() const { return order_ >= kExact; }

    const std::map<int, Rat>& terms() const { return c_; }

    FormalSeries operator+(const FormalSeries& o) const;
    FormalSeries operator-(const FormalSeries& o) const;
    FormalSeries operator*(const FormalSeries& o) const;
    FormalSeries operator*(const Rat& c) const;
    FormalSeries operator-() const;
    bool operator==(const FormalSeries& o) const { return order_ == o.order_ && c_ == o.c_; }

    FormalSeries derivative() const;
    Rat residue() const;  // coefficient of exponent -1

    // Multiplicative inverse, valuation must be finite and leading coeff nonzero.
    FormalSeries reciprocal() const;

    // Integral power, negative exponents through reciprocal().
    FormalSeries pow(long e) const;

    // this(f): requires val(f) >= 1; Laurent heads of *this go through 1/f.
    FormalSeries compose(const FormalSeries& f) const;

    // Compositional inverse of h = a xi + ..., a != 0, certified to `order`.
    FormalSeries inverse_under_composition(int order) const;

    bool agrees_with(const FormalSeries& o, int through_order) const;

private:
    std::map<int, Rat> c_;
    int order_;
};

// Vector field (log a) xi d/dxi + tail(xi) d/dxi with tail in xi^2 Q[[xi]].
// The scale is stored multiplicatively (as a, the flow multiplier) so the
// exponential stays exact; the pair denotes the coordinate change
// (a xi) composed-with flow(tail), matching the operator-level factorization
// used by the module coordinate-change action.
struct VectorField {
    Rat scale{1};        // flow multiplier a = e^alpha
    FormalSeries tail;   // valuation >= 2

    bool operator==(const VectorField& o) const { return scale == o.scale && tail == o.tail; }
};

// Time-one flow of the field, a power series a xi + O(xi^2).
FormalSeries formal_exp(const VectorField& l, int order);

// Inverse of formal_exp on series with positive rational leading coefficient.
VectorField formal_log(const FormalSeries& h, int order);

// h'''/h' - (3/2)(h''/h')^2 for h = a xi + O(xi^2).
FormalSeries schwarzian(const FormalSeries& h, int order);

// Expansion of (z - pole)^(-k) in the local coordinate xi = z - center,
// exact monomial when center == pole.
FormalSeries pole_expansion(const Rat& center, const Rat& pole, int k, int order);

}  // namespace vacua
