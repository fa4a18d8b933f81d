#include "vacua/formal_series.hpp"

#include <limits>
#include <stdexcept>

namespace vacua {

namespace {
const Rat kZeroRat(0);
constexpr long kInfExp = std::numeric_limits<long>::max() / 4;

int clamp_order(long o) {
    if (o >= FormalSeries::kExact) return FormalSeries::kExact;
    if (o <= -long(FormalSeries::kExact)) throw std::underflow_error("series order underflow");
    return int(o);
}

// Smallest exponent at which s could carry a nonzero coefficient: known terms
// start at the valuation, a fully unknown tail starts at the certified order,
// and an exact zero never contributes.
long low_exponent(const FormalSeries& s) {
    if (!s.known_zero()) return s.valuation();
    return s.is_exact() ? kInfExp : s.order();
}
}  // namespace

FormalSeries FormalSeries::monomial(int exp, const Rat& c) {
    FormalSeries s;
    s.set(exp, c);
    return s;
}

FormalSeries FormalSeries::zero(int order) {
    FormalSeries s;
    s.order_ = order;
    return s;
}

void FormalSeries::truncate(int order) {
    if (order < order_) order_ = order;
    c_.erase(c_.lower_bound(order_), c_.end());
}

int FormalSeries::valuation() const {
    return c_.empty() ? kExact : c_.begin()->first;
}

const Rat& FormalSeries::coeff(int exp) const {
    if (exp >= order_) throw std::out_of_range("FormalSeries: coefficient beyond certified order");
    return coeff_or_zero(exp);
}

const Rat& FormalSeries::coeff_or_zero(int exp) const {
    auto it = c_.find(exp);
    return it == c_.end() ? kZeroRat : it->second;
}

void FormalSeries::set(int exp, const Rat& c) {
    if (exp >= order_) return;
    if (is_zero(c))
        c_.erase(exp);
    else
        c_[exp] = c;
}

FormalSeries FormalSeries::operator+(const FormalSeries& o) const {
    FormalSeries r = zero(std::min(order_, o.order_));
    for (const auto& [e, v] : c_) r.set(e, v);
    for (const auto& [e, v] : o.c_) r.set(e, r.coeff_or_zero(e) + v);
    return r;
}

FormalSeries FormalSeries::operator-(const FormalSeries& o) const { return *this + (-o); }

FormalSeries FormalSeries::operator-() const {
    FormalSeries r = zero(order_);
    for (const auto& [e, v] : c_) r.set(e, -v);
    return r;
}

FormalSeries FormalSeries::operator*(const FormalSeries& o) const {
    // Each factor's unknown tail enters the product at its certified order
    // plus the lowest possible exponent of the other factor.
    long b = kInfExp;
    if (!is_exact()) b = std::min(b, long(order_) + low_exponent(o));
    if (!o.is_exact()) b = std::min(b, long(o.order_) + low_exponent(*this));
    FormalSeries r = zero(clamp_order(b));
    for (const auto& [e1, a] : c_)
        for (const auto& [e2, c] : o.c_) {
            long e = long(e1) + e2;
            if (e >= r.order_) continue;
            r.set(int(e), r.coeff_or_zero(int(e)) + a * c);
        }
    return r;
}

FormalSeries FormalSeries::operator*(const Rat& c) const {
    if (is_zero(c)) return FormalSeries();  // exact zero
    FormalSeries r = zero(order_);
    for (const auto& [e, v] : c_) r.set(e, v * c);
    return r;
}

FormalSeries FormalSeries::derivative() const {
    FormalSeries r = zero(is_exact() ? kExact : order_ - 1);
    for (const auto& [e, v] : c_)
        if (e != 0) r.set(e - 1, v * Rat(e));
    return r;
}

Rat FormalSeries::residue() const {
    if (order_ <= -1) throw std::out_of_range("residue: series not certified at exponent -1");
    return coeff_or_zero(-1);
}

FormalSeries FormalSeries::reciprocal() const {
    if (known_zero() && is_exact()) throw std::domain_error("reciprocal of zero series");
    if (known_zero()) throw std::domain_error("reciprocal: leading term unknown");
    int v = valuation();
    const Rat lead = c_.begin()->second;
    if (is_exact()) {
        if (c_.size() == 1) return monomial(-v, Rat(1) / lead);
        throw std::domain_error("reciprocal: truncate exact non-monomial series first");
    }
    // f = lead xi^v (1 + u), val(u) >= 1:  1/f = lead^{-1} xi^{-v} sum_k (-u)^k
    int uord = order_ - v;
    FormalSeries u = zero(uord);
    for (const auto& [e, c] : c_)
        if (e != v) u.set(e - v, c / lead);
    long uval = low_exponent(u);
    if (uval <= 0) throw std::logic_error("reciprocal: normalization failed");
    FormalSeries geom(Rat(1));
    geom.truncate(uord);
    FormalSeries upow(Rat(1));
    for (long k = 1; k * uval < uord; ++k) {
        upow = upow * u;
        if (upow.known_zero() && upow.is_exact()) break;
        geom = (k % 2) ? geom - upow : geom + upow;
    }
    FormalSeries r = zero(clamp_order(long(uord) - v));
    for (const auto& [e, c] : geom.terms()) r.set(e - v, c / lead);
    return r;
}

FormalSeries FormalSeries::pow(long e) const {
    if (e < 0) return reciprocal().pow(-e);
    FormalSeries acc(Rat(1));
    FormalSeries base = *this;
    long n = e;
    while (n > 0) {
        if (n & 1) acc = acc * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return acc;
}

FormalSeries FormalSeries::compose(const FormalSeries& f) const {
    if (!f.known_zero() && f.valuation() < 1)
        throw std::domain_error("compose: inner series must have positive valuation");
    if (f.known_zero() && !f.is_exact())
        throw std::domain_error("compose: inner series has no known terms");
    long v = f.known_zero() ? 1 : f.valuation();

    // Unknown outer coefficients g_e (e >= order_) enter at e*v; the unknown
    // inner tail first shows up through the lowest outer term's derivative.
    long bound = is_exact() ? kInfExp : long(order_) * v;
    if (!f.is_exact() && !known_zero())
        bound = std::min(bound, (long(valuation()) - 1) * v + f.order());

    FormalSeries result = zero(clamp_order(bound));
    FormalSeries finv;
    bool have_inv = false;
    for (const auto& [e, c] : c_) {
        FormalSeries p;
        if (e >= 0) {
            p = f.pow(e);
        } else {
            if (!have_inv) {
                FormalSeries ftrunc = f;
                if (f.is_exact() && f.terms().size() > 1)
                    ftrunc.truncate(clamp_order(bound + (long(-valuation()) + 1) * v + 1));
                finv = ftrunc.reciprocal();
                have_inv = true;
            }
            p = finv.pow(-e);
        }
        p.truncate(result.order());
        result = result + p * c;
    }
    return result;
}

FormalSeries FormalSeries::inverse_under_composition(int order) const {
    if (known_zero() || valuation() != 1 || is_zero(coeff_or_zero(1)))
        throw std::domain_error("inverse_under_composition: need valuation exactly 1");
    if (!is_exact() && order_ < order)
        throw std::out_of_range("inverse_under_composition: input not certified to requested order");
    const Rat a = coeff_or_zero(1);
    FormalSeries g = monomial(1, Rat(1) / a);
    g.truncate(order);
    for (int k = 2; k < order; ++k) {
        // adding eps*xi^k to g perturbs (this o g) at xi^k by a*eps
        Rat delta = compose(g).coeff(k);
        if (!is_zero(delta)) g.set(k, -delta / a);
    }
    return g;
}

bool FormalSeries::agrees_with(const FormalSeries& o, int through_order) const {
    if (order_ < through_order || o.order_ < through_order)
        throw std::out_of_range("agrees_with: order not certified");
    for (const auto& [e, v] : c_)
        if (e < through_order && v != o.coeff_or_zero(e)) return false;
    for (const auto& [e, v] : o.c_)
        if (e < through_order && v != coeff_or_zero(e)) return false;
    return true;
}

FormalSeries formal_exp(const VectorField& l, int order) {
    if (!l.tail.known_zero() && l.tail.valuation() < 2)
        throw std::domain_error("formal_exp: tail must vanish to second order");
    if (sgn(l.scale) <= 0) throw std::domain_error("formal_exp: scale must be positive");
    if (l.tail.known_zero() && l.tail.is_exact()) return FormalSeries::monomial(1, l.scale);
    FormalSeries h = FormalSeries::monomial(1, Rat(1));
    h.truncate(std::min(order, l.tail.is_exact() ? order : l.tail.order()));
    FormalSeries term = h;
    Rat fact(1);
    for (int k = 1; k < order; ++k) {
        term = l.tail * term.derivative();
        term.truncate(h.order());
        if (term.known_zero()) break;
        fact *= k;
        h = h + term * (Rat(1) / fact);
    }
    return h * l.scale;
}

VectorField formal_log(const FormalSeries& h, int order) {
    if (h.known_zero() || h.valuation() != 1 || is_zero(h.coeff_or_zero(1)))
        throw std::domain_error("formal_log: need h = a xi + higher order");
    if (!h.is_exact() && h.order() < order)
        throw std::out_of_range("formal_log: input not certified to requested order");
    Rat a = h.coeff_or_zero(1);
    if (sgn(a) <= 0) throw std::domain_error("formal_log: leading coefficient must be positive");
    FormalSeries hu = h * (Rat(1) / a);
    VectorField l;
    l.scale = a;
    l.tail = FormalSeries::zero(order);
    for (int k = 2; k < order; ++k) {
        // adding eps*xi^k to the tail perturbs the flow at xi^k by eps
        FormalSeries e = formal_exp(VectorField{Rat(1), l.tail}, order);
        Rat delta = hu.coeff_or_zero(k) - e.coeff_or_zero(k);
        if (!is_zero(delta)) l.tail.set(k, delta);
    }
    return l;
}

FormalSeries schwarzian(const FormalSeries& h, int order) {
    if (h.known_zero() || h.valuation() != 1)
        throw std::domain_error("schwarzian: need a coordinate change h = a xi + higher order");
    FormalSeries ht = h;
    ht.truncate(clamp_order(long(order) + 4));
    FormalSeries h1 = ht.derivative(), h2 = h1.derivative(), h3 = h2.derivative();
    FormalSeries r = h3 * h1.reciprocal() - (h2 * h2) * (h1 * h1).reciprocal() * rat(3, 2);
    r.truncate(order);
    return r;
}

FormalSeries pole_expansion(const Rat& center, const Rat& pole, int k, int order) {
    if (k < 0) throw std::invalid_argument("pole_expansion: negative pole order");
    if (center == pole) return FormalSeries::monomial(-k);
    FormalSeries base = FormalSeries::monomial(1);
    base.set(0, center - pole);
    if (k > 0) base.truncate(order + 1);
    return base.pow(-long(k));
}

}  // namespace vacua
