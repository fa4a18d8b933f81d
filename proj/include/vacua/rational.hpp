#pragma once

// Exact rational scalar used by every numeric path in the library.
// All series coefficients, matrix entries and pairings are carried as
// arbitrary-precision rationals; no floating point enters any computation.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace vacua {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

// Integral power; e >= 0 or b invertible (nonzero).
inline Rat rat_pow(const Rat& b, long e) {
    if (e == 0) return Rat(1);
    if (e < 0) {
        if (is_zero(b)) throw std::domain_error("negative power of zero");
        return rat_pow(Rat(1) / b, -e);
    }
    Rat acc(1), base(b);
    long n = e;
    while (n > 0) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

inline long rat_to_long(const Rat& r) {
    if (!is_integer(r)) throw std::domain_error("expected integer rational");
    if (!r.get_num().fits_slong_p()) throw std::overflow_error("integer too large for long");
    return r.get_num().get_si();
}

// Canonical text form "p/q" (plain "p" when q == 1); used by all serializers.
inline std::string rat_str(const Rat& r) {
    if (is_integer(r)) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline std::optional<Rat> rat_parse(const std::string& s) {
    if (s.empty()) return std::nullopt;
    try {
        Rat r(s);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

}  // namespace vacua
