#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "hyptel/errors.hpp"

namespace hyptel {

// Arbitrary-precision integers and rationals.  mpq_class keeps exactly the
// canonical form we need (gcd(num, den) = 1, den > 0, zero = 0/1) as long as
// values are produced through arithmetic or canonicalize().
using Int = mpz_class;
using Rat = mpq_class;

inline Int int_from_string(const std::string& s) {
    try {
        return Int(s);
    } catch (const std::invalid_argument&) {
        throw InvalidInput("not an integer literal: '" + s + "'");
    }
}

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Int& z) { return z.get_str(); }

// "p/q", or just "p" for integers.
inline std::string to_string(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rat rat_pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    if (base == 0 && e < 0) throw DivisionByZero("0 raised to a negative power");
    Rat out;
    unsigned long ae = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(mpq_numref(out.get_mpq_t()), mpq_numref(base.get_mpq_t()), ae);
    mpz_pow_ui(mpq_denref(out.get_mpq_t()), mpq_denref(base.get_mpq_t()), ae);
    if (e < 0) {
        if (out == 0) throw DivisionByZero("0 raised to a negative power");
        mpq_inv(out.get_mpq_t(), out.get_mpq_t());
    }
    out.canonicalize();
    return out;
}

// Truncated long value with overflow check; used for small structural
// constants (shifts, exponents) that must fit machine words.
inline long to_long_checked(const Int& z, const char* what) {
    if (!z.fits_slong_p()) throw InvalidInput(std::string(what) + " out of machine range");
    return z.get_si();
}

}  // namespace hyptel
