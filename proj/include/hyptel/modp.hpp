#pragma once

#include <cstdint>
#include <vector>

#include "hyptel/rational.hpp"

namespace hyptel {

// Arithmetic mod a word-size prime (p < 2^62), used for fast polynomial gcd
// probes and for the multi-modular linear algebra in the guesser.
namespace modp {

inline uint64_t add(uint64_t a, uint64_t b, uint64_t p) {
    uint64_t s = a + b;
    return s >= p ? s - p : s;
}
inline uint64_t sub(uint64_t a, uint64_t b, uint64_t p) { return a >= b ? a - b : a + p - b; }
inline uint64_t mul(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}
uint64_t pow(uint64_t a, uint64_t e, uint64_t p);
uint64_t inv(uint64_t a, uint64_t p);

uint64_t mod_int(const Int& z, uint64_t p);
// num/den mod p; throws InternalError if den vanishes mod p (caller screens
// primes against denominators first).
uint64_t mod_rat(const Rat& q, uint64_t p);

// Deterministic sequence of 62-bit primes: nth_prime(0), nth_prime(1), ...
uint64_t nth_prime(std::size_t idx);

// Dense polynomials mod p, coefficient i of x^i, no trailing zeros.
using PolyP = std::vector<uint64_t>;

PolyP trim(PolyP a);
PolyP mul(const PolyP& a, const PolyP& b, uint64_t p);
PolyP monic(const PolyP& a, uint64_t p);
// Remainder of a mod b (b != 0).
PolyP rem(const PolyP& a, const PolyP& b, uint64_t p);
PolyP gcd(PolyP a, PolyP b, uint64_t p);  // monic gcd

// Chinese remainders: value congruent to r1 mod m1 and r2 mod m2.
Int crt(const Int& r1, const Int& m1, const Int& r2, const Int& m2);

// Rational reconstruction of a mod m with |num|, den <= sqrt(m/2); returns
// false when no reconstruction exists.
bool rational_reconstruct(const Int& a, const Int& m, Rat& out);

}  // namespace modp

}  // namespace hyptel
