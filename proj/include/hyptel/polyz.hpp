#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyptel/rational.hpp"

namespace hyptel {

// Dense univariate polynomial over Z.  c[i] is the coefficient of x^i; the
// zero polynomial has an empty coefficient vector and degree() == -1.
class PolyZ {
public:
    PolyZ() = default;
    explicit PolyZ(const Int& constant);
    explicit PolyZ(long constant);
    explicit PolyZ(std::vector<Int> coeffs);

    static PolyZ x();                       // the monomial x
    static PolyZ monomial(const Int& coeff, int deg);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    const Int& coeff(int i) const;          // 0 outside the support
    const Int& lc() const;                  // leading coefficient; 0 for zero
    const std::vector<Int>& coeffs() const { return c_; }

    PolyZ operator-() const;
    PolyZ operator+(const PolyZ& o) const;
    PolyZ operator-(const PolyZ& o) const;
    PolyZ operator*(const PolyZ& o) const;
    bool operator==(const PolyZ& o) const { return c_ == o.c_; }
    bool operator!=(const PolyZ& o) const { return c_ != o.c_; }

    PolyZ mul_scalar(const Int& s) const;
    PolyZ mul_xpow(int k) const;            // multiply by x^k

    // Exact division; throws InternalError if o does not divide *this.
    PolyZ divexact(const PolyZ& o) const;
    bool divides(const PolyZ& o) const;     // does *this divide o?

    // gcd of all coefficients, with the sign of the leading coefficient
    // (so primitive_part() has a positive leading coefficient).  content of
    // zero is 0.
    Int content() const;
    PolyZ primitive_part() const;

    Int eval(const Int& x0) const;
    Rat eval(const Rat& x0) const;
    uint64_t eval_mod(uint64_t x0, uint64_t p) const;
    PolyZ taylor_shift(const Int& d) const; // p(x + d)

    // Serialized with the given variable name, descending powers:
    // "2*n^2-n+3".  Zero prints "0".
    std::string to_string(const std::string& var) const;

private:
    void trim();
    std::vector<Int> c_;
};

// gcd with positive leading coefficient (modular algorithm with exact
// divisibility verification); gcd(0, 0) = 0.
PolyZ poly_gcd(const PolyZ& a, const PolyZ& b);
PolyZ poly_lcm(const PolyZ& a, const PolyZ& b);

// All integer roots, found from divisor candidates of the trailing
// coefficient and verified exactly.  Precondition: a != 0.
std::vector<Int> integer_roots(const PolyZ& a);

}  // namespace hyptel
