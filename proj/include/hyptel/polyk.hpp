#pragma once

#include <set>
#include <string>
#include <vector>

#include "hyptel/rfuncn.hpp"
#include "hyptel/rfuncnk.hpp"

namespace hyptel {

// Dense polynomial in k with RFuncN coefficients; c[i] is the coefficient of
// k^i.  The zero polynomial has an empty coefficient vector.
class PolyK {
public:
    PolyK() = default;
    explicit PolyK(std::vector<RFuncN> coeffs);
    explicit PolyK(const RFuncN& constant);
    static PolyK monomial(const RFuncN& coeff, int deg);
    static PolyK var_k();
    // Requires den(f) free of k; splits each k-coefficient over it.
    static PolyK from_rfuncnk(const RFuncNK& f);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const RFuncN& coeff(int i) const;       // 0 outside the support
    const RFuncN& lc() const;               // leading coefficient; 0 for zero
    const std::vector<RFuncN>& coeffs() const { return c_; }

    PolyK operator-() const;
    PolyK operator+(const PolyK& o) const;
    PolyK operator-(const PolyK& o) const;
    PolyK operator*(const PolyK& o) const;
    bool operator==(const PolyK& o) const { return c_ == o.c_; }
    PolyK mul_scalar(const RFuncN& s) const;

    // Quotient and remainder of division in k over the field Q(n).
    std::pair<PolyK, PolyK> divmod(const PolyK& o) const;   // o != 0
    PolyK monic() const;                    // zero stays zero

    // p(k + j) for rational j; p with n -> n + dn in every coefficient.
    PolyK shift_k(const Rat& j) const;
    PolyK shift_n(long dn) const;

    RFuncN eval_k(const RFuncN& v) const;   // substitute k = v(n)
    RFuncNK to_rfuncnk() const;

    std::string to_string() const;          // "k^2+(n+1)*k" style

private:
    void trim();
    std::vector<RFuncN> c_;
};

// Monic gcd in k over Q(n); InvalidInput when both are zero.
PolyK gcd_k(const PolyK& a, const PolyK& b);

// All j >= 0 such that gcd_k(a(k), b(k+j)) has positive degree, computed from
// integer roots of the resultant in k of a(k) and b(k+j) as a polynomial in j.
std::set<long> dispersion_set(const PolyK& a, const PolyK& b);

}  // namespace hyptel
