#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyptel/polyz.hpp"
#include "hyptel/rational.hpp"

namespace hyptel {

// Exponent pair (deg_n, deg_k) ordered graded-lex with n before k: compare
// total degree first, then deg_n.  Map iteration runs ascending; the leading
// term is the last entry.
struct ExpNK {
    int dn = 0;
    int dk = 0;
    friend bool operator==(const ExpNK&, const ExpNK&) = default;
};

struct GradedLexLess {
    bool operator()(const ExpNK& a, const ExpNK& b) const {
        int ta = a.dn + a.dk, tb = b.dn + b.dk;
        if (ta != tb) return ta < tb;
        if (a.dn != b.dn) return a.dn < b.dn;
        return a.dk < b.dk;
    }
};

// Sparse bivariate polynomial over Z in variables n and k.  No zero
// coefficients are stored; the empty map is the zero polynomial.
class PolyNK {
public:
    using TermMap = std::map<ExpNK, Int, GradedLexLess>;

    PolyNK() = default;
    explicit PolyNK(const Int& constant);
    explicit PolyNK(long constant);
    static PolyNK monomial(const Int& coeff, int dn, int dk);
    static PolyNK var_n();
    static PolyNK var_k();
    static PolyNK from_polyz_n(const PolyZ& p);   // polynomial in n only
    // a*n + b*k + c
    static PolyNK affine(const Int& a, const Int& b, const Int& c);

    bool is_zero() const { return t_.empty(); }
    bool is_one() const;
    const TermMap& terms() const { return t_; }
    int degree_n() const;
    int degree_k() const;
    int total_degree() const;                     // -1 for zero
    const Int& coeff(int dn, int dk) const;
    // Leading term under graded-lex; zero polynomial has no leading term.
    std::pair<ExpNK, Int> leading() const;

    PolyNK operator-() const;
    PolyNK operator+(const PolyNK& o) const;
    PolyNK operator-(const PolyNK& o) const;
    PolyNK operator*(const PolyNK& o) const;
    bool operator==(const PolyNK& o) const { return t_ == o.t_; }
    bool operator!=(const PolyNK& o) const { return !(t_ == o.t_); }

    PolyNK mul_scalar(const Int& s) const;
    PolyNK pow(int e) const;

    // Exact division (throws InternalError when not divisible).
    PolyNK divexact(const PolyNK& o) const;
    // Division attempt: returns quotient only when o divides exactly.
    std::optional<PolyNK> try_divide(const PolyNK& o) const;

    Int content() const;                          // signed like PolyZ::content
    PolyNK primitive_part() const;

    Rat eval(const Rat& n0, const Rat& k0) const;
    // Coefficients of k^j as polynomials in n.
    std::vector<PolyZ> k_coefficients() const;
    static PolyNK from_k_coefficients(const std::vector<PolyZ>& cs);
    PolyZ coeff_of_k(int j) const;

    // p(n + dn, k + dk) with rational dk: returns q with
    // q(n, k) = p(n + dn, k + dk) * scale, scale a positive integer.
    std::pair<PolyNK, Int> shifted(long dn, const Rat& dk) const;
    // Substitute k -> r (a rational number); result is a polynomial in n
    // over Q, returned as (PolyZ, positive integer denominator).
    std::pair<PolyZ, Int> subst_k_rat(const Rat& r) const;

    // Expanded form, terms in descending graded-lex order: "2*n+3*k",
    // "n^2-2*n*k+k^2-1"; zero prints "0".
    std::string to_string() const;

private:
    void set(int dn, int dk, Int v);
    TermMap t_;
    friend PolyNK gcd_nk(const PolyNK&, const PolyNK&);
};

// Integer-affine polynomial a*n + b*k + c, primitive (gcd(a,b,c) = 1) with
// b > 0, or b == 0 and a > 0 (pure-n factors keep the same container).
struct AffinePoly {
    Int a, b, c;
    PolyNK to_poly() const { return PolyNK::affine(a, b, c); }
    // Root in k for b != 0: k = -(a*n + c)/b.
    friend bool operator==(const AffinePoly&, const AffinePoly&) = default;
};

struct AffineFactorization {
    Int unit = 1;                         // overall integer content (signed)
    PolyZ content_n = PolyZ(1L);          // n-only part (positive leading coeff)
    std::vector<std::pair<AffinePoly, int>> factors;   // affine^multiplicity
    PolyNK leftover = PolyNK(1L);         // non-affine k-dependent part
    bool complete() const { return leftover.is_one(); }
};

// Factor out every integer-affine-in-k factor (and the n-only content).
// unit * content_n * prod factors^mult * leftover == input, exactly.
AffineFactorization factor_affine_k(const PolyNK& p);

// Complete factorization into the k-free content (one entry of k-degree 0,
// omitted when it is 1) and integer-affine-in-k irreducible factors with
// multiplicities.  Throws UnsupportedDenominator, carrying the residual
// factor, when some k-dependent factor is not affine.
std::vector<std::pair<PolyNK, int>> factor_k(const PolyNK& d);

// Polynomial gcd over Z[n,k] (primitive-part gcd via monic Euclid in k over
// Q(n) plus content handling); result has positive graded-lex leading
// coefficient.
PolyNK gcd_nk(const PolyNK& a, const PolyNK& b);

// Resultant in k of a(k) and b(k+j), as a polynomial in (n, j); used for
// integer-shift detection.  Variables of the result: n stays n, j takes the
// k slot.
PolyNK resultant_k_shifted(const PolyNK& a, const PolyNK& b);

}  // namespace hyptel
