#pragma once

#include <string>

#include "hyptel/polynk.hpp"
#include "hyptel/rfuncn.hpp"

namespace hyptel {

// Rational function in n and k over Q, kept canonical: numerator and
// denominator are coprime in Z[n,k] (including integer content) and the
// denominator has positive leading coefficient under graded lex.
class RFuncNK {
public:
    RFuncNK() : num_(), den_(1L) {}
    explicit RFuncNK(long v) : num_(v), den_(1L) {}
    explicit RFuncNK(const Rat& v);
    explicit RFuncNK(const PolyNK& p) : num_(p), den_(1L) {}
    RFuncNK(const PolyNK& num, const PolyNK& den);   // reduces; den != 0
    static RFuncNK from_rfuncn(const RFuncN& f);

    const PolyNK& num() const { return num_; }
    const PolyNK& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }

    RFuncNK operator-() const;
    RFuncNK operator+(const RFuncNK& o) const;
    RFuncNK operator-(const RFuncNK& o) const;
    RFuncNK operator*(const RFuncNK& o) const;
    RFuncNK operator/(const RFuncNK& o) const;       // DivisionByZero on o == 0
    RFuncNK& operator+=(const RFuncNK& o) { return *this = *this + o; }
    RFuncNK& operator-=(const RFuncNK& o) { return *this = *this - o; }
    RFuncNK& operator*=(const RFuncNK& o) { return *this = *this * o; }
    bool operator==(const RFuncNK& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }

    RFuncNK inverse() const;
    RFuncNK pow(long e) const;

    // Substitute n -> n + dn, k -> k + dk.
    RFuncNK shifted(long dn, const Rat& dk) const;
    // Substitute k -> alpha*n + beta*k + gamma.
    RFuncNK subst_k_affine(const Rat& alpha, const Rat& beta, const Rat& gamma) const;

    // True when k does not occur.
    bool k_free() const { return num_.degree_k() <= 0 && den_.degree_k() <= 0; }
    RFuncN as_rfuncn() const;                        // requires k_free()

    Rat eval(const Rat& nv, const Rat& kv) const;    // PoleAtPoint on zero den
    bool has_pole_at(const Rat& nv, const Rat& kv) const {
        return den_.eval(nv, kv) == 0;
    }

    // "(n+k)/(n-k)"; "0"; "n+k" when the denominator is 1.
    std::string to_string() const;

private:
    void normalize();
    PolyNK num_, den_;
};

}  // namespace hyptel
