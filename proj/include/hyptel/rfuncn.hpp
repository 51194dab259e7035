#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hyptel/polyz.hpp"

namespace hyptel {

// Rational function in n over Q, kept canonical at all times: numerator and
// denominator are coprime integer polynomials (including integer content)
// and the denominator has positive leading coefficient.  RFuncN(0) has
// num = 0, den = 1.
class RFuncN {
public:
    RFuncN() : num_(), den_(1L) {}
    explicit RFuncN(long v) : num_(v), den_(1L) {}
    explicit RFuncN(const Int& v) : num_(v), den_(1L) {}
    explicit RFuncN(const Rat& v);
    explicit RFuncN(const PolyZ& p) : num_(p), den_(1L) {}
    RFuncN(const PolyZ& num, const PolyZ& den);   // reduces; den != 0

    const PolyZ& num() const { return num_; }
    const PolyZ& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }
    // Only valid when is_polynomial() and num_ is constant.
    bool is_constant() const { return den_.is_one() && num_.degree() <= 0; }
    Rat constant_value() const;                   // requires is_constant()

    RFuncN operator-() const;
    RFuncN operator+(const RFuncN& o) const;
    RFuncN operator-(const RFuncN& o) const;
    RFuncN operator*(const RFuncN& o) const;
    RFuncN operator/(const RFuncN& o) const;      // DivisionByZero on o == 0
    RFuncN& operator+=(const RFuncN& o) { return *this = *this + o; }
    RFuncN& operator-=(const RFuncN& o) { return *this = *this - o; }
    RFuncN& operator*=(const RFuncN& o) { return *this = *this * o; }
    RFuncN& operator/=(const RFuncN& o) { return *this = *this / o; }
    bool operator==(const RFuncN& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }

    RFuncN inverse() const;                       // DivisionByZero on zero
    RFuncN pow(long e) const;                     // negative e inverts

    // Substitute n -> n + j.
    RFuncN shifted(long j) const;

    // Exact evaluation; PoleAtPoint when the denominator vanishes.
    Rat eval(const Rat& v) const;
    bool has_pole_at(const Rat& v) const { return den_.eval(v) == 0; }

    // Evaluation mod p at n = v; nullopt when the denominator vanishes mod p.
    std::optional<std::uint64_t> eval_mod(std::uint64_t p, std::uint64_t v) const;

    // "n+1", "(n+1)/(n^2-3)", "2/3", "0".
    std::string to_string() const;

private:
    void normalize();
    PolyZ num_, den_;
};

}  // namespace hyptel
