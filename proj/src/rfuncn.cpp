#include "hyptel/rfuncn.hpp"

#include "hyptel/errors.hpp"
#include "hyptel/modp.hpp"

namespace hyptel {

RFuncN::RFuncN(const Rat& v) : num_(v.get_num()), den_(v.get_den()) {}

RFuncN::RFuncN(const PolyZ& num, const PolyZ& den) : num_(num), den_(den) {
    if (den_.is_zero()) throw DivisionByZero("zero denominator");
    normalize();
}

void RFuncN::normalize() {
    if (num_.is_zero()) {
        den_ = PolyZ(1L);
        return;
    }
    PolyZ g = poly_gcd(num_, den_);
    if (!g.is_one()) {
        num_ = num_.divexact(g);
        den_ = den_.divexact(g);
    }
    // poly_gcd already includes the integer content gcd, so only the sign of
    // the denominator can still be off.
    if (den_.lc() < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

Rat RFuncN::constant_value() const {
    if (!is_constant()) throw InternalError("constant_value on non-constant");
    return make_rat(num_.coeff(0), den_.coeff(0));
}

RFuncN RFuncN::operator-() const {
    RFuncN r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

RFuncN RFuncN::operator+(const RFuncN& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    RFuncN r;
    PolyZ g = poly_gcd(den_, o.den_);
    if (g.is_one()) {
        r.num_ = num_ * o.den_ + o.num_ * den_;
        r.den_ = den_ * o.den_;
    } else {
        PolyZ da = den_.divexact(g), db = o.den_.divexact(g);
        r.num_ = num_ * db + o.num_ * da;
        r.den_ = den_ * db;
    }
    r.normalize();
    return r;
}

RFuncN RFuncN::operator-(const RFuncN& o) const { return *this + (-o); }

RFuncN RFuncN::operator*(const RFuncN& o) const {
    if (is_zero() || o.is_zero()) return RFuncN();
    PolyZ g1 = poly_gcd(num_, o.den_);
    PolyZ g2 = poly_gcd(o.num_, den_);
    RFuncN r;
    r.num_ = num_.divexact(g1) * o.num_.divexact(g2);
    r.den_ = den_.divexact(g2) * o.den_.divexact(g1);
    if (r.den_.lc() < 0) {
        r.num_ = -r.num_;
        r.den_ = -r.den_;
    }
    return r;
}

RFuncN RFuncN::operator/(const RFuncN& o) const { return *this * o.inverse(); }

RFuncN RFuncN::inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero rational function");
    RFuncN r;
    r.num_ = den_;
    r.den_ = num_;
    if (r.den_.lc() < 0) {
        r.num_ = -r.num_;
        r.den_ = -r.den_;
    }
    return r;
}

RFuncN RFuncN::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    RFuncN r(1L), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

RFuncN RFuncN::shifted(long j) const {
    if (j == 0 || (num_.degree() <= 0 && den_.degree() <= 0)) return *this;
    RFuncN r;
    r.num_ = num_.taylor_shift(Int(j));
    r.den_ = den_.taylor_shift(Int(j));
    // Shifting preserves coprimality and the leading coefficients.
    return r;
}

Rat RFuncN::eval(const Rat& v) const {
    Rat d = den_.eval(v);
    if (d == 0) throw PoleAtPoint("pole at n = " + hyptel::to_string(v));
    return num_.eval(v) / d;
}

std::optional<std::uint64_t> RFuncN::eval_mod(std::uint64_t p, std::uint64_t v) const {
    std::uint64_t d = den_.eval_mod(p, v);
    if (d == 0) return std::nullopt;
    return modp::mul(num_.eval_mod(p, v), modp::inv(d, p), p);
}

std::string RFuncN::to_string() const {
    if (den_.is_one()) return num_.to_string("n");
    auto nonzero_terms = [](const PolyZ& p) {
        int c = 0;
        for (const auto& v : p.coeffs())
            if (v != 0) ++c;
        return c;
    };
    std::string ns = num_.to_string("n");
    std::string ds = den_.to_string("n");
    std::string out = nonzero_terms(num_) > 1 ? "(" + ns + ")" : ns;
    out += "/";
    out += nonzero_terms(den_) > 1 ? "(" + ds + ")" : ds;
    return out;
}

}  // namespace hyptel
