#include "hyptel/rfuncnk.hpp"

#include "hyptel/errors.hpp"

namespace hyptel {

namespace {

// p with k replaced by (A*n + B*k + C)/D, returned as (q, D^deg_k) so that
// the substituted value equals q / D^deg_k.
std::pair<PolyNK, Int> subst_k_affine_poly(const PolyNK& p, const Int& A,
                                           const Int& B, const Int& C,
                                           const Int& D) {
    int dk = p.degree_k();
    if (dk <= 0) return {p, Int(1)};
    PolyNK repl = PolyNK::monomial(A, 1, 0) + PolyNK::monomial(B, 0, 1) +
                  PolyNK(C);
    // Powers of the replacement and of D.
    std::vector<PolyNK> rp(static_cast<std::size_t>(dk) + 1);
    std::vector<Int> dp(static_cast<std::size_t>(dk) + 1);
    rp[0] = PolyNK(1L);
    dp[0] = 1;
    for (int j = 1; j <= dk; ++j) {
        rp[static_cast<std::size_t>(j)] = rp[static_cast<std::size_t>(j - 1)] * repl;
        dp[static_cast<std::size_t>(j)] = dp[static_cast<std::size_t>(j - 1)] * D;
    }
    PolyNK out;
    std::vector<PolyZ> kc = p.k_coefficients();
    for (int j = 0; j <= dk; ++j) {
        const PolyZ& c = kc[static_cast<std::size_t>(j)];
        if (c.is_zero()) continue;
        out = out + PolyNK::from_polyz_n(c) * rp[static_cast<std::size_t>(j)]
                        .mul_scalar(dp[static_cast<std::size_t>(dk - j)]);
    }
    return {out, dp[static_cast<std::size_t>(dk)]};
}

}  // namespace

RFuncNK::RFuncNK(const Rat& v)
    : num_(PolyNK(Int(v.get_num()))), den_(PolyNK(Int(v.get_den()))) {}

RFuncNK::RFuncNK(const PolyNK& num, const PolyNK& den) : num_(num), den_(den) {
    if (den_.is_zero()) throw DivisionByZero("zero denominator");
    normalize();
}

RFuncNK RFuncNK::from_rfuncn(const RFuncN& f) {
    RFuncNK r;
    r.num_ = PolyNK::from_polyz_n(f.num());
    r.den_ = PolyNK::from_polyz_n(f.den());
    return r;
}

void RFuncNK::normalize() {
    if (num_.is_zero()) {
        den_ = PolyNK(1L);
        return;
    }
    PolyNK g = gcd_nk(num_, den_);
    if (!g.is_one()) {
        num_ = num_.divexact(g);
        den_ = den_.divexact(g);
    }
    if (den_.leading().second < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

RFuncNK RFuncNK::operator-() const {
    RFuncNK r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

RFuncNK RFuncNK::operator+(const RFuncNK& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    return RFuncNK(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RFuncNK RFuncNK::operator-(const RFuncNK& o) const { return *this + (-o); }

RFuncNK RFuncNK::operator*(const RFuncNK& o) const {
    if (is_zero() || o.is_zero()) return RFuncNK();
    return RFuncNK(num_ * o.num_, den_ * o.den_);
}

RFuncNK RFuncNK::operator/(const RFuncNK& o) const { return *this * o.inverse(); }

RFuncNK RFuncNK::inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero rational function");
    RFuncNK r;
    r.num_ = den_;
    r.den_ = num_;
    if (r.den_.leading().second < 0) {
        r.num_ = -r.num_;
        r.den_ = -r.den_;
    }
    return r;
}

RFuncNK RFuncNK::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    RFuncNK r(1L), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

RFuncNK RFuncNK::shifted(long dn, const Rat& dk) const {
    auto [pn, sn] = num_.shifted(dn, dk);
    auto [pd, sd] = den_.shifted(dn, dk);
    return RFuncNK(pn.mul_scalar(sd), pd.mul_scalar(sn));
}

RFuncNK RFuncNK::subst_k_affine(const Rat& alpha, const Rat& beta,
                                const Rat& gamma) const {
    Int D;
    mpz_lcm(D.get_mpz_t(), alpha.get_den().get_mpz_t(), beta.get_den().get_mpz_t());
    mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), gamma.get_den().get_mpz_t());
    Int A = Int(alpha.get_num()) * (D / Int(alpha.get_den()));
    Int B = Int(beta.get_num()) * (D / Int(beta.get_den()));
    Int C = Int(gamma.get_num()) * (D / Int(gamma.get_den()));
    auto [pn, sn] = subst_k_affine_poly(num_, A, B, C, D);
    auto [pd, sd] = subst_k_affine_poly(den_, A, B, C, D);
    return RFuncNK(pn.mul_scalar(sd), pd.mul_scalar(sn));
}

RFuncN RFuncNK::as_rfuncn() const {
    if (!k_free()) throw InternalError("as_rfuncn on a k-dependent function");
    auto take = [](const PolyNK& p) {
        if (p.is_zero()) return PolyZ();
        return p.k_coefficients()[0];
    };
    return RFuncN(take(num_), take(den_));
}

Rat RFuncNK::eval(const Rat& nv, const Rat& kv) const {
    Rat d = den_.eval(nv, kv);
    if (d == 0) {
        throw PoleAtPoint("pole at n = " + hyptel::to_string(nv) +
                          ", k = " + hyptel::to_string(kv));
    }
    return num_.eval(nv, kv) / d;
}

std::string RFuncNK::to_string() const {
    if (den_.is_one()) return num_.to_string();
    auto wrap = [](const PolyNK& p) {
        std::string s = p.to_string();
        return p.terms().size() > 1 ? "(" + s + ")" : s;
    };
    return wrap(num_) + "/" + wrap(den_);
}

}  // namespace hyptel
