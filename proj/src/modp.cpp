#include "hyptel/modp.hpp"

#include <mutex>

#include "hyptel/errors.hpp"

namespace hyptel {
namespace modp {

uint64_t pow(uint64_t a, uint64_t e, uint64_t p) {
    uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mul(r, a, p);
        a = mul(a, a, p);
        e >>= 1;
    }
    return r;
}

uint64_t inv(uint64_t a, uint64_t p) {
    a %= p;
    if (a == 0) throw DivisionByZero("inverse of 0 mod p");
    return pow(a, p - 2, p);
}

uint64_t mod_int(const Int& z, uint64_t p) {
    // operator% keeps the sign of the dividend
    mpz_class pz;
    mpz_set_ui(pz.get_mpz_t(), p);
    Int m = z % pz;
    if (m < 0) m += pz;
    return mpz_get_ui(m.get_mpz_t());
}

uint64_t mod_rat(const Rat& q, uint64_t p) {
    uint64_t num = mod_int(Int(q.get_num()), p);
    uint64_t den = mod_int(Int(q.get_den()), p);
    if (den == 0) throw InternalError("denominator vanishes mod chosen prime");
    return mul(num, inv(den, p), p);
}

uint64_t nth_prime(std::size_t idx) {
    static std::vector<uint64_t> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    if (cache.empty()) {
        mpz_class base, q;
        mpz_ui_pow_ui(base.get_mpz_t(), 2, 62);
        mpz_nextprime(q.get_mpz_t(), base.get_mpz_t());
        cache.push_back(mpz_get_ui(q.get_mpz_t()));
    }
    while (cache.size() <= idx) {
        mpz_class p, q;
        mpz_set_ui(p.get_mpz_t(), cache.back());
        mpz_nextprime(q.get_mpz_t(), p.get_mpz_t());
        cache.push_back(mpz_get_ui(q.get_mpz_t()));
    }
    return cache[idx];
}

PolyP trim(PolyP a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

PolyP mul(const PolyP& a, const PolyP& b, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    PolyP r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] = add(r[i + j], mul(a[i], b[j], p), p);
        }
    }
    return trim(std::move(r));
}

PolyP monic(const PolyP& a, uint64_t p) {
    if (a.empty()) return a;
    uint64_t s = inv(a.back(), p);
    PolyP r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = mul(a[i], s, p);
    return r;
}

PolyP rem(const PolyP& a, const PolyP& b, uint64_t p) {
    if (b.empty()) throw DivisionByZero("polynomial remainder by zero mod p");
    PolyP r = a;
    uint64_t binv = inv(b.back(), p);
    while (r.size() >= b.size()) {
        uint64_t q = mul(r.back(), binv, p);
        std::size_t off = r.size() - b.size();
        if (q != 0) {
            for (std::size_t i = 0; i < b.size(); ++i) {
                r[off + i] = sub(r[off + i], mul(q, b[i], p), p);
            }
        }
        r.pop_back();
        while (!r.empty() && r.back() == 0) r.pop_back();
        if (r.size() < b.size()) break;
    }
    return r;
}

PolyP gcd(PolyP a, PolyP b, uint64_t p) {
    a = trim(std::move(a));
    b = trim(std::move(b));
    while (!b.empty()) {
        PolyP r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a, p);
}

Int crt(const Int& r1, const Int& m1, const Int& r2, const Int& m2) {
    // x = r1 + m1 * t with t = (r2 - r1) / m1 mod m2
    Int inv_m1;
    if (mpz_invert(inv_m1.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t()) == 0) {
        throw InternalError("crt moduli not coprime");
    }
    Int t = ((r2 - r1) * inv_m1) % m2;
    if (t < 0) t += m2;
    return r1 + m1 * t;
}

bool rational_reconstruct(const Int& a, const Int& m, Rat& out) {
    // Half-gcd stopping criterion: |r| <= sqrt(m/2), |t| <= sqrt(m/2).
    Int bound;
    mpz_sqrt(bound.get_mpz_t(), Int(m / 2).get_mpz_t());
    Int r0 = m, r1 = a % m;
    if (r1 < 0) r1 += m;
    Int t0 = 0, t1 = 1;
    while (r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int t2 = t0 - q * t1;
        r0 = std::move(r1); r1 = std::move(r2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    if (t1 == 0) return false;
    Int den = t1 < 0 ? Int(-t1) : t1;
    Int num = t1 < 0 ? Int(-r1) : r1;
    if (den > bound) return false;
    Int g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g != 1) {
        // Not coprime: reconstruction is ambiguous, reject.
        return false;
    }
    out = make_rat(num, den);
    return true;
}

}  // namespace modp
}  // namespace hyptel
