#include "hyptel/polyz.hpp"

#include <algorithm>

#include "hyptel/errors.hpp"
#include "hyptel/modp.hpp"

namespace hyptel {

namespace {
const Int kZero(0);
}

PolyZ::PolyZ(const Int& constant) {
    if (constant != 0) c_.push_back(constant);
}

PolyZ::PolyZ(long constant) {
    if (constant != 0) c_.push_back(Int(constant));
}

PolyZ::PolyZ(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }

PolyZ PolyZ::x() { return monomial(Int(1), 1); }

PolyZ PolyZ::monomial(const Int& coeff, int deg) {
    PolyZ p;
    if (coeff != 0) {
        p.c_.assign(static_cast<std::size_t>(deg) + 1, kZero);
        p.c_.back() = coeff;
    }
    return p;
}

const Int& PolyZ::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return kZero;
    return c_[static_cast<std::size_t>(i)];
}

const Int& PolyZ::lc() const { return c_.empty() ? kZero : c_.back(); }

void PolyZ::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

PolyZ PolyZ::operator-() const {
    PolyZ r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

PolyZ PolyZ::operator+(const PolyZ& o) const {
    PolyZ r;
    r.c_.resize(std::max(c_.size(), o.c_.size()), kZero);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r.c_[i] += o.c_[i];
    r.trim();
    return r;
}

PolyZ PolyZ::operator-(const PolyZ& o) const {
    PolyZ r;
    r.c_.resize(std::max(c_.size(), o.c_.size()), kZero);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r.c_[i] -= o.c_[i];
    r.trim();
    return r;
}

namespace {

// Naive product into r (r preallocated, zeroed).
void mul_basecase(const std::vector<Int>& a, const std::vector<Int>& b,
                  std::vector<Int>& r) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0) continue;
            mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        }
    }
}

// Karatsuba above this size; below it the naive loop wins.
constexpr std::size_t kKaratsubaCutoff = 24;

void mul_rec(const std::vector<Int>& a, const std::vector<Int>& b,
             std::vector<Int>& r) {
    if (a.size() < kKaratsubaCutoff || b.size() < kKaratsubaCutoff) {
        mul_basecase(a, b, r);
        return;
    }
    std::size_t h = std::max(a.size(), b.size()) / 2;
    if (a.size() <= h || b.size() <= h) {
        mul_basecase(a, b, r);
        return;
    }
    std::vector<Int> a0(a.begin(), a.begin() + h), a1(a.begin() + h, a.end());
    std::vector<Int> b0(b.begin(), b.begin() + h), b1(b.begin() + h, b.end());
    std::vector<Int> z0(a0.size() + b0.size() - 1, kZero);
    std::vector<Int> z2(a1.size() + b1.size() - 1, kZero);
    mul_rec(a0, b0, z0);
    mul_rec(a1, b1, z2);
    std::vector<Int> sa(std::max(a0.size(), a1.size()), kZero);
    std::vector<Int> sb(std::max(b0.size(), b1.size()), kZero);
    for (std::size_t i = 0; i < a0.size(); ++i) sa[i] += a0[i];
    for (std::size_t i = 0; i < a1.size(); ++i) sa[i] += a1[i];
    for (std::size_t i = 0; i < b0.size(); ++i) sb[i] += b0[i];
    for (std::size_t i = 0; i < b1.size(); ++i) sb[i] += b1[i];
    std::vector<Int> z1(sa.size() + sb.size() - 1, kZero);
    mul_rec(sa, sb, z1);
    for (std::size_t i = 0; i < z0.size(); ++i) z1[i] -= z0[i];
    for (std::size_t i = 0; i < z2.size(); ++i) z1[i] -= z2[i];
    for (std::size_t i = 0; i < z0.size(); ++i) r[i] += z0[i];
    for (std::size_t i = 0; i < z1.size(); ++i) r[i + h] += z1[i];
    for (std::size_t i = 0; i < z2.size(); ++i) r[i + 2 * h] += z2[i];
}

}  // namespace

PolyZ PolyZ::operator*(const PolyZ& o) const {
    if (is_zero() || o.is_zero()) return PolyZ();
    PolyZ r;
    r.c_.assign(c_.size() + o.c_.size() - 1, kZero);
    mul_rec(c_, o.c_, r.c_);
    r.trim();
    return r;
}

PolyZ PolyZ::mul_scalar(const Int& s) const {
    if (s == 0) return PolyZ();
    PolyZ r = *this;
    for (auto& v : r.c_) v *= s;
    return r;
}

PolyZ PolyZ::mul_xpow(int k) const {
    if (is_zero() || k == 0) return *this;
    PolyZ r;
    r.c_.assign(c_.size() + static_cast<std::size_t>(k), kZero);
    std::copy(c_.begin(), c_.end(), r.c_.begin() + k);
    return r;
}

PolyZ PolyZ::divexact(const PolyZ& o) const {
    if (o.is_zero()) throw DivisionByZero("polynomial division by zero");
    if (is_zero()) return PolyZ();
    if (degree() < o.degree()) throw InternalError("divexact: degree too small");
    std::vector<Int> rem = c_;
    std::vector<Int> q(c_.size() - o.c_.size() + 1, kZero);
    for (int i = static_cast<int>(q.size()) - 1; i >= 0; --i) {
        Int& top = rem[static_cast<std::size_t>(i) + o.c_.size() - 1];
        if (top == 0) continue;
        Int qi, r;
        mpz_tdiv_qr(qi.get_mpz_t(), r.get_mpz_t(), top.get_mpz_t(), o.lc().get_mpz_t());
        if (r != 0) throw InternalError("divexact: inexact leading division");
        q[static_cast<std::size_t>(i)] = qi;
        for (std::size_t j = 0; j < o.c_.size(); ++j) {
            mpz_submul(rem[i + j].get_mpz_t(), qi.get_mpz_t(), o.c_[j].get_mpz_t());
        }
    }
    for (const auto& v : rem) {
        if (v != 0) throw InternalError("divexact: nonzero remainder");
    }
    return PolyZ(std::move(q));
}

bool PolyZ::divides(const PolyZ& o) const {
    if (is_zero()) return o.is_zero();
    if (o.is_zero()) return true;
    if (o.degree() < degree()) return false;
    // Trial division with early bailout on inexact steps.
    std::vector<Int> rem = o.c_;
    for (int i = static_cast<int>(rem.size() - c_.size()); i >= 0; --i) {
        Int& top = rem[static_cast<std::size_t>(i) + c_.size() - 1];
        if (top == 0) continue;
        Int qi, r;
        mpz_tdiv_qr(qi.get_mpz_t(), r.get_mpz_t(), top.get_mpz_t(), lc().get_mpz_t());
        if (r != 0) return false;
        for (std::size_t j = 0; j < c_.size(); ++j) {
            mpz_submul(rem[i + j].get_mpz_t(), qi.get_mpz_t(), c_[j].get_mpz_t());
        }
    }
    return std::all_of(rem.begin(), rem.end(), [](const Int& v) { return v == 0; });
}

Int PolyZ::content() const {
    Int g = 0;
    for (const auto& v : c_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        if (g == 1) break;
    }
    if (!c_.empty() && c_.back() < 0) g = -g;
    return g;
}

PolyZ PolyZ::primitive_part() const {
    if (is_zero()) return PolyZ();
    Int g = content();
    PolyZ r = *this;
    for (auto& v : r.c_) {
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    }
    return r;
}

Int PolyZ::eval(const Int& x0) const {
    Int acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x0 + *it;
    return acc;
}

Rat PolyZ::eval(const Rat& x0) const {
    Rat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x0 + Rat(*it);
    return acc;
}

uint64_t PolyZ::eval_mod(uint64_t x0, uint64_t p) const {
    uint64_t acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc = modp::add(modp::mul(acc, x0, p), modp::mod_int(*it, p), p);
    }
    return acc;
}

PolyZ PolyZ::taylor_shift(const Int& d) const {
    if (is_zero() || d == 0) return *this;
    // Synthetic division by (x - (-d)) repeatedly: classic O(deg^2) shift.
    std::vector<Int> r = c_;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        for (std::size_t j = r.size() - 1; j > i; --j) {
            mpz_addmul(r[j - 1].get_mpz_t(), r[j].get_mpz_t(), d.get_mpz_t());
        }
    }
    return PolyZ(std::move(r));
}

std::string PolyZ::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        const Int& v = coeff(i);
        if (v == 0) continue;
        Int a = v < 0 ? Int(-v) : v;
        if (out.empty()) {
            if (v < 0) out += "-";
        } else {
            out += v < 0 ? "-" : "+";
        }
        bool need_coeff = (a != 1) || i == 0;
        if (need_coeff) out += a.get_str();
        if (i > 0) {
            if (need_coeff) out += "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

namespace {

PolyZ from_modp(const std::vector<Int>& lifted) { return PolyZ(lifted); }

// Symmetric remainder in (-p/2, p/2].
Int symmetric(const Int& v, const Int& p) {
    Int r = v % p;
    if (r < 0) r += p;
    if (2 * r > p) r -= p;
    return r;
}

}  // namespace

PolyZ poly_gcd(const PolyZ& a, const PolyZ& b) {
    if (a.is_zero() && b.is_zero()) return PolyZ();
    if (a.is_zero()) return b.lc() < 0 ? -b : b;
    if (b.is_zero()) return a.lc() < 0 ? -a : a;
    Int ca = a.content(), cb = b.content();
    Int cg;
    mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    PolyZ pa = a.primitive_part(), pb = b.primitive_part();
    if (pa.degree() == 0 || pb.degree() == 0) return PolyZ(cg);

    // gcd of the leading coefficients bounds the gcd's leading coefficient.
    Int lg;
    mpz_gcd(lg.get_mpz_t(), pa.lc().get_mpz_t(), pb.lc().get_mpz_t());

    std::size_t prime_idx = 0;
    int best_deg = std::min(pa.degree(), pb.degree()) + 1;
    std::vector<Int> acc;   // CRT-accumulated coefficients (scaled by lg)
    Int modulus = 1;
    for (int tries = 0; tries < 200; ++tries) {
        uint64_t p = modp::nth_prime(prime_idx++);
        if (modp::mod_int(pa.lc(), p) == 0 || modp::mod_int(pb.lc(), p) == 0) continue;
        modp::PolyP ma, mb;
        for (const auto& v : pa.coeffs()) ma.push_back(modp::mod_int(v, p));
        for (const auto& v : pb.coeffs()) mb.push_back(modp::mod_int(v, p));
        modp::PolyP g = modp::gcd(ma, mb, p);
        int gdeg = static_cast<int>(g.size()) - 1;
        if (gdeg == 0) {
            // Coprime primitive parts: certain (degree can only shrink mod p).
            return PolyZ(cg);
        }
        if (gdeg > best_deg) continue;  // unlucky prime
        // Scale to leading coefficient lg mod p before lifting.
        uint64_t scale = modp::mul(modp::mod_int(lg, p), modp::inv(g.back(), p), p);
        std::vector<Int> img(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            mpz_class t;
            mpz_set_ui(t.get_mpz_t(), modp::mul(g[i], scale, p));
            img[i] = t;
        }
        mpz_class pz;
        mpz_set_ui(pz.get_mpz_t(), p);
        if (gdeg < best_deg) {
            best_deg = gdeg;
            acc = img;
            modulus = pz;
        } else {
            for (std::size_t i = 0; i < acc.size(); ++i) {
                acc[i] = modp::crt(acc[i], modulus, img[i], pz);
            }
            modulus *= pz;
        }
        std::vector<Int> sym(acc.size());
        for (std::size_t i = 0; i < acc.size(); ++i) sym[i] = symmetric(acc[i], modulus);
        PolyZ cand = from_modp(sym);
        if (!cand.is_zero()) {
            cand = cand.primitive_part();
            if (cand.divides(pa) && cand.divides(pb)) {
                return cand.mul_scalar(cg);
            }
        }
    }
    throw InternalError("modular polynomial gcd did not stabilize");
}

PolyZ poly_lcm(const PolyZ& a, const PolyZ& b) {
    if (a.is_zero() || b.is_zero()) return PolyZ();
    PolyZ g = poly_gcd(a, b);
    PolyZ l = (a * b).divexact(g);
    if (l.lc() < 0) l = -l;
    return l;
}

std::vector<Int> integer_roots(const PolyZ& a) {
    if (a.is_zero()) throw InvalidInput("integer roots of the zero polynomial");
    PolyZ p = a;
    // Strip powers of x: root 0.
    std::vector<Int> roots;
    std::size_t shift = 0;
    while (shift < p.coeffs().size() && p.coeffs()[shift] == 0) ++shift;
    if (shift > 0) {
        roots.push_back(Int(0));
        std::vector<Int> c(p.coeffs().begin() + shift, p.coeffs().end());
        p = PolyZ(std::move(c));
    }
    if (p.degree() <= 0) return roots;
    // Candidates divide the trailing coefficient; enumerate divisors.
    Int t = p.coeffs()[0];
    if (t < 0) t = -t;
    std::vector<Int> divisors;
    // Factor t by trial division + Pollard rho.
    std::vector<std::pair<Int, int>> fact;
    Int m = t;
    for (long d = 2; d <= 1000000L && m > 1; ++d) {
        Int dd(d);
        if (dd * dd > m) break;
        if (m % d == 0) {
            int e = 0;
            while (m % d == 0) { m /= d; ++e; }
            fact.emplace_back(Int(d), e);
        }
    }
    if (m > 1) {
        Int sq;
        mpz_sqrt(sq.get_mpz_t(), m.get_mpz_t());
        if (sq <= 1000000L) {
            // Fully below the trial bound: m is prime.
            fact.emplace_back(m, 1);
            m = 1;
        }
    }
    if (m > 1) {
        // Remaining cofactor: if prime keep it, else a simple rho split.
        std::vector<Int> stack{m};
        while (!stack.empty()) {
            Int v = stack.back();
            stack.pop_back();
            if (v == 1) continue;
            if (mpz_probab_prime_p(v.get_mpz_t(), 30)) {
                bool found = false;
                for (auto& pr : fact) {
                    if (pr.first == v) { pr.second++; found = true; break; }
                }
                if (!found) fact.emplace_back(v, 1);
                continue;
            }
            // Pollard rho with fixed increments; deterministic retries.
            Int d = v;
            for (unsigned c = 1; c < 32 && (d == v || d == 1); ++c) {
                Int x = 2, y = 2, g = 1;
                while (g == 1) {
                    x = (x * x + c) % v;
                    y = (y * y + c) % v;
                    y = (y * y + c) % v;
                    Int diff = x - y;
                    if (diff < 0) diff = -diff;
                    mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), v.get_mpz_t());
                }
                d = g;
            }
            if (d == v || d == 1) throw InternalError("factorization failed");
            stack.push_back(d);
            stack.push_back(v / d);
        }
    }
    divisors.push_back(Int(1));
    for (const auto& [pf, e] : fact) {
        std::size_t base = divisors.size();
        Int pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= pf;
            for (std::size_t j = 0; j < base; ++j) divisors.push_back(divisors[j] * pk);
        }
    }
    for (const auto& d : divisors) {
        if (p.eval(d) == 0) roots.push_back(d);
        Int nd = -d;
        if (p.eval(nd) == 0) roots.push_back(nd);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

}  // namespace hyptel
