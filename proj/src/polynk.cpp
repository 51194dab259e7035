#include "hyptel/polynk.hpp"

#include <algorithm>

#include "hyptel/errors.hpp"

namespace hyptel {

namespace {
const Int kZeroInt(0);
}

PolyNK::PolyNK(const Int& constant) {
    if (constant != 0) t_[{0, 0}] = constant;
}

PolyNK::PolyNK(long constant) {
    if (constant != 0) t_[{0, 0}] = Int(constant);
}

PolyNK PolyNK::monomial(const Int& coeff, int dn, int dk) {
    PolyNK p;
    if (coeff != 0) p.t_[{dn, dk}] = coeff;
    return p;
}

PolyNK PolyNK::var_n() { return monomial(Int(1), 1, 0); }
PolyNK PolyNK::var_k() { return monomial(Int(1), 0, 1); }

PolyNK PolyNK::from_polyz_n(const PolyZ& p) {
    PolyNK r;
    for (int i = 0; i <= p.degree(); ++i) {
        if (p.coeff(i) != 0) r.t_[{i, 0}] = p.coeff(i);
    }
    return r;
}

PolyNK PolyNK::affine(const Int& a, const Int& b, const Int& c) {
    PolyNK r;
    if (a != 0) r.t_[{1, 0}] = a;
    if (b != 0) r.t_[{0, 1}] = b;
    if (c != 0) r.t_[{0, 0}] = c;
    return r;
}

bool PolyNK::is_one() const {
    return t_.size() == 1 && t_.begin()->first == ExpNK{0, 0} && t_.begin()->second == 1;
}

int PolyNK::degree_n() const {
    int d = -1;
    for (const auto& [e, v] : t_) d = std::max(d, e.dn);
    return d;
}

int PolyNK::degree_k() const {
    int d = -1;
    for (const auto& [e, v] : t_) d = std::max(d, e.dk);
    return d;
}

int PolyNK::total_degree() const {
    if (t_.empty()) return -1;
    auto last = t_.rbegin();
    return last->first.dn + last->first.dk;
}

const Int& PolyNK::coeff(int dn, int dk) const {
    auto it = t_.find({dn, dk});
    return it == t_.end() ? kZeroInt : it->second;
}

std::pair<ExpNK, Int> PolyNK::leading() const {
    if (t_.empty()) throw InternalError("leading term of zero polynomial");
    auto last = t_.rbegin();
    return {last->first, last->second};
}

void PolyNK::set(int dn, int dk, Int v) {
    if (v == 0) {
        t_.erase({dn, dk});
    } else {
        t_[{dn, dk}] = std::move(v);
    }
}

PolyNK PolyNK::operator-() const {
    PolyNK r = *this;
    for (auto& [e, v] : r.t_) v = -v;
    return r;
}

PolyNK PolyNK::operator+(const PolyNK& o) const {
    PolyNK r = *this;
    for (const auto& [e, v] : o.t_) {
        auto [it, inserted] = r.t_.try_emplace(e, v);
        if (!inserted) {
            it->second += v;
            if (it->second == 0) r.t_.erase(it);
        }
    }
    return r;
}

PolyNK PolyNK::operator-(const PolyNK& o) const {
    PolyNK r = *this;
    for (const auto& [e, v] : o.t_) {
        auto [it, inserted] = r.t_.try_emplace(e, -v);
        if (!inserted) {
            it->second -= v;
            if (it->second == 0) r.t_.erase(it);
        }
    }
    return r;
}

PolyNK PolyNK::operator*(const PolyNK& o) const {
    PolyNK r;
    for (const auto& [ea, va] : t_) {
        for (const auto& [eb, vb] : o.t_) {
            ExpNK e{ea.dn + eb.dn, ea.dk + eb.dk};
            auto [it, inserted] = r.t_.try_emplace(e, Int());
            if (inserted) it->second = va * vb;
            else mpz_addmul(it->second.get_mpz_t(), va.get_mpz_t(), vb.get_mpz_t());
        }
    }
    for (auto it = r.t_.begin(); it != r.t_.end();) {
        if (it->second == 0) it = r.t_.erase(it);
        else ++it;
    }
    return r;
}

PolyNK PolyNK::mul_scalar(const Int& s) const {
    if (s == 0) return PolyNK();
    PolyNK r = *this;
    for (auto& [e, v] : r.t_) v *= s;
    return r;
}

PolyNK PolyNK::pow(int e) const {
    if (e < 0) throw InvalidInput("negative exponent on a polynomial");
    PolyNK acc(1L), base = *this;
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

std::optional<PolyNK> PolyNK::try_divide(const PolyNK& o) const {
    if (o.is_zero()) throw DivisionByZero("polynomial division by zero");
    PolyNK rem = *this;
    PolyNK q;
    auto [le, lcv] = o.leading();
    while (!rem.is_zero()) {
        auto [re, rc] = rem.leading();
        if (re.dn < le.dn || re.dk < le.dk) return std::nullopt;
        Int qc, rr;
        mpz_tdiv_qr(qc.get_mpz_t(), rr.get_mpz_t(), rc.get_mpz_t(), lcv.get_mpz_t());
        if (rr != 0) return std::nullopt;
        PolyNK mono = monomial(qc, re.dn - le.dn, re.dk - le.dk);
        q = q + mono;
        rem = rem - mono * o;
        if (!rem.is_zero()) {
            // Leading elimination must strictly decrease the leading term.
            auto [ne, nc] = rem.leading();
            if (!GradedLexLess{}(ne, re)) return std::nullopt;
        }
    }
    return q;
}

PolyNK PolyNK::divexact(const PolyNK& o) const {
    auto q = try_divide(o);
    if (!q) throw InternalError("bivariate divexact: not divisible");
    return *q;
}

Int PolyNK::content() const {
    Int g = 0;
    for (const auto& [e, v] : t_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        if (g == 1) break;
    }
    if (!t_.empty() && t_.rbegin()->second < 0) g = -g;
    return g;
}

PolyNK PolyNK::primitive_part() const {
    if (is_zero()) return PolyNK();
    Int g = content();
    PolyNK r = *this;
    for (auto& [e, v] : r.t_) {
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    }
    return r;
}

Rat PolyNK::eval(const Rat& n0, const Rat& k0) const {
    Rat acc = 0;
    for (const auto& [e, v] : t_) {
        acc += Rat(v) * rat_pow(n0, e.dn) * rat_pow(k0, e.dk);
    }
    return acc;
}

std::vector<PolyZ> PolyNK::k_coefficients() const {
    int dk = degree_k();
    std::vector<PolyZ> out;
    if (dk < 0) return out;
    std::vector<std::vector<Int>> raw(static_cast<std::size_t>(dk) + 1);
    for (const auto& [e, v] : t_) {
        auto& cs = raw[static_cast<std::size_t>(e.dk)];
        if (static_cast<int>(cs.size()) <= e.dn) cs.resize(static_cast<std::size_t>(e.dn) + 1, kZeroInt);
        cs[static_cast<std::size_t>(e.dn)] = v;
    }
    out.reserve(raw.size());
    for (auto& cs : raw) out.emplace_back(std::move(cs));
    return out;
}

PolyNK PolyNK::from_k_coefficients(const std::vector<PolyZ>& cs) {
    PolyNK r;
    for (std::size_t j = 0; j < cs.size(); ++j) {
        for (int i = 0; i <= cs[j].degree(); ++i) {
            if (cs[j].coeff(i) != 0) r.t_[{i, static_cast<int>(j)}] = cs[j].coeff(i);
        }
    }
    return r;
}

PolyZ PolyNK::coeff_of_k(int j) const {
    std::vector<Int> cs;
    for (const auto& [e, v] : t_) {
        if (e.dk != j) continue;
        if (static_cast<int>(cs.size()) <= e.dn) cs.resize(static_cast<std::size_t>(e.dn) + 1, kZeroInt);
        cs[static_cast<std::size_t>(e.dn)] = v;
    }
    return PolyZ(std::move(cs));
}

std::pair<PolyNK, Int> PolyNK::shifted(long dn, const Rat& dk) const {
    // Shift n first (integer), then expand the k-shift with binomials; a
    // rational dk = p/q scales the result by q^degree_k.
    std::vector<PolyZ> cs = k_coefficients();
    for (auto& c : cs) c = c.taylor_shift(Int(dn));
    int dkdeg = static_cast<int>(cs.size()) - 1;
    if (dkdeg < 0) return {PolyNK(), Int(1)};
    const Int& num = dk.get_num();
    const Int& den = dk.get_den();
    // result * den^dkdeg = sum_j c_j(n) * (k*den + num)^j * den^(dkdeg - j)
    PolyNK acc;
    PolyNK base = affine(Int(0), den, num);   // den*k + num
    PolyNK basepow(1L);
    std::vector<Int> denpow(static_cast<std::size_t>(dkdeg) + 1);
    denpow[0] = 1;
    for (int j = 1; j <= dkdeg; ++j) denpow[static_cast<std::size_t>(j)] = denpow[static_cast<std::size_t>(j - 1)] * den;
    for (int j = 0; j <= dkdeg; ++j) {
        if (!cs[static_cast<std::size_t>(j)].is_zero()) {
            PolyNK term = from_polyz_n(cs[static_cast<std::size_t>(j)]) * basepow;
            acc = acc + term.mul_scalar(denpow[static_cast<std::size_t>(dkdeg - j)]);
        }
        if (j < dkdeg) basepow = basepow * base;
    }
    return {acc, denpow[static_cast<std::size_t>(dkdeg)]};
}

std::pair<PolyZ, Int> PolyNK::subst_k_rat(const Rat& r) const {
    // p(n, p/q) * q^deg_k, by Horner in k.
    std::vector<PolyZ> cs = k_coefficients();
    int d = static_cast<int>(cs.size()) - 1;
    if (d < 0) return {PolyZ(), Int(1)};
    const Int& num = r.get_num();
    const Int& den = r.get_den();
    PolyZ acc = cs[static_cast<std::size_t>(d)];
    Int dp = 1;   // runs through den^(d-j)
    for (int j = d - 1; j >= 0; --j) {
        dp *= den;
        acc = acc.mul_scalar(num) + cs[static_cast<std::size_t>(j)].mul_scalar(dp);
    }
    return {acc, dp};
}

namespace {

// All positive divisors of |v| (v != 0).
std::vector<Int> positive_divisors(const Int& v) {
    Int m = v < 0 ? Int(-v) : v;
    std::vector<std::pair<Int, int>> fact;
    for (long d = 2; d <= 1000000L && m > 1; ++d) {
        Int dd(d);
        if (dd * dd > m) break;
        if (m % d == 0) {
            int e = 0;
            while (m % d == 0) { m /= d; ++e; }
            fact.emplace_back(Int(d), e);
        }
    }
    if (m > 1) fact.emplace_back(m, 1);   // prime or treated as such
    std::vector<Int> out{Int(1)};
    for (const auto& [p, e] : fact) {
        std::size_t base = out.size();
        Int pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
        }
    }
    return out;
}

// All rational roots of a nonzero PolyZ.
std::vector<Rat> rational_roots(const PolyZ& p) {
    std::vector<Rat> roots;
    if (p.degree() <= 0) return roots;
    std::size_t shift = 0;
    while (shift < p.coeffs().size() && p.coeffs()[shift] == 0) ++shift;
    if (shift > 0) roots.emplace_back(0);
    std::vector<Int> c(p.coeffs().begin() + shift, p.coeffs().end());
    PolyZ q{std::move(c)};
    if (q.degree() <= 0) return roots;
    std::vector<Int> nums = positive_divisors(q.coeffs()[0]);
    std::vector<Int> dens = positive_divisors(q.lc());
    for (const auto& nu : nums) {
        for (const auto& de : dens) {
            Int g;
            mpz_gcd(g.get_mpz_t(), nu.get_mpz_t(), de.get_mpz_t());
            if (g != 1) continue;
            Rat r = make_rat(nu, de);
            if (q.eval(r) == 0) roots.push_back(r);
            Rat mr = make_rat(-nu, de);
            if (q.eval(mr) == 0) roots.push_back(mr);
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

}  // namespace

AffineFactorization factor_affine_k(const PolyNK& p) {
    if (p.is_zero()) throw InvalidInput("factoring the zero polynomial");
    AffineFactorization out;
    out.unit = p.content();
    PolyNK cur = p.primitive_part();

    // n-only content.
    std::vector<PolyZ> cs = cur.k_coefficients();
    PolyZ content_n;
    for (const auto& c : cs) content_n = poly_gcd(content_n, c);
    if (!content_n.is_one() && !content_n.is_zero()) {
        for (auto& c : cs) c = c.divexact(content_n);
        cur = PolyNK::from_k_coefficients(cs);
    }
    out.content_n = content_n.is_zero() ? PolyZ(1L) : content_n;

    // Pure k powers.
    while (cur.degree_k() > 0) {
        std::vector<PolyZ> kc = cur.k_coefficients();
        if (!kc[0].is_zero()) break;
        kc.erase(kc.begin());
        cur = PolyNK::from_k_coefficients(kc);
        bool merged = false;
        for (auto& [f, m] : out.factors) {
            if (f.a == 0 && f.b == 1 && f.c == 0) { ++m; merged = true; break; }
        }
        if (!merged) out.factors.push_back({AffinePoly{Int(0), Int(1), Int(0)}, 1});
    }

    while (cur.degree_k() > 0) {
        int dk = cur.degree_k();
        PolyZ top = cur.coeff_of_k(dk);
        // Two specialization points where the k-degree stays exact.
        long n0 = 0;
        while (top.eval(Int(n0)) == 0) ++n0;
        long n1 = n0 + 1;
        while (top.eval(Int(n1)) == 0) ++n1;
        auto specialize = [&cur](long nv) {
            std::vector<Int> c;
            std::vector<PolyZ> kc = cur.k_coefficients();
            c.reserve(kc.size());
            for (const auto& q : kc) c.push_back(q.eval(Int(nv)));
            return PolyZ(std::move(c));
        };
        std::vector<Rat> roots0 = rational_roots(specialize(n0));
        std::vector<Rat> roots1 = rational_roots(specialize(n1));
        bool found = false;
        for (const auto& r0 : roots0) {
            for (const auto& r1 : roots1) {
                // Affine line k = alpha*n + gamma through (n0, r0), (n1, r1).
                Rat alpha = (r1 - r0) / Rat(n1 - n0);
                Rat gamma = r0 - alpha * Rat(n0);
                // b*k - b*alpha*n - b*gamma with b clearing denominators.
                Int b;
                mpz_lcm(b.get_mpz_t(), alpha.get_den().get_mpz_t(),
                        gamma.get_den().get_mpz_t());
                Int a = -Int(b * alpha.get_num() / alpha.get_den());
                Int c = -Int(b * gamma.get_num() / gamma.get_den());
                AffinePoly cand{a, b, c};
                PolyNK candp = cand.to_poly();
                auto q = cur.try_divide(candp);
                if (q) {
                    int mult = 1;
                    cur = *q;
                    while (true) {
                        auto q2 = cur.try_divide(candp);
                        if (!q2) break;
                        cur = *q2;
                        ++mult;
                    }
                    bool merged = false;
                    for (auto& [f, m] : out.factors) {
                        if (f == cand) { m += mult; merged = true; break; }
                    }
                    if (!merged) out.factors.push_back({cand, mult});
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
        if (!found) break;   // no affine factor left
    }

    if (cur.degree_k() <= 0) {
        // Whatever is left is a unit (all content was removed up front).
        if (!cur.is_one()) {
            if (cur == PolyNK(-1L)) {
                out.unit = -out.unit;
            } else if (cur.degree_k() == 0 && cur.degree_n() >= 1) {
                // An n-only factor appearing after affine extraction; fold it
                // into content_n.
                std::vector<PolyZ> rest = cur.k_coefficients();
                out.content_n = out.content_n * rest[0];
                if (out.content_n.lc() < 0) {
                    out.content_n = -out.content_n;
                    out.unit = -out.unit;
                }
            } else {
                throw InternalError("affine factorization left a non-unit constant");
            }
        }
        out.leftover = PolyNK(1L);
    } else {
        out.leftover = cur;
    }
    return out;
}

std::vector<std::pair<PolyNK, int>> factor_k(const PolyNK& d) {
    AffineFactorization fa = factor_affine_k(d);
    if (!fa.complete()) {
        throw UnsupportedDenominator("factor of k-degree >= 2 is not supported: " +
                                     fa.leftover.to_string());
    }
    std::vector<std::pair<PolyNK, int>> out;
    PolyNK content = PolyNK(fa.unit) * PolyNK::from_polyz_n(fa.content_n);
    if (!content.is_one()) out.emplace_back(content, 1);
    for (const auto& [f, m] : fa.factors) out.emplace_back(f.to_poly(), m);
    return out;
}

namespace {

// k-degree of a coefficient-vector view.
int kdeg(const std::vector<PolyZ>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i) {
        if (!v[static_cast<std::size_t>(i)].is_zero()) return i;
    }
    return -1;
}

void trim_kvec(std::vector<PolyZ>& v) {
    while (!v.empty() && v.back().is_zero()) v.pop_back();
}

PolyZ content_kvec(const std::vector<PolyZ>& v) {
    PolyZ g;
    for (const auto& c : v) g = poly_gcd(g, c);
    return g;
}

std::vector<PolyZ> primitive_kvec(const std::vector<PolyZ>& v, const PolyZ& cont) {
    std::vector<PolyZ> r;
    r.reserve(v.size());
    for (const auto& c : v) r.push_back(c.is_zero() ? PolyZ() : c.divexact(cont));
    return r;
}

int ndeg_kvec(const std::vector<PolyZ>& v) {
    int d = 0;
    for (const auto& c : v) d = std::max(d, c.degree());
    return d;
}

// Newton interpolation over Q; xs distinct, returns coefficients ascending.
std::vector<Rat> interp_q(const std::vector<long>& xs,
                          std::vector<Rat> ys) {
    std::size_t m = xs.size();
    for (std::size_t j = 1; j < m; ++j) {
        for (std::size_t i = m; i-- > j;) {
            ys[i] = (ys[i] - ys[i - 1]) / Rat(xs[i] - xs[i - j]);
        }
    }
    std::vector<Rat> res(m, Rat(0));
    std::vector<Rat> prod(m, Rat(0));
    prod[0] = 1;
    std::size_t plen = 1;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t t = 0; t < plen; ++t) res[t] += ys[j] * prod[t];
        if (j + 1 < m) {
            for (std::size_t t = plen; t-- > 0;) {
                prod[t + 1] += prod[t];
                prod[t] *= -Rat(xs[j]);
            }
            ++plen;
        }
    }
    return res;
}

// Images gcd: specialize n at integers, take univariate gcds in k, and
// interpolate the n-dependence of the gcd scaled to the leading coefficient
// bound.  Inputs are k-primitive with positive k-degree; the result is a
// candidate the caller must verify by exact division.  Points whose image
// degree exceeds the smallest seen are unlucky and dropped.
PolyNK gcd_kvec_images(const std::vector<PolyZ>& pa,
                       const std::vector<PolyZ>& pb, long start) {
    int da = kdeg(pa), db = kdeg(pb);
    const PolyZ& la = pa[static_cast<std::size_t>(da)];
    const PolyZ& lb = pb[static_cast<std::size_t>(db)];
    PolyZ lcg = poly_gcd(la, lb);
    std::size_t needed = static_cast<std::size_t>(
        std::min(ndeg_kvec(pa), ndeg_kvec(pb)) + lcg.degree() + 1);
    int target = std::min(da, db);
    std::vector<long> xs;
    std::vector<std::vector<Rat>> imgs;
    auto specialize = [](const std::vector<PolyZ>& v, long n0) {
        std::vector<Int> c;
        c.reserve(v.size());
        for (const auto& q : v) c.push_back(q.eval(Int(n0)));
        return PolyZ(std::move(c));
    };
    for (long v = start; xs.size() < needed; ++v) {
        if (la.eval(Int(v)) == 0 || lb.eval(Int(v)) == 0) continue;
        PolyZ g = poly_gcd(specialize(pa, v), specialize(pb, v));
        int dg = g.degree();
        if (dg == 0) return PolyNK(1L);
        if (dg > target) continue;
        if (dg < target) {
            target = dg;
            xs.clear();
            imgs.clear();
        }
        Rat scale = Rat(lcg.eval(Int(v))) / Rat(g.lc());
        std::vector<Rat> img(static_cast<std::size_t>(target) + 1);
        for (int i = 0; i <= target; ++i) {
            img[static_cast<std::size_t>(i)] = Rat(g.coeff(i)) * scale;
        }
        xs.push_back(v);
        imgs.push_back(std::move(img));
    }
    // Interpolate each k-coefficient, then clear the common denominator.
    std::vector<std::vector<Rat>> ncoeffs(static_cast<std::size_t>(target) + 1);
    Int den(1);
    for (int i = 0; i <= target; ++i) {
        std::vector<Rat> ys;
        ys.reserve(xs.size());
        for (const auto& img : imgs) ys.push_back(img[static_cast<std::size_t>(i)]);
        ncoeffs[static_cast<std::size_t>(i)] = interp_q(xs, std::move(ys));
        for (const auto& q : ncoeffs[static_cast<std::size_t>(i)]) {
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(),
                    q.get_den().get_mpz_t());
        }
    }
    std::vector<PolyZ> out(static_cast<std::size_t>(target) + 1);
    for (int i = 0; i <= target; ++i) {
        std::vector<Int> c;
        const auto& nc = ncoeffs[static_cast<std::size_t>(i)];
        c.reserve(nc.size());
        for (const auto& q : nc) {
            c.push_back(Int(q.get_num() * (den / q.get_den())));
        }
        out[static_cast<std::size_t>(i)] = PolyZ(std::move(c));
    }
    return PolyNK::from_k_coefficients(out).primitive_part();
}

// Pseudo-remainder of a by b in k over Z[n].
std::vector<PolyZ> prem_kvec(std::vector<PolyZ> a, const std::vector<PolyZ>& b) {
    int da = kdeg(a), db = kdeg(b);
    const PolyZ& lb = b[static_cast<std::size_t>(db)];
    while (da >= db) {
        PolyZ la = a[static_cast<std::size_t>(da)];
        for (auto& c : a) c = c * lb;
        for (int i = 0; i <= db; ++i) {
            a[static_cast<std::size_t>(da - db + i)] =
                a[static_cast<std::size_t>(da - db + i)] - la * b[static_cast<std::size_t>(i)];
        }
        trim_kvec(a);
        int nd = kdeg(a);
        if (nd >= da) throw InternalError("pseudo-division did not reduce degree");
        da = nd;
    }
    return a;
}

}  // namespace

PolyNK gcd_nk(const PolyNK& a, const PolyNK& b) {
    if (a.is_zero() && b.is_zero()) return PolyNK();
    if (a.is_zero()) return b.content() < 0 ? -b : b;
    if (b.is_zero()) return a.content() < 0 ? -a : a;
    if (a == b || a == -b) return a.content() < 0 ? -a : a;
    std::vector<PolyZ> va = a.k_coefficients(), vb = b.k_coefficients();
    PolyZ ca = content_kvec(va), cb = content_kvec(vb);
    PolyZ cg = poly_gcd(ca, cb);
    std::vector<PolyZ> pa = primitive_kvec(va, ca), pb = primitive_kvec(vb, cb);
    if (kdeg(pa) < kdeg(pb)) std::swap(pa, pb);
    if (kdeg(pb) > 0) {
        // Images first; a wrong candidate (all sample points unlucky) fails
        // the division check and we move the sample window.
        PolyNK pan = PolyNK::from_k_coefficients(pa);
        PolyNK pbn = PolyNK::from_k_coefficients(pb);
        for (int attempt = 0; attempt < 8; ++attempt) {
            PolyNK g = gcd_kvec_images(pa, pb, attempt * 97L);
            if (g.is_one()) {
                PolyNK c = PolyNK::from_polyz_n(cg);
                return c.content() < 0 ? -c : c;
            }
            if (pan.try_divide(g) && pbn.try_divide(g)) {
                PolyNK out = g * PolyNK::from_polyz_n(cg);
                return out.content() < 0 ? -out : out;
            }
        }
    }
    // Primitive PRS in k with full content removal at every step.
    while (kdeg(pb) > 0) {
        std::vector<PolyZ> r = prem_kvec(pa, pb);
        if (kdeg(r) < 0) {
            PolyNK g = PolyNK::from_k_coefficients(pb) * PolyNK::from_polyz_n(cg);
            if (g.content() < 0) g = -g;
            return g;
        }
        PolyZ cr = content_kvec(r);
        pa = std::move(pb);
        pb = primitive_kvec(r, cr);
    }
    // k-degree of pb is 0: primitive parts are coprime in k.
    PolyNK g = PolyNK::from_polyz_n(cg);
    if (g.content() < 0) g = -g;
    return g;
}

PolyNK resultant_k_shifted(const PolyNK& a, const PolyNK& b) {
    std::vector<PolyZ> ca = a.k_coefficients();
    int da = static_cast<int>(ca.size()) - 1;
    int db = b.degree_k();
    if (da < 1 || db < 1) throw InvalidInput("resultant needs positive k-degrees");
    // b(k+j) as coefficients of k^i in Z[n, j]; the j-degree uses the k slot.
    std::vector<PolyNK> cb(static_cast<std::size_t>(db) + 1);
    {
        std::vector<PolyZ> bk = b.k_coefficients();
        // binomials
        std::vector<std::vector<Int>> binom(static_cast<std::size_t>(db) + 1);
        for (int m = 0; m <= db; ++m) {
            binom[static_cast<std::size_t>(m)].resize(static_cast<std::size_t>(m) + 1);
            for (int i = 0; i <= m; ++i) {
                mpz_bin_uiui(binom[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)].get_mpz_t(),
                             static_cast<unsigned long>(m), static_cast<unsigned long>(i));
            }
        }
        for (int m = 0; m <= db; ++m) {
            if (bk[static_cast<std::size_t>(m)].is_zero()) continue;
            PolyNK cm = PolyNK::from_polyz_n(bk[static_cast<std::size_t>(m)]);
            for (int i = 0; i <= m; ++i) {
                // contribution to k^i: C(m, i) * c_m(n) * j^(m-i)
                PolyNK jterm = PolyNK::monomial(binom[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)], 0, m - i);
                cb[static_cast<std::size_t>(i)] = cb[static_cast<std::size_t>(i)] + cm * jterm;
            }
        }
    }
    // Sylvester matrix, size da + db.
    int s = da + db;
    std::vector<std::vector<PolyNK>> m(static_cast<std::size_t>(s),
                                       std::vector<PolyNK>(static_cast<std::size_t>(s)));
    for (int r = 0; r < db; ++r) {
        for (int i = 0; i <= da; ++i) {
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + i)] =
                PolyNK::from_polyz_n(ca[static_cast<std::size_t>(da - i)]);
        }
    }
    for (int r = 0; r < da; ++r) {
        for (int i = 0; i <= db; ++i) {
            m[static_cast<std::size_t>(db + r)][static_cast<std::size_t>(r + i)] =
                cb[static_cast<std::size_t>(db - i)];
        }
    }
    // Bareiss fraction-free elimination.
    PolyNK prev(1L);
    int sign = 1;
    for (int t = 0; t < s - 1; ++t) {
        if (m[static_cast<std::size_t>(t)][static_cast<std::size_t>(t)].is_zero()) {
            int sw = -1;
            for (int i = t + 1; i < s; ++i) {
                if (!m[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)].is_zero()) { sw = i; break; }
            }
            if (sw < 0) return PolyNK();   // singular: resultant 0
            std::swap(m[static_cast<std::size_t>(t)], m[static_cast<std::size_t>(sw)]);
            sign = -sign;
        }
        for (int i = t + 1; i < s; ++i) {
            for (int j = t + 1; j < s; ++j) {
                PolyNK num = m[static_cast<std::size_t>(t)][static_cast<std::size_t>(t)] *
                                 m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                             m[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] *
                                 m[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];
                m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    num.is_zero() ? PolyNK() : num.divexact(prev);
            }
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] = PolyNK();
        }
        prev = m[static_cast<std::size_t>(t)][static_cast<std::size_t>(t)];
    }
    PolyNK det = m[static_cast<std::size_t>(s - 1)][static_cast<std::size_t>(s - 1)];
    return sign < 0 ? -det : det;
}

std::string PolyNK::to_string() const {
    if (t_.empty()) return "0";
    std::string out;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        const auto& [e, v] = *it;
        Int a = v < 0 ? Int(-v) : v;
        if (out.empty()) {
            if (v < 0) out += "-";
        } else {
            out += v < 0 ? "-" : "+";
        }
        bool constant_term = (e.dn == 0 && e.dk == 0);
        bool need_coeff = (a != 1) || constant_term;
        if (need_coeff) out += a.get_str();
        bool star = need_coeff;
        if (e.dn > 0) {
            if (star) out += "*";
            out += "n";
            if (e.dn > 1) out += "^" + std::to_string(e.dn);
            star = true;
        }
        if (e.dk > 0) {
            if (star) out += "*";
            out += "k";
            if (e.dk > 1) out += "^" + std::to_string(e.dk);
        }
    }
    return out;
}

}  // namespace hyptel
