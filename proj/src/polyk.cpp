#include "hyptel/polyk.hpp"

#include <algorithm>

#include "hyptel/errors.hpp"

namespace hyptel {

namespace {
const RFuncN kZeroR{};
}

PolyK::PolyK(std::vector<RFuncN> coeffs) : c_(std::move(coeffs)) { trim(); }

PolyK::PolyK(const RFuncN& constant) {
    if (!constant.is_zero()) c_.push_back(constant);
}

PolyK PolyK::monomial(const RFuncN& coeff, int deg) {
    PolyK p;
    if (coeff.is_zero()) return p;
    p.c_.assign(static_cast<std::size_t>(deg) + 1, RFuncN());
    p.c_.back() = coeff;
    return p;
}

PolyK PolyK::var_k() { return monomial(RFuncN(1L), 1); }

PolyK PolyK::from_rfuncnk(const RFuncNK& f) {
    if (f.den().degree_k() > 0) {
        throw InternalError("from_rfuncnk needs a k-free denominator");
    }
    if (f.is_zero()) return PolyK();
    PolyZ den = f.den().k_coefficients()[0];
    std::vector<PolyZ> nums = f.num().k_coefficients();
    std::vector<RFuncN> cs;
    cs.reserve(nums.size());
    for (const auto& p : nums) cs.emplace_back(p, den);
    return PolyK(std::move(cs));
}

void PolyK::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

const RFuncN& PolyK::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return kZeroR;
    return c_[static_cast<std::size_t>(i)];
}

const RFuncN& PolyK::lc() const {
    if (c_.empty()) return kZeroR;
    return c_.back();
}

PolyK PolyK::operator-() const {
    PolyK r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

PolyK PolyK::operator+(const PolyK& o) const {
    PolyK r;
    r.c_.resize(std::max(c_.size(), o.c_.size()));
    for (std::size_t i = 0; i < r.c_.size(); ++i) {
        r.c_[i] = coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i));
    }
    r.trim();
    return r;
}

PolyK PolyK::operator-(const PolyK& o) const { return *this + (-o); }

PolyK PolyK::operator*(const PolyK& o) const {
    if (is_zero() || o.is_zero()) return PolyK();
    PolyK r;
    r.c_.assign(c_.size() + o.c_.size() - 1, RFuncN());
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) {
            if (o.c_[j].is_zero()) continue;
            r.c_[i + j] += c_[i] * o.c_[j];
        }
    }
    r.trim();
    return r;
}

PolyK PolyK::mul_scalar(const RFuncN& s) const {
    if (s.is_zero()) return PolyK();
    PolyK r = *this;
    for (auto& c : r.c_) c = c * s;
    return r;
}

std::pair<PolyK, PolyK> PolyK::divmod(const PolyK& o) const {
    if (o.is_zero()) throw DivisionByZero("polynomial division by zero");
    PolyK q, r = *this;
    int db = o.degree();
    if (degree() >= db) {
        q.c_.assign(static_cast<std::size_t>(degree() - db) + 1, RFuncN());
    }
    RFuncN linv = o.lc().inverse();
    while (r.degree() >= db) {
        int sh = r.degree() - db;
        RFuncN f = r.lc() * linv;
        q.c_[static_cast<std::size_t>(sh)] = f;
        for (int i = 0; i <= db; ++i) {
            r.c_[static_cast<std::size_t>(sh + i)] -= f * o.coeff(i);
        }
        r.trim();
    }
    q.trim();
    return {q, r};
}

PolyK PolyK::monic() const {
    if (is_zero()) return *this;
    return mul_scalar(lc().inverse());
}

PolyK PolyK::shift_k(const Rat& j) const {
    if (is_zero() || j == 0) return *this;
    int d = degree();
    // binomial coefficients row by row
    std::vector<RFuncN> out(static_cast<std::size_t>(d) + 1, RFuncN());
    for (int i = 0; i <= d; ++i) {
        if (c_[static_cast<std::size_t>(i)].is_zero()) continue;
        Int binom = 1;
        Rat jp(1);
        for (int m = i; m >= 0; --m) {
            // C(i, m) * j^(i-m), built incrementally from m = i down
            out[static_cast<std::size_t>(m)] +=
                c_[static_cast<std::size_t>(i)] * RFuncN(Rat(binom) * jp);
            if (m > 0) {
                binom = binom * m / (i - m + 1);
                jp *= j;
            }
        }
    }
    return PolyK(std::move(out));
}

PolyK PolyK::shift_n(long dn) const {
    PolyK r = *this;
    for (auto& c : r.c_) c = c.shifted(dn);
    return r;
}

RFuncN PolyK::eval_k(const RFuncN& v) const {
    RFuncN acc;
    for (int i = degree(); i >= 0; --i) {
        acc = acc * v + c_[static_cast<std::size_t>(i)];
    }
    return acc;
}

RFuncNK PolyK::to_rfuncnk() const {
    RFuncNK acc;
    RFuncNK k(PolyNK::var_k());
    for (int i = degree(); i >= 0; --i) {
        acc = acc * k + RFuncNK::from_rfuncn(c_[static_cast<std::size_t>(i)]);
    }
    return acc;
}

std::string PolyK::to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        const RFuncN& c = c_[static_cast<std::size_t>(i)];
        if (c.is_zero()) continue;
        if (!out.empty()) out += "+";
        std::string cs = c.to_string();
        bool atomic = cs.find('+') == std::string::npos &&
                      cs.find('-') == std::string::npos &&
                      cs.find('/') == std::string::npos;
        if (i == 0) {
            out += atomic ? cs : "(" + cs + ")";
        } else {
            std::string mono = i == 1 ? "k" : "k^" + std::to_string(i);
            if (c.is_one()) {
                out += mono;
            } else {
                out += (atomic ? cs : "(" + cs + ")") + "*" + mono;
            }
        }
    }
    return out;
}

PolyK gcd_k(const PolyK& a, const PolyK& b) {
    if (a.is_zero() && b.is_zero()) {
        throw InvalidInput("gcd of two zero polynomials");
    }
    PolyK x = a, y = b;
    while (!y.is_zero()) {
        PolyK r = x.divmod(y).second;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

namespace {

// Clear Q(n) denominators to get an integer-coefficient polynomial with the
// same k-roots.
PolyNK clear_denominators(const PolyK& p) {
    PolyZ den(1L);
    for (const auto& c : p.coeffs()) {
        if (!c.is_zero()) den = poly_lcm(den, c.den());
    }
    PolyNK out;
    for (int i = 0; i <= p.degree(); ++i) {
        const RFuncN& c = p.coeff(i);
        if (c.is_zero()) continue;
        PolyZ scaled = c.num() * den.divexact(c.den());
        out = out + PolyNK::from_polyz_n(scaled) * PolyNK::monomial(Int(1), 0, i);
    }
    return out;
}

}  // namespace

std::set<long> dispersion_set(const PolyK& a, const PolyK& b) {
    if (a.is_zero() || b.is_zero()) {
        throw InvalidInput("dispersion of a zero polynomial");
    }
    if (a.degree() < 1 || b.degree() < 1) return {};
    PolyNK pa = clear_denominators(a);
    PolyNK pb = clear_denominators(b);
    PolyNK res = resultant_k_shifted(pa, pb);
    if (res.is_zero()) {
        throw InternalError("identically zero shifted resultant");
    }
    // res lives in Z[n, j] with j in the k slot; an integer j-root must kill
    // the coefficient of every power of n, so it is a root of the gcd of
    // those coefficients.
    std::map<int, std::vector<Int>> by_n;
    for (const auto& [e, v] : res.terms()) {
        auto& vec = by_n[e.dn];
        if (static_cast<int>(vec.size()) <= e.dk) {
            vec.resize(static_cast<std::size_t>(e.dk) + 1);
        }
        vec[static_cast<std::size_t>(e.dk)] = v;
    }
    PolyZ g;
    for (auto& [dn, vec] : by_n) g = poly_gcd(g, PolyZ(vec));
    std::set<long> out;
    if (g.degree() < 1) return out;
    for (const auto& r : integer_roots(g)) {
        if (r >= 0) out.insert(to_long_checked(r, "dispersion value"));
    }
    return out;
}

}  // namespace hyptel
