#include "hyptel/term.hpp"

#include <algorithm>
#include <cstddef>
#include <memory>
#include <tuple>
#include <vector>

#include "hyptel/errors.hpp"
#include "hyptel/parser.hpp"
#include "hyptel/polynk.hpp"

namespace hyptel {

namespace {

std::string at_pos(std::size_t pos) {
    return " at position " + std::to_string(pos);
}

bool contains_var(const Expr& e) {
    if (e.kind == Expr::Kind::Variable) return e.name == "n" || e.name == "k";
    for (const auto& a : e.args) {
        if (contains_var(*a)) return true;
    }
    return false;
}

bool contains_call(const Expr& e) {
    if (e.kind == Expr::Kind::Call) return true;
    for (const auto& a : e.args) {
        if (contains_call(*a)) return true;
    }
    return false;
}

Rat constant_value(const RFuncNK& f, std::size_t pos) {
    if (!f.num().is_zero() && f.num().leading().first != ExpNK{0, 0}) {
        throw InvalidInput("expected a constant" + at_pos(pos));
    }
    if (f.den().leading().first != ExpNK{0, 0}) {
        throw InvalidInput("expected a constant" + at_pos(pos));
    }
    return make_rat(f.num().coeff(0, 0), f.den().coeff(0, 0));
}

long integer_value(const RFuncNK& f, std::size_t pos) {
    Rat v = constant_value(f, pos);
    if (v.get_den() != 1) {
        throw InvalidInput("exponent must be an integer" + at_pos(pos));
    }
    return to_long_checked(Int(v.get_num()), "exponent");
}

AffineNK affine_of(const Expr& e) {
    RFuncNK f = eval_rational_expr(e);
    if (!f.is_polynomial()) {
        throw InvalidInput("non-integer affine coefficients in argument" +
                           at_pos(e.pos));
    }
    const PolyNK& p = f.num();
    if (!p.is_zero()) {
        auto [le, lc] = p.leading();
        (void)lc;
        if (le.dn + le.dk > 1) {
            throw InvalidInput("argument is not affine in n and k" +
                               at_pos(e.pos));
        }
    }
    return {p.coeff(1, 0), p.coeff(0, 1), p.coeff(0, 0)};
}

bool factor_less(const Factor& x, const Factor& y) {
    auto key = [](const Factor& f) {
        return std::make_tuple(static_cast<int>(f.kind), f.arg1.a, f.arg1.b,
                               f.arg1.c, f.arg2.a, f.arg2.b, f.arg2.c, f.base,
                               f.exp);
    };
    return key(x) < key(y);
}

// Walks the expression tree collecting call factors, exponential factors and
// rational pieces; s is the signed exponent multiplier accumulated from
// quotients and integer powers above the current node.
struct TermBuilder {
    std::vector<Factor> factors;
    RFuncNK pre{1L};

    void add_call(const Expr& e, long s) {
        if (s == 0) {
            throw InvalidInput("zero exponent on " + e.name + at_pos(e.pos));
        }
        if (e.name == "binomial") {
            if (e.args.size() != 2) {
                throw InvalidInput("binomial takes two arguments" +
                                   at_pos(e.pos));
            }
            factors.push_back({Factor::Kind::Binomial, affine_of(*e.args[0]),
                               affine_of(*e.args[1]), Rat(1), s});
        } else if (e.name == "factorial") {
            if (e.args.size() != 1) {
                throw InvalidInput("factorial takes one argument" +
                                   at_pos(e.pos));
            }
            factors.push_back({Factor::Kind::Factorial, affine_of(*e.args[0]),
                               AffineNK{0, 0, 0}, Rat(1), s});
        } else {
            throw InvalidInput("unknown function '" + e.name + "'" +
                               at_pos(e.pos));
        }
    }

    void mul(const Expr& e, long s) {
        switch (e.kind) {
            case Expr::Kind::Binary:
                switch (e.op) {
                    case '*':
                        mul(*e.args[0], s);
                        mul(*e.args[1], s);
                        return;
                    case '/':
                        mul(*e.args[0], s);
                        mul(*e.args[1], -s);
                        return;
                    case '^': {
                        const Expr& base = *e.args[0];
                        const Expr& ex = *e.args[1];
                        if (contains_var(ex)) {
                            Rat q = constant_value(eval_rational_expr(base),
                                                   base.pos);
                            if (q == 0) {
                                throw InvalidInput(
                                    "zero base of an exponential" +
                                    at_pos(base.pos));
                            }
                            AffineNK a = affine_of(ex);
                            if (s != 1) {
                                a = {a.a * s, a.b * s, a.c * s};
                            }
                            push_power(q, a);
                            return;
                        }
                        long m = integer_value(eval_rational_expr(ex), ex.pos);
                        long sm =
                            to_long_checked(Int(s) * Int(m), "exponent");
                        if (contains_call(base)) {
                            mul(base, sm);
                        } else {
                            pre = pre * eval_rational_expr(base).pow(sm);
                        }
                        return;
                    }
                    default:
                        pre = pre * eval_rational_expr(e).pow(s);
                        return;
                }
            case Expr::Kind::Unary:
                if (s % 2 != 0) pre = pre * RFuncNK(-1L);
                mul(*e.args[0], s);
                return;
            case Expr::Kind::Call:
                add_call(e, s);
                return;
            default:
                pre = pre * eval_rational_expr(e).pow(s);
                return;
        }
    }

    void push_power(const Rat& q, const AffineNK& a) {
        if (q == 1) return;
        if (a == AffineNK{0, 0, 0}) return;
        factors.push_back({Factor::Kind::Power, a, AffineNK{0, 0, 0}, q, 1});
    }

    TermSpec finish() {
        if (pre.is_zero()) throw InvalidInput("term is identically zero");
        std::vector<Factor> out;
        for (const Factor& f : factors) {
            bool merged = false;
            for (Factor& g : out) {
                if (g.kind != f.kind) continue;
                if (f.kind == Factor::Kind::Power) {
                    if (g.base == f.base) {
                        g.arg1 = {g.arg1.a + f.arg1.a, g.arg1.b + f.arg1.b,
                                  g.arg1.c + f.arg1.c};
                        merged = true;
                        break;
                    }
                } else if (g.arg1 == f.arg1 && g.arg2 == f.arg2) {
                    g.exp += f.exp;
                    merged = true;
                    break;
                }
            }
            if (!merged) out.push_back(f);
        }
        std::erase_if(out, [](const Factor& f) {
            if (f.kind == Factor::Kind::Power) {
                return f.arg1 == AffineNK{0, 0, 0};
            }
            return f.exp == 0;
        });
        std::sort(out.begin(), out.end(), factor_less);
        return {std::move(out), pre};
    }
};

// (x+1)(x+2)...(x+m) for m >= 0; the reciprocal of x(x-1)...(x+m+1) for
// m < 0.  Matches (x+m)! / x! wherever both factorials make sense.
RFuncNK rising(const AffineNK& x, const Int& m) {
    PolyNK p(1L);
    if (m >= 0) {
        for (Int i = 1; i <= m; ++i) {
            p = p * PolyNK::affine(x.a, x.b, x.c + i);
        }
        return RFuncNK(p);
    }
    for (Int i = 0; i > m; --i) {
        p = p * PolyNK::affine(x.a, x.b, x.c + i);
    }
    return RFuncNK(p).inverse();
}

Int floor_rat(const Rat& q) {
    Int f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(),
               q.get_den().get_mpz_t());
    return f;
}

// q^d for rational d, when the result is rational; d = u/v needs an exact
// v-th root of q^u.
std::optional<Rat> rat_pow_exact(const Rat& q, const Rat& d) {
    if (d == 0) return Rat(1);
    Rat p = rat_pow(q, to_long_checked(Int(d.get_num()), "exponent"));
    if (d.get_den() == 1) return p;
    if (!d.get_den().fits_ulong_p()) {
        throw InvalidInput("exponent denominator out of machine range");
    }
    unsigned long v = d.get_den().get_ui();
    Int num(p.get_num()), den(p.get_den());
    if (num < 0 && v % 2 == 0) return std::nullopt;
    Int rn, rd;
    if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), v)) return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), v)) return std::nullopt;
    return make_rat(rn, rd);
}

Int binom_int(const Int& a, const Int& b) {
    if (!b.fits_ulong_p()) {
        throw InvalidInput("binomial argument out of machine range");
    }
    Int r;
    mpz_bin_ui(r.get_mpz_t(), a.get_mpz_t(), b.get_ui());
    return r;
}

Int factorial_int(const Int& a) {
    if (!a.fits_ulong_p()) {
        throw InvalidInput("factorial argument out of machine range");
    }
    Int r;
    mpz_fac_ui(r.get_mpz_t(), a.get_ui());
    return r;
}

std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string Factor::to_string() const {
    std::string s;
    switch (kind) {
        case Kind::Binomial:
            s = "binomial(" + arg1.to_string() + "," + arg2.to_string() + ")";
            break;
        case Kind::Factorial:
            s = "factorial(" + arg1.to_string() + ")";
            break;
        case Kind::Power: {
            std::string b = hyptel::to_string(base);
            if (base < 0 || base.get_den() != 1) b = "(" + b + ")";
            return b + "^(" + arg1.to_string() + ")";
        }
    }
    if (exp != 1) {
        s += exp < 0 ? "^(" + std::to_string(exp) + ")"
                     : "^" + std::to_string(exp);
    }
    return s;
}

std::string TermSpec::to_string() const {
    std::string s;
    for (const Factor& f : factors) {
        if (!s.empty()) s += " * ";
        s += f.to_string();
    }
    if (!prefactor.is_one()) {
        if (s.empty()) return prefactor.to_string();
        s += " * (" + prefactor.to_string() + ")";
    }
    return s.empty() ? "1" : s;
}

std::string Automorphism::name() const {
    if (kind == Kind::Phi) return "phi";
    return "tau(" + std::to_string(period) + ")";
}

TermSpec parse_term(const std::string& text) {
    std::unique_ptr<Expr> ast = parse_expression(text);
    TermBuilder b;
    b.mul(*ast, 1);
    return b.finish();
}

HTerm certificates(const TermSpec& spec) {
    RFuncNK r1(1L), r2(1L);
    for (const Factor& f : spec.factors) {
        RFuncNK q1, q2;
        switch (f.kind) {
            case Factor::Kind::Binomial: {
                AffineNK d = f.arg1 - f.arg2;
                q1 = rising(f.arg1, f.arg1.a) /
                     (rising(f.arg2, f.arg2.a) * rising(d, d.a));
                q2 = rising(f.arg1, f.arg1.b) /
                     (rising(f.arg2, f.arg2.b) * rising(d, d.b));
                break;
            }
            case Factor::Kind::Factorial:
                q1 = rising(f.arg1, f.arg1.a);
                q2 = rising(f.arg1, f.arg1.b);
                break;
            case Factor::Kind::Power:
                q1 = RFuncNK(rat_pow(f.base,
                                     to_long_checked(f.arg1.a, "exponent")));
                q2 = RFuncNK(rat_pow(f.base,
                                     to_long_checked(f.arg1.b, "exponent")));
                break;
        }
        if (f.kind == Factor::Kind::Power) {
            r1 = r1 * q1;
            r2 = r2 * q2;
        } else {
            r1 = r1 * q1.pow(f.exp);
            r2 = r2 * q2.pow(f.exp);
        }
    }
    if (!spec.prefactor.is_one()) {
        r1 = r1 * spec.prefactor.shifted(1, Rat(0)) / spec.prefactor;
        r2 = r2 * spec.prefactor.shifted(0, Rat(1)) / spec.prefactor;
    }
    return {spec, r1, r2};
}

APReduction ap_shift_reduce(const HTerm& h) {
    // Signed multiplicity of each affine factor of S_k(H)/H, grouped by the
    // k-shift class (a, b, c mod b); the map key position is (c - c mod b)/b.
    std::map<std::tuple<Int, Int, Int>, std::map<Int, long>> classes;
    auto absorb = [&classes](const PolyNK& poly, int sign) {
        AffineFactorization fa = factor_affine_k(poly);
        if (!fa.complete()) {
            throw UnsupportedDenominator(
                "shift reduction needs k-affine factors, got " +
                fa.leftover.to_string());
        }
        for (const auto& [f, m] : fa.factors) {
            if (f.b == 0) continue;
            Int c0;
            mpz_fdiv_r(c0.get_mpz_t(), f.c.get_mpz_t(), f.b.get_mpz_t());
            Int t = (f.c - c0) / f.b;
            classes[{f.a, f.b, c0}][t] += sign * m;
        }
    };
    absorb(h.r2.num(), 1);
    absorb(h.r2.den(), -1);

    // Move every factor to the lowest occupied position of its class;
    // dividing H by w = f_{t0} ... f_{t-1} turns the factor at position t
    // into one at t0.
    RFuncNK r0(1L);
    for (auto& [key, positions] : classes) {
        std::erase_if(positions,
                      [](const auto& kv) { return kv.second == 0; });
        if (positions.size() < 2) continue;
        const auto& [a, b, c0] = key;
        const Int& t0 = positions.begin()->first;
        for (auto it = std::next(positions.begin()); it != positions.end();
             ++it) {
            long span = to_long_checked(it->first - t0, "shift distance");
            PolyNK w(1L);
            for (long j = 0; j < span; ++j) {
                w = w * PolyNK::affine(a, b, c0 + (t0 + j) * b);
            }
            r0 = r0 * RFuncNK(w).pow(it->second);
        }
    }
    if (r0.is_one()) return {r0, h};
    TermSpec spec0 = h.spec;
    spec0.prefactor = spec0.prefactor / r0;
    return {r0, certificates(spec0)};
}

Rat eval_term(const TermSpec& spec, long n0, long k0, bool* regularized) {
    if (regularized) *regularized = false;
    Rat nv(n0), kv(k0);
    std::string where =
        " at n=" + std::to_string(n0) + ", k=" + std::to_string(k0);
    Rat prod(1);
    for (const Factor& f : spec.factors) {
        switch (f.kind) {
            case Factor::Kind::Binomial: {
                Int a(f.arg1.eval(nv, kv).get_num());
                Int b(f.arg2.eval(nv, kv).get_num());
                if (a < 0) {
                    throw InvalidInput(
                        "negative upper binomial argument" + where);
                }
                if (b < 0 || b > a) {
                    if (f.exp < 0) {
                        throw PoleAtPoint(
                            "vanishing binomial under a negative exponent" +
                            where);
                    }
                    prod = 0;
                } else {
                    prod *= rat_pow(Rat(binom_int(a, b)), f.exp);
                }
                break;
            }
            case Factor::Kind::Factorial: {
                Int a(f.arg1.eval(nv, kv).get_num());
                if (a < 0) {
                    if (f.exp > 0) {
                        throw PoleAtPoint(
                            "factorial of a negative integer" + where);
                    }
                    prod = 0;
                } else {
                    prod *= rat_pow(Rat(factorial_int(a)), f.exp);
                }
                break;
            }
            case Factor::Kind::Power: {
                long e = to_long_checked(Int(f.arg1.eval(nv, kv).get_num()),
                                         "exponent");
                prod *= rat_pow(f.base, e);
                break;
            }
        }
    }
    if (spec.prefactor.has_pole_at(nv, kv)) {
        if (prod == 0) {
            if (regularized) *regularized = true;
            return Rat(0);
        }
        throw PoleAtPoint("prefactor pole" + where);
    }
    return prod * spec.prefactor.eval(nv, kv);
}

std::optional<RFuncNK> automorphism_ratio(const TermSpec& spec,
                                          Automorphism::Kind kind,
                                          long period) {
    if (kind == Automorphism::Kind::Tau && period < 2) {
        throw InvalidInput("tau needs a period of at least 2");
    }
    Rat al(kind == Automorphism::Kind::Phi ? 1 : 0);
    Rat be(kind == Automorphism::Kind::Phi ? -1 : 1);
    Rat ga = kind == Automorphism::Kind::Phi ? Rat(0)
                                             : make_rat(Int(1), Int(period));

    // Image of an affine k-argument under k -> al*n + be*k + ga.
    auto image = [&](const AffineNK& x) {
        if (kind == Automorphism::Kind::Phi) {
            return std::tuple<Int, Int, Rat>(x.a + x.b, -x.b, Rat(x.c));
        }
        return std::tuple<Int, Int, Rat>(x.a, x.b,
                                         Rat(x.c) + make_rat(x.b, Int(period)));
    };

    // Net gamma-function exponents image(H)/H, one class per (a, b, c mod 1).
    std::map<std::tuple<Int, Int, Rat>, std::map<Int, long>> classes;
    auto add = [&classes](const Int& a, const Int& b, const Rat& c, long e) {
        Int fl = floor_rat(c);
        Rat cf = c - Rat(fl);
        classes[{a, b, cf}][fl] += e;
    };
    // Gamma(x+1)^e for the original argument and its image.
    auto both = [&](const AffineNK& x, long e) {
        add(x.a, x.b, Rat(x.c + 1), -e);
        auto [ia, ib, ic] = image(x);
        add(ia, ib, ic + 1, e);
    };

    RFuncNK ratio(1L);
    for (const Factor& f : spec.factors) {
        switch (f.kind) {
            case Factor::Kind::Binomial:
                both(f.arg1, f.exp);
                both(f.arg2, -f.exp);
                both(f.arg1 - f.arg2, -f.exp);
                break;
            case Factor::Kind::Factorial:
                both(f.arg1, f.exp);
                break;
            case Factor::Kind::Power: {
                auto [ia, ib, ic] = image(f.arg1);
                if (ia != f.arg1.a || ib != f.arg1.b) return std::nullopt;
                std::optional<Rat> v =
                    rat_pow_exact(f.base, ic - Rat(f.arg1.c));
                if (!v) return std::nullopt;
                ratio = ratio * RFuncNK(*v);
                break;
            }
        }
    }

    for (auto& [key, positions] : classes) {
        std::erase_if(positions,
                      [](const auto& kv) { return kv.second == 0; });
        if (positions.empty()) continue;
        long total = 0;
        for (const auto& [idx, e] : positions) total += e;
        if (total != 0) return std::nullopt;
        if (positions.size() < 2) continue;

        // Gamma(x+i)^{e_i} with sum e_i = 0 collapses to the product of
        // (x+t)^{w(t)} over t in [min i, max i) with w(t) = sum of e_i
        // above t.
        const auto& [a, b, cf] = key;
        std::vector<std::pair<Int, long>> atoms(positions.begin(),
                                                positions.end());
        long span =
            to_long_checked(atoms.back().first - atoms.front().first,
                            "class span");
        long suffix = 0;
        std::size_t j = atoms.size();
        for (long off = span - 1; off >= 0; --off) {
            Int t(atoms.front().first + off);
            while (j > 0 && atoms[j - 1].first > t) {
                suffix += atoms[j - 1].second;
                --j;
            }
            if (suffix == 0) continue;
            Rat cval = cf + Rat(t);
            Int scale(cval.get_den());
            PolyNK aff = PolyNK::affine(a * scale, b * scale,
                                        Int(cval.get_num()));
            ratio = ratio * RFuncNK(aff, PolyNK(scale)).pow(suffix);
        }
    }

    if (!spec.prefactor.is_one()) {
        ratio = ratio * spec.prefactor.subst_k_affine(al, be, ga) /
                spec.prefactor;
    }
    return ratio;
}

std::optional<std::pair<long, long>> natural_support(const TermSpec& spec,
                                                     long n0) {
    bool has_lo = false, has_hi = false, empty = false;
    Int lo, hi;
    // Require alpha*k + beta >= 0.
    auto constrain = [&](const Int& alpha, const Int& beta) {
        if (alpha == 0) {
            if (beta < 0) empty = true;
            return;
        }
        Int bnd;
        if (alpha > 0) {
            Int nb(-beta);
            mpz_cdiv_q(bnd.get_mpz_t(), nb.get_mpz_t(), alpha.get_mpz_t());
            if (!has_lo || bnd > lo) lo = bnd;
            has_lo = true;
        } else {
            Int na(-alpha);
            mpz_fdiv_q(bnd.get_mpz_t(), beta.get_mpz_t(), na.get_mpz_t());
            if (!has_hi || bnd < hi) hi = bnd;
            has_hi = true;
        }
    };
    auto constrain_at_n = [&](const AffineNK& x) {
        constrain(x.b, x.a * n0 + x.c);
    };
    for (const Factor& f : spec.factors) {
        if (f.kind == Factor::Kind::Binomial && f.exp > 0) {
            constrain_at_n(f.arg2);
            constrain_at_n(f.arg1 - f.arg2);
        } else if (f.kind == Factor::Kind::Factorial && f.exp < 0) {
            constrain_at_n(f.arg1);
        }
    }
    if (empty) return std::make_pair(0L, -1L);
    if (!has_lo || !has_hi) return std::nullopt;
    if (lo > hi) return std::make_pair(0L, -1L);
    return std::make_pair(to_long_checked(lo, "support bound"),
                          to_long_checked(hi, "support bound"));
}

std::pair<long, long> KRange::bounds(const TermSpec& spec, long n0) const {
    switch (kind) {
        case Kind::ZeroToN:
            return {0, n0};
        case Kind::Fixed:
            return {lo, hi};
        case Kind::Natural: {
            auto s = natural_support(spec, n0);
            if (!s) {
                throw InvalidInput(
                    "summand support is unbounded; give an explicit k_range");
            }
            return *s;
        }
    }
    throw InternalError("unhandled k-range kind");
}

std::string KRange::to_string() const {
    switch (kind) {
        case Kind::Natural:
            return "all";
        case Kind::ZeroToN:
            return "0..n";
        case Kind::Fixed:
            return std::to_string(lo) + ".." + std::to_string(hi);
    }
    throw InternalError("unhandled k-range kind");
}

KRange parse_k_range(const std::string& text) {
    std::string t = trimmed(text);
    if (t == "all") return {KRange::Kind::Natural, 0, 0};
    std::size_t dots = t.find("..");
    if (dots == std::string::npos) {
        throw InvalidInput("k_range must be 'all', '0..n', or '<int>..<int>'");
    }
    std::string lhs = trimmed(t.substr(0, dots));
    std::string rhs = trimmed(t.substr(dots + 2));
    if (rhs == "n") {
        if (lhs != "0") {
            throw InvalidInput("a symbolic upper limit requires the range 0..n");
        }
        return {KRange::Kind::ZeroToN, 0, 0};
    }
    long lo = to_long_checked(int_from_string(lhs), "k_range bound");
    long hi = to_long_checked(int_from_string(rhs), "k_range bound");
    return {KRange::Kind::Fixed, lo, hi};
}

TermInput load_term_document(const std::string& text) {
    Document doc = parse_document(text);
    const std::string* expr = doc.find("term", "expr");
    if (!expr) throw InvalidInput("missing expr entry in the [term] section");
    TermInput in;
    in.spec = parse_term(*expr);
    if (const std::string* kr = doc.find("sum", "k_range")) {
        in.k_range = parse_k_range(*kr);
    }
    if (auto it = doc.sections.find("options"); it != doc.sections.end()) {
        in.options = it->second;
    }
    return in;
}

}  // namespace hyptel
