#include "hyptel/factor.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "hyptel/errors.hpp"

namespace hyptel {

namespace {

Int int_gcd(const Int& x, const Int& y) {
    Int r;
    mpz_gcd(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return r;
}

// ---------------------------------------------------------------------------
// Dense polynomials over Q in one variable, for the idempotents of the group
// algebra Q[x]/(x^p - 1).  Coefficient i belongs to x^i; trimmed, zero = {}.

using QP = std::vector<Rat>;

QP qp_trim(QP p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

QP qp_mul(const QP& a, const QP& b) {
    if (a.empty() || b.empty()) return {};
    QP r(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return qp_trim(std::move(r));
}

QP qp_sub(QP a, const QP& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rat(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    return qp_trim(std::move(a));
}

QP qp_scale(QP a, const Rat& s) {
    for (auto& v : a) v *= s;
    return qp_trim(std::move(a));
}

std::pair<QP, QP> qp_divmod(QP a, const QP& b) {
    QP q(a.size() > b.size() ? a.size() - b.size() + 1 : 1, Rat(0));
    while (a.size() >= b.size() && !a.empty()) {
        Rat c = a.back() / b.back();
        std::size_t off = a.size() - b.size();
        q[off] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= c * b[i];
        a = qp_trim(std::move(a));
    }
    return {qp_trim(std::move(q)), std::move(a)};
}

// g = u*a + v*b with g monic (or zero).
void qp_xgcd(QP a, QP b, QP& g, QP& u, QP& v) {
    QP u0{Rat(1)}, v0, u1, v1{Rat(1)};
    while (!b.empty()) {
        auto [q, r] = qp_divmod(a, b);
        QP u2 = qp_sub(u0, qp_mul(q, u1));
        QP v2 = qp_sub(v0, qp_mul(q, v1));
        a = std::move(b);
        b = std::move(r);
        u0 = std::move(u1);
        v0 = std::move(v1);
        u1 = std::move(u2);
        v1 = std::move(v2);
    }
    if (!a.empty()) {
        Rat inv = 1 / a.back();
        a = qp_scale(std::move(a), inv);
        u0 = qp_scale(std::move(u0), inv);
        v0 = qp_scale(std::move(v0), inv);
    }
    g = std::move(a);
    u = std::move(u0);
    v = std::move(v0);
}

QP qp_xpow_minus_one(long p) {
    QP r(static_cast<std::size_t>(p) + 1, Rat(0));
    r[0] = -1;
    r[static_cast<std::size_t>(p)] = 1;
    return r;
}

// Irreducible factors of x^p - 1 over Q: the cyclotomic polynomials of the
// divisors of p, in ascending divisor order (so x - 1 comes first).
std::vector<QP> cyclotomic_factors(long p) {
    std::map<long, QP> cyclo;
    for (long d = 1; d <= p; ++d) {
        if (p % d != 0) continue;
        QP num = qp_xpow_minus_one(d);
        for (const auto& [e, f] : cyclo) {
            if (d % e == 0) num = qp_divmod(std::move(num), f).first;
        }
        cyclo[d] = std::move(num);
    }
    std::vector<QP> out;
    for (auto& [d, f] : cyclo) out.push_back(std::move(f));
    return out;
}

MatQ eval_poly_at_matrix(const QP& e, const MatQ& m) {
    std::size_t d = m.size();
    MatQ acc(d, VecQ(d, RFuncN()));
    for (std::size_t i = e.size(); i-- > 0;) {
        acc = mat_mul(acc, m);
        for (std::size_t j = 0; j < d; ++j) acc[j][j] += RFuncN(e[i]);
    }
    return acc;
}

bool is_zero_mat(const MatQ& m) {
    for (const auto& row : m)
        for (const auto& v : row)
            if (!v.is_zero()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Right factor machinery.

// S_n^t(S_k^s(H)) / H from the shift certificates.
RFuncNK shift_ratio(const HTerm& h, long t, long s) {
    RFuncNK rn(1L);
    for (long j = 0; j < t; ++j) rn *= h.r1.shifted(j, Rat(0));
    RFuncNK rk(1L);
    if (s >= 0) {
        for (long j = 0; j < s; ++j) rk *= h.r2.shifted(0, Rat(j));
    } else {
        for (long j = 1; j <= -s; ++j) rk *= h.r2.shifted(0, Rat(-j)).inverse();
    }
    return rn * rk.shifted(t, Rat(0));
}

// Q(n)-linear dependence test for a list of rational functions: clear a
// common k-denominator and row-reduce the k-coefficient vectors.  Returns
// the combination (c_0..c_last, c_last = 1) when the last entry depends on
// the earlier ones.
std::optional<std::vector<RFuncN>> frac_dependence(
    const std::vector<RFuncNK>& fracs) {
    if (fracs.back().is_zero()) {
        std::vector<RFuncN> dep(fracs.size(), RFuncN());
        dep.back() = RFuncN(1L);
        return dep;
    }
    std::map<std::tuple<Int, Int, Int>, int> powers;
    for (const auto& f : fracs) {
        AffineFactorization fac = factor_affine_k(f.den());
        if (!fac.complete())
            throw UnsupportedDenominator("non-affine denominator in a reduced fraction: " +
                                         fac.leftover.to_string());
        for (const auto& [p, m] : fac.factors) {
            auto key = std::make_tuple(p.a, p.b, p.c);
            powers[key] = std::max(powers[key], m);
        }
    }
    PolyNK den(1L);
    for (const auto& [key, m] : powers) {
        const auto& [a, b, c] = key;
        den = den * PolyNK::affine(a, b, c).pow(m);
    }
    std::vector<PolyK> rows;
    int width = 0;
    for (const auto& f : fracs) {
        rows.push_back(PolyK::from_rfuncnk(f * RFuncNK(den)));
        width = std::max(width, rows.back().degree() + 1);
    }
    EchelonQ ech(static_cast<std::size_t>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        VecQ v(static_cast<std::size_t>(width), RFuncN());
        for (int j = 0; j <= rows[i].degree(); ++j)
            v[static_cast<std::size_t>(j)] = rows[i].coeff(j);
        auto combo = ech.insert(std::move(v));
        if (combo && i + 1 < rows.size())
            throw InternalError("fraction dependence appeared before the last row");
        if (combo) return combo;
    }
    return std::nullopt;
}

}  // namespace

RightFactorResult right_factor(const HTerm& h, ReductionContext& ctx,
                               bool track_cert) {
    const HTerm& h0 = ctx.h0();
    if (h.spec.factors != h0.spec.factors)
        throw InvalidInput("right factor needs a term sharing the reduction kernel");
    RFuncNK r0 = h.spec.prefactor / h0.spec.prefactor;

    AffineFactorization den_fac = factor_affine_k(r0.den());
    if (!den_fac.complete())
        throw UnsupportedDenominator("non-affine prefactor denominator: " +
                                     den_fac.leftover.to_string());
    int max_mult = 0;
    long total_t = 0;
    for (const auto& [p, m] : den_fac.factors) {
        if (p.b == 0) continue;
        max_mult = std::max(max_mult, m);
        Int g = int_gcd(abs(p.a), p.b);
        total_t += Int(p.b / g).get_si() * m;
    }

    // Iterate w_0 = r0, w_{i+1} = sigma_n(w_i) * R1 through the reduction and
    // stop at the first Q(n)-dependence of the fractional parts.
    int cap = ctx.basis().dim + static_cast<int>(total_t) + 8;
    std::vector<StdForm> sfs;
    std::vector<RFuncNK> fracs;
    std::vector<RFuncN> dep;
    RFuncNK w = r0;
    int ord = -1;
    for (int i = 0;; ++i) {
        if (i > cap) {
            if (max_mult > 1)
                throw UnsupportedPoleOrder(
                    "no right factor within order " + std::to_string(cap) +
                    " for a pole of multiplicity " + std::to_string(max_mult));
            throw AnsatzCapExceeded("no right factor within order " +
                                    std::to_string(cap));
        }
        sfs.push_back(ctx.std_form(w, track_cert));
        fracs.push_back(sfs.back().frac);
        if (auto d = frac_dependence(fracs)) {
            dep = std::move(*d);
            ord = i;
            break;
        }
        w = w.shifted(1, Rat(0)) * ctx.r1();
    }

    std::map<int, RFuncN> cmap;
    for (int j = 0; j <= ord; ++j)
        if (!dep[static_cast<std::size_t>(j)].is_zero())
            cmap[j] = dep[static_cast<std::size_t>(j)];
    RightFactorResult res;
    res.op = OreOp::from_coeffs(cmap).normalized();

    // The normalized operator rescales the monic combination; carry the same
    // factor into the residual and the certificate.
    RFuncN lam = res.op.coeff(ord);
    for (int j = 0; j <= ord; ++j) {
        RFuncN cj = lam * dep[static_cast<std::size_t>(j)];
        if (cj.is_zero()) continue;
        res.residual = res.residual + sfs[static_cast<std::size_t>(j)].poly.mul_scalar(cj);
        if (track_cert) {
            if (!res.cert) res.cert = RFuncNK();
            *res.cert += RFuncNK::from_rfuncn(cj) * *sfs[static_cast<std::size_t>(j)].cert;
        }
    }

    // Shift-class data for every prefactor pole whose obstruction survives
    // the reduction.  Factors are grouped into orbits under both shifts
    // (constants congruent modulo gcd(a, b)); the closed loop-ratio formula,
    // evaluated on the root line of the original factor, only applies to
    // orbits holding a single prefactor factor and none of the kernel's own
    // certificate poles.  When every surviving orbit has a closed ratio, the
    // loop construction must reproduce the reduction answer.
    if (!fracs[0].is_zero()) {
        auto orbit_key = [](const AffinePoly& p) {
            Int g = int_gcd(abs(p.a), p.b);
            Int r;
            mpz_fdiv_r(r.get_mpz_t(), p.c.get_mpz_t(), g.get_mpz_t());
            return std::make_tuple(p.a, p.b, r);
        };
        std::set<std::tuple<Int, Int, Int>> rho_orbits;
        for (const PolyNK* side : {&ctx.r2().num(), &ctx.r2().den()})
            for (const auto& [p, m] : factor_affine_k(*side).factors)
                if (p.b != 0) rho_orbits.insert(orbit_key(p));
        std::set<std::tuple<Int, Int, Int>> surviving;
        for (const auto& [p, m] : factor_affine_k(fracs[0].den()).factors)
            if (p.b != 0) surviving.insert(orbit_key(p));
        std::map<std::tuple<Int, Int, Int>, int> in_orbit;
        for (const auto& [p, m] : den_fac.factors)
            if (p.b != 0) ++in_orbit[orbit_key(p)];
        bool closed = true;
        for (const auto& key : surviving)
            if (!in_orbit.count(key)) closed = false;
        for (const auto& [p, m] : den_fac.factors) {
            if (p.b == 0) continue;
            auto key = orbit_key(p);
            if (!surviving.count(key)) continue;
            ShiftClassData cd;
            cd.factor = p;
            Int g = int_gcd(abs(p.a), p.b);
            cd.t = Int(p.b / g).get_si();
            cd.s = Int(-p.a / g).get_si();
            if (max_mult <= 1 && m == 1 && in_orbit[key] == 1 &&
                !rho_orbits.count(key)) {
                try {
                    RFuncNK ratio = shift_ratio(h, cd.t, cd.s);
                    Rat alpha = make_rat(-p.a, p.b);
                    Rat gamma = make_rat(-p.c, p.b);
                    cd.ratio = ratio.subst_k_affine(alpha, Rat(0), gamma).as_rfuncn();
                } catch (const Error&) {
                    // pole on the root line; the ansatz answer stands alone
                }
            }
            if (!cd.ratio) closed = false;
            res.classes.push_back(std::move(cd));
        }
        if (closed && !res.classes.empty()) {
            std::vector<OreOp> parts;
            for (const auto& cd : res.classes) {
                std::map<int, RFuncN> pc;
                pc[static_cast<int>(cd.t)] = RFuncN(1L);
                pc[0] = -*cd.ratio;
                parts.push_back(OreOp::from_coeffs(std::move(pc)));
            }
            if (!(lclm(parts) == res.op))
                throw InternalError("shift-class loop ratios disagree with the reduction ansatz");
        }
    }
    return res;
}

std::vector<Automorphism> detect_automorphisms(const HTerm& h0) {
    std::vector<Automorphism> out;
    if (auto r = automorphism_ratio(h0.spec, Automorphism::Kind::Phi))
        out.push_back({Automorphism::Kind::Phi, 2, std::move(*r)});
    Int g = 0;
    for (const Factor& f : h0.spec.factors) {
        if (f.kind == Factor::Kind::Power) continue;
        g = int_gcd(g, f.arg1.b);
        if (f.kind == Factor::Kind::Binomial) g = int_gcd(g, f.arg2.b);
    }
    g = abs(g);
    if (g.fits_slong_p()) {
        long gl = g.get_si();
        for (long p = 2; p <= gl; ++p) {
            if (gl % p != 0) continue;
            if (auto r = automorphism_ratio(h0.spec, Automorphism::Kind::Tau, p))
                out.push_back({Automorphism::Kind::Tau, p, std::move(*r)});
        }
    }
    return out;
}

MatQ automorphism_matrix(const Automorphism& a, ReductionContext& ctx) {
    const SubmoduleBasis& b = ctx.basis();
    std::size_t d = static_cast<std::size_t>(b.dim);
    if (a.period <= 1) return mat_identity(d);
    RFuncNK image = a.kind == Automorphism::Kind::Phi
                        ? RFuncNK(PolyNK::affine(1, -1, 0))
                        : RFuncNK(PolyNK::affine(0, a.period, 1)) /
                              RFuncNK(static_cast<long>(a.period));
    MatQ m(d, VecQ(d, RFuncN()));
    for (std::size_t j = 0; j < d; ++j) {
        RFuncNK w = image.pow(b.degrees[j]) * a.ratio;
        StdForm sf = ctx.std_form(w);
        if (!sf.frac.is_zero())
            throw InternalError("automorphism image left the module span");
        VecQ col = ctx.coords(sf.poly);
        for (std::size_t i = 0; i < d; ++i) m[i][j] = col[i];
    }
    return m;
}

Decomposition decompose(ReductionContext& ctx,
                        const std::vector<Automorphism>& auts,
                        const VecQ& target) {
    std::size_t d = static_cast<std::size_t>(ctx.basis().dim);
    struct Block {
        MatQ proj;
        bool zero_sum;
    };
    std::vector<Block> blocks{{mat_identity(d), false}};
    const QP odd_factor{Rat(1), Rat(1)};   // x + 1

    for (const Automorphism& a : auts) {
        MatQ phi = automorphism_matrix(a, ctx);
        MatQ pw = phi;
        for (long i = 1; i < a.period; ++i) pw = mat_mul(pw, phi);
        if (!(pw == mat_identity(d)))
            throw InternalError("automorphism matrix power is not the identity");

        QP xp = qp_xpow_minus_one(a.period);
        std::vector<std::pair<MatQ, bool>> projs;
        for (const QP& f : cyclotomic_factors(a.period)) {
            QP q = qp_divmod(xp, f).first;
            QP gq, u, v;
            qp_xgcd(q, f, gq, u, v);
            QP e = qp_divmod(qp_mul(u, q), xp).second;
            bool odd = a.kind == Automorphism::Kind::Phi && f == odd_factor;
            projs.push_back({eval_poly_at_matrix(e, phi), odd});
        }

        std::vector<Block> next;
        for (const Block& bl : blocks) {
            for (const auto& [p, odd] : projs) {
                if (!(mat_mul(bl.proj, p) == mat_mul(p, bl.proj)))
                    throw UnsupportedDecomposition(
                        "symmetry projectors do not commute for " + a.name());
                MatQ q = mat_mul(bl.proj, p);
                if (is_zero_mat(q)) continue;
                next.push_back({std::move(q), bl.zero_sum || odd});
            }
        }
        blocks = std::move(next);
    }

    MatQ sum(d, VecQ(d, RFuncN()));
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (!(mat_mul(blocks[i].proj, blocks[i].proj) == blocks[i].proj))
            throw InternalError("symmetry projector is not idempotent");
        for (std::size_t j = i + 1; j < blocks.size(); ++j) {
            if (!is_zero_mat(mat_mul(blocks[i].proj, blocks[j].proj)))
                throw InternalError("symmetry projectors are not orthogonal");
        }
        sum = mat_add(sum, blocks[i].proj);
    }
    if (!(sum == mat_identity(d)))
        throw InternalError("symmetry projectors do not sum to the identity");

    Decomposition out;
    std::size_t dim_total = 0;
    for (Block& bl : blocks) {
        EchelonQ ech(d);
        std::vector<VecQ> basis;
        for (std::size_t j = 0; j < d; ++j) {
            VecQ col(d);
            for (std::size_t i = 0; i < d; ++i) col[i] = bl.proj[i][j];
            if (!ech.insert(col)) basis.push_back(std::move(col));
        }
        dim_total += basis.size();
        VecQ tg = mat_vec(bl.proj, target);
        if (is_zero_vec(tg)) {
            out.dropped.push_back({static_cast<int>(basis.size()), bl.zero_sum});
        } else {
            out.components.push_back(
                {std::move(basis), std::move(tg), OreOp(), bl.zero_sum});
        }
    }
    if (dim_total != d)
        throw InternalError("symmetry blocks do not span the module");
    return out;
}

OreOp krylov_annihilator(const VecQ& target, const SnMatrix& sn) {
    if (is_zero_vec(target))
        throw InvalidInput("Krylov annihilator of the zero vector");
    std::vector<RFuncN> rel = krylov_relation(sn.a, target);
    std::map<int, RFuncN> cs;
    for (std::size_t i = 0; i < rel.size(); ++i)
        if (!rel[i].is_zero()) cs[static_cast<int>(i)] = rel[i];
    return OreOp::from_coeffs(std::move(cs)).normalized();
}

namespace {

// Chain S_n^j(R(H)) = p_j * h0 + Delta_k(c_j * h0) upward from the right
// factor's residual and certificate, then combine along l_left.
RFuncNK assemble_certificate(ReductionContext& ctx, const OreOp& l_left,
                             const RightFactorResult& right,
                             const OreOp& l_expanded, const RFuncNK& r0) {
    int ord = l_left.max_exp();
    std::vector<PolyK> p(static_cast<std::size_t>(ord) + 1);
    std::vector<RFuncNK> c(static_cast<std::size_t>(ord) + 1);
    p[0] = right.residual;
    c[0] = *right.cert;
    for (int j = 1; j <= ord; ++j) {
        StdForm sf =
            ctx.std_form(p[static_cast<std::size_t>(j - 1)].shift_n(1).to_rfuncnk() *
                             ctx.r1(),
                         true);
        if (!sf.frac.is_zero())
            throw InternalError("shift of a polynomial section left the span");
        p[static_cast<std::size_t>(j)] = sf.poly;
        c[static_cast<std::size_t>(j)] =
            c[static_cast<std::size_t>(j - 1)].shifted(1, Rat(0)) * ctx.r1() +
            *sf.cert;
    }
    PolyK psum;
    RFuncNK csum;
    for (const auto& [e, coeff] : l_left.coeffs()) {
        psum = psum + p[static_cast<std::size_t>(e)].mul_scalar(coeff);
        csum += RFuncNK::from_rfuncn(coeff) * c[static_cast<std::size_t>(e)];
    }
    if (!psum.is_zero())
        throw InternalError("combined annihilator missed the polynomial part");
    OreOp prod = l_left * right.op;
    RFuncN lam = l_expanded.coeff(l_expanded.max_exp()) / prod.coeff(prod.max_exp());
    return RFuncNK::from_rfuncn(lam) * csum / r0;
}

double seconds_since(std::chrono::steady_clock::time_point& mark) {
    auto now = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(now - mark).count();
    mark = now;
    return s;
}

}  // namespace

TelescoperResult telescope(const TermSpec& spec, const TelescopeOptions& opt) {
    TelescoperResult res;
    auto mark = std::chrono::steady_clock::now();

    res.h = certificates(spec);
    APReduction ap = ap_shift_reduce(res.h);
    res.r0 = ap.r0;
    res.h0 = ap.h0;
    ReductionContext ctx(ap.h0, opt.degree_cap);
    res.dim = ctx.basis().dim;
    res.timings.reduce = seconds_since(mark);

    res.right = right_factor(res.h, ctx, opt.certificate);
    res.timings.right = seconds_since(mark);

    VecQ target = ctx.coords(res.right.residual);
    if (opt.symmetry) res.automorphisms = detect_automorphisms(ap.h0);
    res.parts = decompose(ctx, res.automorphisms, target);
    res.timings.split = seconds_since(mark);

    std::vector<OreOp> all, kept;
    if (!res.parts.components.empty()) {
        const SnMatrix& sn = ctx.sn_matrix();
        for (Component& comp : res.parts.components) {
            comp.op = krylov_annihilator(comp.target, sn);
            all.push_back(comp.op);
            if (!comp.zero_sum) kept.push_back(comp.op);
        }
    }
    res.timings.components = seconds_since(mark);

    res.l_left = all.empty() ? OreOp::identity().normalized() : lclm(all);
    OreOp min_left = kept.empty() ? OreOp::identity().normalized() : lclm(kept);
    res.l_min = (min_left * res.right.op).normalized();
    res.factored_bytes = res.right.op.text_size();
    for (const Component& comp : res.parts.components)
        res.factored_bytes += comp.op.text_size();
    if (opt.expanded || opt.certificate) {
        res.l_expanded = (res.l_left * res.right.op).normalized();
        res.expanded_bytes = res.l_expanded->text_size();
    }
    if (opt.certificate)
        res.certificate =
            assemble_certificate(ctx, res.l_left, res.right, *res.l_expanded, res.r0);
    res.timings.combine = seconds_since(mark);
    return res;
}

}  // namespace hyptel
