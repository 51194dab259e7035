#include "hyptel/reduction.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <tuple>
#include <utility>

#include "hyptel/errors.hpp"

namespace hyptel {

namespace {

// Elimination priority key; smaller keys are eliminated first.  Layout:
//   {0, class, -distance, side, -mult}   fractional coordinate away from the
//                                        residue position of its class
//   {1, class, -mult, 0, 0}              fractional coordinate at the residue
//                                        position
//   {2, -degree, 0, 0, 0}                polynomial coordinate k^degree
// Elimination therefore drains pole chains from the outside in, then residue
// positions, then polynomial degrees from the top down.
using Key = std::array<long, 5>;

Int mod_floor(const Int& c, const Int& b) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), b.get_mpz_t());
    return r;
}

}  // namespace

struct ReductionContext::Engine {
    // One family of poles {a*n + b*k + c0 + b*j : j in Z}.  e is the net
    // exponent of the family inside r2 (shift-reduced, so a single position),
    // sink the position where irreducible residues accumulate.  [alo, ahi] x
    // [1, maxmult] tracks which difference generators 1/p_pos^m have been
    // inserted already.
    struct Cls {
        Int a, b, c0;
        long rho_pos = 0;
        int e = 0;
        long sink = 0;
        long alo = 0, ahi = -1;
        int maxmult = 0;
    };

    // A row of the elimination basis; v holds its coordinates and g the
    // witness with value(row) = S_k(g)*r2 - g.
    struct Row {
        std::map<Key, RFuncN> v;
        RFuncNK g{0L};
    };

    HTerm h0;
    int cap = 0;
    RFuncNK rho{0L};
    RFuncNK r1b{0L}, r2b{0L};
    int delta = 0;                        // k-degree of num(rho) minus den(rho)
    std::vector<Cls> cls;
    std::map<std::tuple<Int, Int, Int>, int> cls_index;
    std::map<Key, Row> pivots;
    int poly_t = -1;                      // monomial generators inserted up to here
    bool core_done = false;
    std::optional<SubmoduleBasis> basis_memo;
    std::optional<SnMatrix> sn_memo;

    explicit Engine(HTerm h, int degree_cap) : h0(std::move(h)) {
        rho = h0.r2;
        r1b = h0.r1.shifted(-1, Rat(0)).inverse();
        r2b = h0.r2.shifted(0, Rat(-1)).inverse();
        delta = std::max(rho.num().degree_k(), 0) - std::max(rho.den().degree_k(), 0);
        cap = degree_cap > 0 ? degree_cap : default_cap(h0.spec);
        scan_rho(rho.num(), +1);
        scan_rho(rho.den(), -1);
        for (auto& c : cls)
            if (c.e != 0) c.sink = c.rho_pos;
    }

    static int default_cap(const TermSpec& spec) {
        long w = 0;
        for (const auto& f : spec.factors)
            if (f.kind == Factor::Kind::Binomial) w += f.exp < 0 ? -f.exp : f.exp;
        return static_cast<int>(4 * w + 8);
    }

    int intern_class(const Int& a, const Int& b, const Int& c0) {
        auto key = std::make_tuple(a, b, c0);
        auto it = cls_index.find(key);
        if (it != cls_index.end()) return it->second;
        int id = static_cast<int>(cls.size());
        cls.push_back(Cls{a, b, c0});
        cls_index.emplace(key, id);
        return id;
    }

    void scan_rho(const PolyNK& p, int sign) {
        AffineFactorization af = factor_affine_k(p);
        if (!af.complete())
            throw UnsupportedDenominator(
                "shift quotient has a factor that is not affine in k: " +
                af.leftover.to_string());
        for (const auto& [f, m] : af.factors) {
            if (f.b == 0) continue;
            Int c0 = mod_floor(f.c, f.b);
            long pos = to_long_checked((f.c - c0) / f.b, "pole position");
            int id = intern_class(f.a, f.b, c0);
            if (cls[id].e != 0 && cls[id].rho_pos != pos)
                throw InvalidInput("reduction context needs a shift-reduced term");
            cls[id].e += sign * m;
            cls[id].rho_pos = pos;
        }
    }

    Key frac_key(int c, long pos, int m) const {
        const Cls& C = cls[static_cast<std::size_t>(c)];
        if (pos == C.sink) return {1, c, -static_cast<long>(m), 0, 0};
        long dist = pos > C.sink ? pos - C.sink : C.sink - pos;
        return {0, c, -dist, pos > C.sink ? 0 : 1, -static_cast<long>(m)};
    }
    static Key poly_key(int d) { return {2, -static_cast<long>(d), 0, 0, 0}; }

    long pos_of(const Key& k) const {
        const Cls& C = cls[static_cast<std::size_t>(k[1])];
        if (k[0] == 1) return C.sink;
        return k[3] == 0 ? C.sink + (-k[2]) : C.sink - (-k[2]);
    }
    static int mult_of(const Key& k) {
        return static_cast<int>(k[0] == 1 ? -k[2] : -k[4]);
    }

    // Exact expansion of f into coordinates: peel one affine pole power at a
    // time by evaluating at its root, then split the k-free-denominator rest
    // into polynomial coordinates.
    Row expand(const RFuncNK& f) {
        Row r;
        RFuncNK rest = f;
        while (true) {
            AffineFactorization af = factor_affine_k(rest.den());
            if (!af.complete())
                throw UnsupportedDenominator(
                    "denominator factor is not affine in k: " + af.leftover.to_string());
            const AffinePoly* p = nullptr;
            int m = 0;
            for (const auto& [f2, m2] : af.factors)
                if (f2.b != 0) { p = &f2; m = m2; break; }
            if (p == nullptr) break;
            Int c0 = mod_floor(p->c, p->b);
            long pos = to_long_checked((p->c - c0) / p->b, "pole position");
            int id = intern_class(p->a, p->b, c0);
            RFuncNK pp = RFuncNK(p->to_poly()).pow(m);
            RFuncN coef = (rest * pp)
                              .subst_k_affine(make_rat(-p->a, p->b), Rat(0),
                                              make_rat(-p->c, p->b))
                              .as_rfuncn();
            add_to(r, frac_key(id, pos, m), coef);
            rest = rest - RFuncNK::from_rfuncn(coef) / pp;
        }
        PolyK tail = PolyK::from_rfuncnk(rest);
        for (int d = 0; d <= tail.degree(); ++d)
            if (!tail.coeff(d).is_zero()) add_to(r, poly_key(d), tail.coeff(d));
        return r;
    }

    static void add_to(Row& r, const Key& k, const RFuncN& val) {
        if (val.is_zero()) return;
        auto it = r.v.find(k);
        if (it == r.v.end()) {
            r.v.emplace(k, val);
            return;
        }
        it->second = it->second + val;
        if (it->second.is_zero()) r.v.erase(it);
    }

    // r -= c * p, including the witness when track is set.
    void subtract_scaled(Row& r, const RFuncN& c, const Row& p, bool track) {
        for (const auto& [k, val] : p.v) add_to(r, k, -(c * val));
        if (track) r.g = r.g - RFuncNK::from_rfuncn(c) * p.g;
    }

    // Eliminate every coordinate of r that has a pivot.  Rows only ever gain
    // coordinates later in the key order, so one forward sweep suffices.
    // g_acc, when given, accumulates the witness combination that was
    // subtracted.
    void reduce_row(Row& r, bool track_row_g, RFuncNK* g_acc) {
        auto it = r.v.begin();
        while (it != r.v.end()) {
            auto pv = pivots.find(it->first);
            if (pv == pivots.end()) {
                ++it;
                continue;
            }
            Key at = it->first;
            RFuncN c = it->second;
            subtract_scaled(r, c, pv->second, track_row_g);
            if (g_acc != nullptr)
                *g_acc = *g_acc + RFuncNK::from_rfuncn(c) * pv->second.g;
            it = r.v.upper_bound(at);
        }
    }

    void insert_row(Row r) {
        reduce_row(r, true, nullptr);
        if (r.v.empty()) return;
        RFuncN lead = r.v.begin()->second;
        if (!lead.is_one()) {
            RFuncN inv = lead.inverse();
            for (auto& [k, val] : r.v) val = val * inv;
            r.g = r.g * RFuncNK::from_rfuncn(inv);
        }
        Key at = r.v.begin()->first;
        pivots.emplace(at, std::move(r));
    }

    void add_frac_atom(int c, long pos, int m) {
        const Cls& C = cls[static_cast<std::size_t>(c)];
        RFuncNK g = RFuncNK(PolyNK::affine(C.a, C.b, C.c0 + C.b * pos)).pow(-static_cast<long>(m));
        Row r = expand(g.shifted(0, Rat(1)) * rho - g);
        r.g = g;
        insert_row(std::move(r));
    }

    void add_poly_atom(int t) {
        RFuncNK g(PolyNK::monomial(1, 0, t));
        Row r = expand(g.shifted(0, Rat(1)) * rho - g);
        r.g = g;
        insert_row(std::move(r));
    }

    void ensure_poly_atoms(int t) {
        for (int tt = poly_t + 1; tt <= t; ++tt) add_poly_atom(tt);
        poly_t = std::max(poly_t, t);
    }

    // Monomial generators up to the cap (plus slack so that every degree up
    // to the cap gets a chance to become reducible even when the shift
    // quotient lowers degrees).
    void ensure_core() {
        if (core_done) return;
        core_done = true;
        ensure_poly_atoms(cap + std::max(0, -delta) + 2);
    }

    // Pole-chain generators needed to drain coordinates of this class at
    // positions [lo, hi] and multiplicities up to mult into the sink.
    void ensure_window(int c, long lo, long hi, int mult) {
        Cls& C = cls[static_cast<std::size_t>(c)];
        long alo = std::min(lo, C.sink);
        long ahi = std::max(hi, C.sink) - 1;
        if (C.maxmult > 0) {
            alo = std::min(alo, C.alo);
            ahi = std::max(ahi, C.ahi);
        }
        int mm = std::max(mult, C.maxmult);
        if (ahi >= alo) {
            if (ahi - alo + 1 > 6L * cap + 40)
                throw AnsatzCapExceeded(
                    "pole positions span " + std::to_string(ahi - alo + 1) +
                    " shifts, past the limit for degree cap " + std::to_string(cap));
            if (mm > cap + 8)
                throw AnsatzCapExceeded(
                    "pole multiplicity " + std::to_string(mm) +
                    " is past the limit for degree cap " + std::to_string(cap));
            for (long pos = alo; pos <= ahi; ++pos)
                for (int m = 1; m <= mm; ++m) {
                    bool have = C.maxmult > 0 && pos >= C.alo && pos <= C.ahi &&
                                m <= C.maxmult;
                    if (!have) add_frac_atom(c, pos, m);
                }
            C.alo = alo;
            C.ahi = ahi;
        }
        C.maxmult = std::max(C.maxmult, mm);
    }

    bool window_covers(int c, long pos, int m) const {
        const Cls& C = cls[static_cast<std::size_t>(c)];
        if (pos == C.sink) return true;
        long at = pos < C.sink ? pos : pos - 1;
        return C.maxmult >= m && C.alo <= at && at <= C.ahi;
    }

    void check_poly_degree(const Key& k) const {
        int d = static_cast<int>(-k[1]);
        if (d > cap + std::max(0, -delta) + 2)
            throw AnsatzCapExceeded("reduction reached k-degree " + std::to_string(d) +
                                    ", past the degree cap " + std::to_string(cap));
    }

    StdForm std_form(const RFuncNK& f, bool track_cert) {
        ensure_core();
        Row t = expand(f);
        for (const auto& [k, val] : t.v) {
            (void)val;
            if (k[0] == 2) {
                if (-k[1] > cap)
                    throw AnsatzCapExceeded("input k-degree " + std::to_string(-k[1]) +
                                            " is past the degree cap " + std::to_string(cap));
                continue;
            }
            ensure_window(static_cast<int>(k[1]), pos_of(k), pos_of(k), mult_of(k));
        }
        RFuncNK g{0L};
        for (int round = 0;; ++round) {
            reduce_row(t, false, track_cert ? &g : nullptr);
            bool grew = false;
            for (const auto& [k, val] : t.v) {
                (void)val;
                if (k[0] == 2) {
                    check_poly_degree(k);
                    continue;
                }
                int c = static_cast<int>(k[1]);
                if (!window_covers(c, pos_of(k), mult_of(k))) {
                    ensure_window(c, pos_of(k), pos_of(k), mult_of(k));
                    grew = true;
                }
            }
            if (!grew) break;
            if (round >= 64)
                throw AnsatzCapExceeded("reduction failed to stabilize under degree cap " +
                                        std::to_string(cap));
        }
        StdForm out;
        RFuncNK frac{0L};
        std::vector<RFuncN> pc;
        for (const auto& [k, val] : t.v) {
            if (k[0] == 2) {
                int d = static_cast<int>(-k[1]);
                if (static_cast<int>(pc.size()) <= d) pc.resize(static_cast<std::size_t>(d) + 1);
                pc[static_cast<std::size_t>(d)] = val;
                continue;
            }
            const Cls& C = cls[static_cast<std::size_t>(k[1])];
            RFuncNK pole =
                RFuncNK(PolyNK::affine(C.a, C.b, C.c0 + C.b * pos_of(k))).pow(-static_cast<long>(mult_of(k)));
            frac += RFuncNK::from_rfuncn(val) * pole;
        }
        out.frac = frac;
        out.poly = PolyK(std::move(pc));
        if (track_cert) out.cert = g;
        return out;
    }

    const SubmoduleBasis& basis() {
        if (basis_memo) return *basis_memo;
        ensure_core();
        long dmax = -1;
        for (const auto& [k, row] : pivots) {
            (void)row;
            if (k[0] == 2) dmax = std::max(dmax, -k[1]);
        }
        SubmoduleBasis b;
        long upper = dmax < 0 ? cap : std::min<long>(cap, dmax - 1);
        for (long d = 0; d <= upper; ++d)
            if (pivots.find(poly_key(static_cast<int>(d))) == pivots.end())
                b.degrees.push_back(static_cast<int>(d));
        b.dim = static_cast<int>(b.degrees.size());
        basis_memo = std::move(b);
        for (int d = 0; d <= cap; ++d)
            if (pivots.find(poly_key(d)) != pivots.end())
                basis_memo->relations.emplace(d, coords(PolyK::monomial(RFuncN(1L), d)));
        return *basis_memo;
    }

    VecQ coords(const PolyK& p) {
        ensure_core();
        if (!basis_memo) basis();
        if (p.degree() > cap)
            throw AnsatzCapExceeded("coordinate request of k-degree " +
                                    std::to_string(p.degree()) + " is past the degree cap " +
                                    std::to_string(cap));
        Row t;
        for (int d = 0; d <= p.degree(); ++d)
            if (!p.coeff(d).is_zero()) add_to(t, poly_key(d), p.coeff(d));
        reduce_row(t, false, nullptr);
        VecQ out(static_cast<std::size_t>(basis_memo->dim), RFuncN(0L));
        for (const auto& [k, val] : t.v) {
            if (k[0] != 2)
                throw InternalError("polynomial reduction produced a fractional part");
            int d = static_cast<int>(-k[1]);
            auto it = std::find(basis_memo->degrees.begin(), basis_memo->degrees.end(), d);
            if (it == basis_memo->degrees.end())
                throw InternalError("polynomial residue outside the monomial basis");
            out[static_cast<std::size_t>(it - basis_memo->degrees.begin())] = val;
        }
        return out;
    }

    const SnMatrix& sn_matrix() {
        if (sn_memo) return *sn_memo;
        const SubmoduleBasis& b = basis();
        std::size_t dim = static_cast<std::size_t>(b.dim);
        MatQ a(dim, VecQ(dim, RFuncN(0L)));
        for (std::size_t j = 0; j < dim; ++j) {
            RFuncNK mj(PolyNK::monomial(1, 0, b.degrees[j]));
            StdForm sf = std_form(mj * h0.r1, false);
            if (!sf.frac.is_zero())
                throw InternalError("n-shift image kept a fractional part");
            VecQ col = coords(sf.poly);
            for (std::size_t i = 0; i < dim; ++i) a[i][j] = col[i];
        }
        EchelonQ ech(dim);
        bool inv = true;
        for (std::size_t i = 0; i < dim && inv; ++i)
            if (ech.insert(a[i])) inv = false;
        sn_memo = SnMatrix{std::move(a), inv};
        return *sn_memo;
    }
};

ReductionContext::ReductionContext(HTerm h, int degree_cap)
    : eng_(std::make_unique<Engine>(std::move(h), degree_cap)) {}
ReductionContext::~ReductionContext() = default;
ReductionContext::ReductionContext(ReductionContext&&) noexcept = default;
ReductionContext& ReductionContext::operator=(ReductionContext&&) noexcept = default;

const HTerm& ReductionContext::h0() const { return eng_->h0; }
int ReductionContext::degree_cap() const { return eng_->cap; }
const RFuncNK& ReductionContext::r1() const { return eng_->h0.r1; }
const RFuncNK& ReductionContext::r2() const { return eng_->h0.r2; }
const RFuncNK& ReductionContext::r1_back() const { return eng_->r1b; }
const RFuncNK& ReductionContext::r2_back() const { return eng_->r2b; }

StdForm ReductionContext::std_form(const RFuncNK& f, bool track_cert) {
    return eng_->std_form(f, track_cert);
}
const SubmoduleBasis& ReductionContext::basis() { return eng_->basis(); }
VecQ ReductionContext::coords(const PolyK& p) { return eng_->coords(p); }
const SnMatrix& ReductionContext::sn_matrix() { return eng_->sn_matrix(); }

}  // namespace hyptel
