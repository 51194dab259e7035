#include "hyptel/verify.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <utility>

#include "hyptel/errors.hpp"
#include "hyptel/modp.hpp"

namespace hyptel {

namespace {

std::string clipped(std::string s) {
    if (s.size() > 160) {
        s.resize(157);
        s += "...";
    }
    return s;
}

}  // namespace

nlohmann::json CheckResult::to_json() const {
    nlohmann::json j{{"name", name}, {"range", range}, {"pass", pass}};
    if (!witness.empty()) j["witness"] = witness;
    if (!skipped.empty()) j["skipped"] = skipped;
    return j;
}

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

std::string VerificationReport::to_string() const {
    std::ostringstream out;
    for (const auto& c : checks) {
        out << (c.pass ? "pass" : "FAIL") << "  " << c.name << "  " << c.range;
        if (!c.witness.empty()) out << "  [" << c.witness << "]";
        out << "\n";
    }
    return out.str();
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) arr.push_back(c.to_json());
    return nlohmann::json{{"passed", passed()}, {"checks", arr}};
}

SeqWindow sum_sequence(const TermSpec& spec, const KRange& k_range,
                       long n_from, long n_to, bool* regularized) {
    if (n_to < n_from) throw InvalidInput("empty n range for the sum");
    if (regularized) *regularized = false;
    SeqWindow w;
    w.offset = n_from;
    w.values.reserve(static_cast<std::size_t>(n_to - n_from + 1));
    for (long n = n_from; n <= n_to; ++n) {
        auto [lo, hi] = k_range.bounds(spec, n);
        Rat total(0);
        for (long k = lo; k <= hi; ++k) {
            bool reg = false;
            total += eval_term(spec, n, k, &reg);
            if (reg && regularized) *regularized = true;
        }
        w.values.push_back(total);
    }
    return w;
}

CheckResult check_annihilates(const OreOp& op, const SeqWindow& s) {
    if (op.is_zero()) throw InvalidInput("cannot check the zero operator");
    CheckResult res;
    res.name = "annihilates";
    long lo = s.first() - op.min_exp();
    long hi = s.last() - op.max_exp();
    if (hi < lo) {
        throw InsufficientWindow(
            "window n=" + std::to_string(s.first()) + ".." +
            std::to_string(s.last()) + " is too short for an order-" +
            std::to_string(op.order()) + " operator");
    }
    const RFuncN lc = op.coeff(op.max_exp());
    res.pass = true;
    long checked = 0;
    for (long n = lo; n <= hi; ++n) {
        Rat nv(n);
        bool usable = !lc.has_pole_at(nv) && lc.eval(nv) != 0;
        if (usable) {
            for (const auto& [e, c] : op.coeffs()) {
                if (c.has_pole_at(nv)) {
                    usable = false;
                    break;
                }
            }
        }
        if (!usable) {
            res.skipped.push_back(n);
            continue;
        }
        Rat acc(0);
        for (const auto& [e, c] : op.coeffs()) acc += c.eval(nv) * s.at(n + e);
        ++checked;
        if (acc != 0 && res.pass) {
            res.pass = false;
            res.witness =
                "n=" + std::to_string(n) + ": value " + hyptel::to_string(acc);
        }
    }
    if (checked == 0) {
        throw InsufficientWindow("every point in n=" + std::to_string(lo) +
                                 ".." + std::to_string(hi) + " was skipped");
    }
    res.range = "n=" + std::to_string(lo) + ".." + std::to_string(hi);
    if (!res.skipped.empty()) {
        res.range += ", " + std::to_string(res.skipped.size()) + " skipped";
    }
    return res;
}

CheckResult check_certificate(const OreOp& op, const RFuncNK& cert,
                              const HTerm& h) {
    if (op.is_zero() || op.min_exp() < 0) {
        throw InvalidInput(
            "certificate check needs a nonzero operator without negative "
            "shifts");
    }
    CheckResult res;
    res.name = "certificate";
    res.range = "operator order " + std::to_string(op.order());
    RFuncNK lhs(0L);
    RFuncNK cum(1L);
    int top = op.max_exp();
    for (int i = 0; i <= top; ++i) {
        RFuncN ci = op.coeff(i);
        if (!ci.is_zero()) lhs += RFuncNK::from_rfuncn(ci) * cum;
        if (i < top) cum *= h.r1.shifted(i, Rat(0));
    }
    RFuncNK residual = lhs - (cert.shifted(0, Rat(1)) * h.r2 - cert);
    res.pass = residual.is_zero();
    if (!res.pass) {
        res.witness = "identity residual " + clipped(residual.to_string());
    }
    return res;
}

CheckResult check_certificate_poles(const RFuncNK& cert, const TermSpec& spec,
                                    const KRange& k_range, long n_from,
                                    long n_to) {
    if (n_to < n_from) throw InvalidInput("empty n range for the pole scan");
    CheckResult res;
    res.name = "certificate_poles";
    res.range = "n=" + std::to_string(n_from) + ".." + std::to_string(n_to) +
                ", k widened by one";
    res.pass = true;
    for (long n = n_from; n <= n_to; ++n) {
        auto [lo, hi] = k_range.bounds(spec, n);
        for (long k = lo; k <= hi + 1; ++k) {
            if (!cert.has_pole_at(Rat(n), Rat(k))) continue;
            bool vanishes = false;
            try {
                vanishes = eval_term(spec, n, k) == 0;
            } catch (const PoleAtPoint&) {
            }
            if (vanishes) {
                // The summand vanishes there, so the product with the
                // certificate stays finite; note the row and move on.
                if (res.skipped.empty() || res.skipped.back() != n) {
                    res.skipped.push_back(n);
                }
            } else if (res.pass) {
                res.pass = false;
                res.witness = "certificate pole at (n,k)=(" +
                              std::to_string(n) + "," + std::to_string(k) +
                              ")";
            }
        }
    }
    return res;
}

namespace {

// Reduced row echelon data mod p for the ansatz matrix: pivot columns plus
// the canonical nullspace vector (first free column set to one, later free
// columns zero); the vector is empty at full column rank.
struct ModNull {
    std::vector<int> pivots;
    std::vector<std::uint64_t> vec;
};

ModNull nullspace_mod(std::vector<std::vector<std::uint64_t>> a,
                      std::size_t ncols, std::uint64_t p) {
    ModNull out;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < a.size(); ++col) {
        std::size_t sel = row;
        while (sel < a.size() && a[sel][col] == 0) ++sel;
        if (sel == a.size()) continue;
        std::swap(a[row], a[sel]);
        std::uint64_t iv = modp::inv(a[row][col], p);
        for (std::size_t c = col; c < ncols; ++c) {
            a[row][c] = modp::mul(a[row][c], iv, p);
        }
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == row || a[r][col] == 0) continue;
            std::uint64_t f = a[r][col];
            for (std::size_t c = col; c < ncols; ++c) {
                a[r][c] = modp::sub(a[r][c], modp::mul(f, a[row][c], p), p);
            }
        }
        out.pivots.push_back(static_cast<int>(col));
        ++row;
    }
    if (out.pivots.size() == ncols) return out;
    std::size_t free_col = 0;
    std::size_t at = 0;
    while (at < out.pivots.size() &&
           out.pivots[at] == static_cast<int>(free_col)) {
        ++at;
        ++free_col;
    }
    out.vec.assign(ncols, 0);
    out.vec[free_col] = 1;
    for (std::size_t i = 0; i < out.pivots.size(); ++i) {
        out.vec[out.pivots[i]] = modp::sub(0, a[i][free_col], p);
    }
    return out;
}

// True when b is a strictly better pivot profile than a: higher rank, or the
// same rank with pivots further left (ranks mod bad primes only drop and
// pivots only move right).
bool better_pivots(const std::vector<int>& a, const std::vector<int>& b) {
    if (b.size() != a.size()) return b.size() > a.size();
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(),
                                        a.end());
}

// Matrix of the order-r, degree-d ansatz mod p: row per usable n, column
// (i, j) holding n^j * s(n + i).
std::vector<std::vector<std::uint64_t>> ansatz_matrix(
    const std::vector<std::uint64_t>& vals, long first, int r, int d,
    std::uint64_t p) {
    std::size_t rows = vals.size() - static_cast<std::size_t>(r);
    std::vector<std::vector<std::uint64_t>> m(rows);
    for (std::size_t e = 0; e < rows; ++e) {
        std::uint64_t nv = modp::mod_int(Int(first + static_cast<long>(e)), p);
        auto& row = m[e];
        row.reserve(static_cast<std::size_t>((r + 1) * (d + 1)));
        for (int i = 0; i <= r; ++i) {
            std::uint64_t base = vals[e + static_cast<std::size_t>(i)];
            std::uint64_t npow = 1;
            for (int j = 0; j <= d; ++j) {
                row.push_back(modp::mul(base, npow, p));
                npow = modp::mul(npow, nv, p);
            }
        }
    }
    return m;
}

// Residues of the window mod p, or nullopt when a denominator collides with
// the prime.
std::optional<std::vector<std::uint64_t>> window_mod(const SeqWindow& s,
                                                     std::uint64_t p) {
    std::vector<std::uint64_t> vals;
    vals.reserve(s.values.size());
    try {
        for (const Rat& v : s.values) vals.push_back(modp::mod_rat(v, p));
    } catch (const InternalError&) {
        return std::nullopt;
    }
    return vals;
}

// Exact annihilation test of integer coefficient polynomials C_i over the
// whole window, margin rows included.
bool verify_exact(const std::vector<PolyZ>& cs, const SeqWindow& s) {
    int r = static_cast<int>(cs.size()) - 1;
    long rows = static_cast<long>(s.values.size()) - r;
    for (long e = 0; e < rows; ++e) {
        Rat nv(s.first() + e);
        Rat acc(0);
        for (int i = 0; i <= r; ++i) {
            if (cs[static_cast<std::size_t>(i)].is_zero()) continue;
            acc += cs[static_cast<std::size_t>(i)].eval(nv) *
                   s.values[static_cast<std::size_t>(e + i)];
        }
        if (acc != 0) return false;
    }
    return true;
}

// Multi-modular solve of the order-r, degree-d ansatz: CRT the canonical
// nullspace vector across primes until every coordinate reconstructs to a
// rational and the cleared candidate annihilates the window exactly.
std::optional<OreOp> reconstruct(const SeqWindow& s, int r, int d) {
    std::size_t ncols = static_cast<std::size_t>((r + 1) * (d + 1));
    std::vector<int> ref_pivots;
    std::vector<Int> resid(ncols, Int(0));
    Int modulus(1);
    bool started = false;
    for (std::size_t idx = 0; idx < 64; ++idx) {
        std::uint64_t p = modp::nth_prime(idx);
        auto vals = window_mod(s, p);
        if (!vals) continue;
        ModNull nul = nullspace_mod(ansatz_matrix(*vals, s.first(), r, d, p),
                                    ncols, p);
        // Full column rank mod a good prime already forces full rank over
        // the rationals, so nothing is lost by giving up here.
        if (nul.vec.empty()) return std::nullopt;
        if (!started || better_pivots(ref_pivots, nul.pivots)) {
            started = true;
            ref_pivots = nul.pivots;
            resid.assign(ncols, Int(0));
            modulus = 1;
        } else if (nul.pivots != ref_pivots) {
            continue;
        }
        for (std::size_t c = 0; c < ncols; ++c) {
            resid[c] = modp::crt(resid[c], modulus, Int(nul.vec[c]), Int(p));
        }
        modulus *= Int(p);
        std::vector<Rat> sol(ncols);
        bool all = true;
        for (std::size_t c = 0; c < ncols && all; ++c) {
            all = modp::rational_reconstruct(resid[c], modulus, sol[c]);
        }
        if (!all) continue;
        Int den(1);
        for (const Rat& q : sol) {
            Int g;
            mpz_gcd(g.get_mpz_t(), den.get_mpz_t(),
                    q.get_den().get_mpz_t());
            den = den / g * q.get_den();
        }
        std::vector<PolyZ> cs;
        cs.reserve(static_cast<std::size_t>(r + 1));
        for (int i = 0; i <= r; ++i) {
            std::vector<Int> co(static_cast<std::size_t>(d + 1));
            for (int j = 0; j <= d; ++j) {
                const Rat& q = sol[static_cast<std::size_t>(i * (d + 1) + j)];
                co[static_cast<std::size_t>(j)] =
                    q.get_num() * (den / q.get_den());
            }
            cs.emplace_back(std::move(co));
        }
        if (!verify_exact(cs, s)) continue;
        std::map<int, RFuncN> coeffs;
        for (int i = 0; i <= r; ++i) {
            if (!cs[static_cast<std::size_t>(i)].is_zero()) {
                coeffs[i] = RFuncN(cs[static_cast<std::size_t>(i)]);
            }
        }
        if (coeffs.empty()) return std::nullopt;
        OreOp op = OreOp::from_coeffs(std::move(coeffs)).normalized();
        // Normalization strips shared polynomial factors and trailing shift
        // powers; on degenerate windows (say, a spike followed by zeros) the
        // stripped form can lose the annihilation property, so it is checked
        // again and rejected in favor of a larger ansatz.
        std::vector<PolyZ> stripped(static_cast<std::size_t>(op.order()) + 1);
        for (int i = 0; i <= op.order(); ++i) {
            stripped[static_cast<std::size_t>(i)] = op.coeff(i).num();
        }
        if (!verify_exact(stripped, s)) return std::nullopt;
        return op;
    }
    return std::nullopt;
}

}  // namespace

std::optional<OreOp> guess_recurrence(const SeqWindow& s, int max_order,
                                      int max_degree) {
    if (max_order < 0 || max_degree < 0) {
        throw InvalidInput("negative cap for recurrence guessing");
    }
    long len = static_cast<long>(s.values.size());
    long need = static_cast<long>(max_order + 1) * (max_degree + 2) +
                max_order + 10;
    if (len < need) {
        throw InsufficientWindow(
            "guessing up to order " + std::to_string(max_order) +
            ", degree " + std::to_string(max_degree) + " needs " +
            std::to_string(need) + " values, got " + std::to_string(len));
    }
    for (int r = 0; r <= max_order; ++r) {
        // One probe prime decides whether any operator of this order fits
        // within the degree cap; an empty nullspace mod p rules it out over
        // the rationals outright.
        std::optional<ModNull> probe;
        for (std::size_t idx = 0; idx < 64 && !probe; ++idx) {
            std::uint64_t p = modp::nth_prime(idx);
            auto vals = window_mod(s, p);
            if (!vals) continue;
            probe = nullspace_mod(
                ansatz_matrix(*vals, s.first(), r, max_degree, p),
                static_cast<std::size_t>((r + 1) * (max_degree + 1)), p);
        }
        if (!probe) {
            throw InternalError(
                "no usable prime for the recurrence ansatz window");
        }
        if (probe->vec.empty()) continue;
        for (int d = 0; d <= max_degree; ++d) {
            if (auto op = reconstruct(s, r, d)) return op;
        }
    }
    return std::nullopt;
}

}  // namespace hyptel
