#include "hyptel/ore.hpp"

#include <algorithm>

#include "hyptel/errors.hpp"
#include "hyptel/linalg.hpp"
#include "hyptel/parser.hpp"

namespace hyptel {

const Rat& SeqWindow::at(long n) const {
    long i = n - offset;
    if (i < 0 || i >= static_cast<long>(values.size())) {
        throw InvalidInput("sequence value at n = " + std::to_string(n) +
                           " is outside the window");
    }
    return values[static_cast<std::size_t>(i)];
}

OreOp::OreOp(const RFuncN& c) {
    if (!c.is_zero()) c_[0] = c;
}

OreOp OreOp::monomial(const RFuncN& c, int exp) {
    OreOp r;
    if (!c.is_zero()) r.c_[exp] = c;
    return r;
}

OreOp OreOp::from_coeffs(std::map<int, RFuncN> coeffs) {
    OreOp r;
    r.c_ = std::move(coeffs);
    r.prune();
    return r;
}

void OreOp::prune() {
    for (auto it = c_.begin(); it != c_.end();) {
        if (it->second.is_zero()) {
            it = c_.erase(it);
        } else {
            ++it;
        }
    }
    normalized_ = false;
}

int OreOp::order() const {
    if (c_.empty()) return -1;
    return c_.rbegin()->first - c_.begin()->first;
}

int OreOp::min_exp() const { return c_.empty() ? 0 : c_.begin()->first; }

int OreOp::max_exp() const { return c_.empty() ? 0 : c_.rbegin()->first; }

RFuncN OreOp::coeff(int exp) const {
    auto it = c_.find(exp);
    return it == c_.end() ? RFuncN() : it->second;
}

OreOp OreOp::operator-() const {
    OreOp r = *this;
    for (auto& [e, c] : r.c_) c = -c;
    r.normalized_ = false;
    return r;
}

OreOp OreOp::operator+(const OreOp& o) const {
    OreOp r = *this;
    for (const auto& [e, c] : o.c_) {
        auto it = r.c_.find(e);
        if (it == r.c_.end()) {
            r.c_[e] = c;
        } else {
            it->second += c;
        }
    }
    r.prune();
    return r;
}

OreOp OreOp::operator-(const OreOp& o) const { return *this + (-o); }

OreOp OreOp::operator*(const OreOp& o) const {
    OreOp r;
    for (const auto& [i, a] : c_) {
        for (const auto& [j, b] : o.c_) {
            RFuncN term = a * b.shifted(i);
            if (term.is_zero()) continue;
            auto it = r.c_.find(i + j);
            if (it == r.c_.end()) {
                r.c_[i + j] = term;
            } else {
                it->second += term;
            }
        }
    }
    r.prune();
    return r;
}

OreOp OreOp::normalized() const {
    if (c_.empty()) {
        OreOp r;
        r.normalized_ = true;
        return r;
    }
    int m = min_exp();
    PolyZ den(1L);
    for (const auto& [e, c] : c_) den = poly_lcm(den, c.den());
    std::map<int, PolyZ> cleared;
    for (const auto& [e, c] : c_) {
        cleared[e - m] = c.num() * den.divexact(c.den());
    }
    PolyZ g;
    for (const auto& [e, p] : cleared) g = poly_gcd(g, p);
    if (cleared.rbegin()->second.lc() * g.lc() < 0) g = -g;
    OreOp r;
    for (const auto& [e, p] : cleared) r.c_[e] = RFuncN(p.divexact(g));
    r.normalized_ = true;
    return r;
}

std::pair<OreOp, OreOp> OreOp::right_divmod(const OreOp& a, const OreOp& b) {
    if (b.is_zero()) throw DivisionByZero("right division by the zero operator");
    if ((!a.is_zero() && a.min_exp() < 0) || b.min_exp() < 0) {
        throw InvalidInput("right division needs nonnegative exponents");
    }
    OreOp q, r = a;
    int db = b.max_exp();
    const RFuncN& lb = b.c_.rbegin()->second;
    while (!r.is_zero() && r.max_exp() >= db) {
        int d = r.max_exp() - db;
        RFuncN f = r.c_.rbegin()->second / lb.shifted(d);
        OreOp t = monomial(f, d);
        q = q + t;
        r = r - t * b;
    }
    return {q, r};
}

SeqWindow OreOp::apply(const SeqWindow& s) const {
    if (is_zero()) {
        SeqWindow out;
        out.offset = s.offset;
        out.values.assign(s.values.size(), Rat(0));
        return out;
    }
    int lo = min_exp(), hi = max_exp();
    long from = s.first() - std::min(lo, 0);
    long to = s.last() - hi;
    if (to < from) {
        throw InsufficientWindow("window of length " +
                                 std::to_string(s.values.size()) +
                                 " is too short for order " +
                                 std::to_string(order()));
    }
    SeqWindow out;
    out.offset = from;
    out.values.reserve(static_cast<std::size_t>(to - from + 1));
    for (long n = from; n <= to; ++n) {
        Rat acc(0);
        for (const auto& [e, c] : c_) {
            if (c.has_pole_at(Rat(n))) {
                throw PoleAtPoint("coefficient pole at n = " + std::to_string(n));
            }
            acc += c.eval(Rat(n)) * s.at(n + e);
        }
        out.values.push_back(acc);
    }
    return out;
}

std::string OreOp::to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        bool neg = it->second.num().lc() < 0;
        RFuncN q = neg ? -it->second : it->second;
        int nterms = 0;
        for (const auto& v : q.num().coeffs()) {
            if (v != 0) ++nterms;
        }
        // A multi-term polynomial numerator needs its own parentheses; a
        // fraction binds tightly enough already.
        std::string qs = q.to_string();
        if (q.den().is_one() && nterms > 1) qs = "(" + qs + ")";
        std::string body;
        if (it->first == 0) {
            body = qs;
        } else {
            std::string spart =
                it->first == 1 ? "S" : "S^" + std::to_string(it->first);
            body = q.is_one() ? spart : qs + "*" + spart;
        }
        if (out.empty()) {
            out = neg ? "-" + body : body;
        } else {
            out += neg ? " - " + body : " + " + body;
        }
    }
    return out;
}

nlohmann::json OreOp::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [e, c] : c_) {
        nlohmann::json num = nlohmann::json::array();
        for (const auto& v : c.num().coeffs()) num.push_back(hyptel::to_string(v));
        nlohmann::json den = nlohmann::json::array();
        for (const auto& v : c.den().coeffs()) den.push_back(hyptel::to_string(v));
        arr.push_back({{"exp", e}, {"num_coeffs", num}, {"den_coeffs", den}});
    }
    return arr;
}

OreOp OreOp::from_json(const nlohmann::json& j) {
    std::map<int, RFuncN> cs;
    for (const auto& entry : j) {
        int e = entry.at("exp").get<int>();
        auto read = [](const nlohmann::json& a) {
            std::vector<Int> v;
            for (const auto& x : a) v.push_back(int_from_string(x.get<std::string>()));
            return PolyZ(std::move(v));
        };
        PolyZ num = read(entry.at("num_coeffs"));
        PolyZ den = read(entry.at("den_coeffs"));
        if (cs.count(e)) throw InvalidInput("duplicate exponent in operator JSON");
        cs[e] = RFuncN(num, den);
    }
    return from_coeffs(std::move(cs));
}

OreOp lclm(const std::vector<OreOp>& ops) {
    if (ops.empty()) throw InvalidInput("LCLM of an empty list");
    std::vector<OreOp> norm;
    for (const auto& op : ops) {
        if (op.is_zero()) throw InvalidInput("LCLM of the zero operator");
        OreOp n = op.normalized();
        if (n.order() >= 1) norm.push_back(std::move(n));
    }
    if (norm.empty()) return OreOp::identity().normalized();
    // Direct sum of the cyclic modules D/D*L_i; the LCLM is the minimal
    // annihilator of the vector of generators under the twisted S action.
    std::size_t dim = 0;
    for (const auto& op : norm) dim += static_cast<std::size_t>(op.order());
    MatQ a(dim, VecQ(dim));
    VecQ v0(dim);
    std::size_t base = 0;
    for (const auto& op : norm) {
        std::size_t d = static_cast<std::size_t>(op.order());
        const RFuncN lead = op.coeff(static_cast<int>(d));
        for (std::size_t i = 1; i < d; ++i) a[base + i][base + i - 1] = RFuncN(1L);
        for (std::size_t i = 0; i < d; ++i) {
            RFuncN ci = op.coeff(static_cast<int>(i));
            if (!ci.is_zero()) {
                a[base + i][base + d - 1] -= ci / lead;
            }
        }
        v0[base] = RFuncN(1L);
        base += d;
    }
    std::vector<RFuncN> rel = krylov_relation(a, v0);
    std::map<int, RFuncN> cs;
    for (std::size_t i = 0; i < rel.size(); ++i) {
        if (!rel[i].is_zero()) cs[static_cast<int>(i)] = rel[i];
    }
    return OreOp::from_coeffs(std::move(cs)).normalized();
}

namespace {

OreOp op_from_expr(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Number:
            return OreOp(RFuncN(Rat(e.number)));
        case Expr::Kind::Variable:
            if (e.name == "n") return OreOp(RFuncN(PolyZ({Int(0), Int(1)})));
            if (e.name == "S") return OreOp::shift();
            throw InvalidInput("unknown identifier '" + e.name +
                               "' in operator (position " + std::to_string(e.pos) +
                               ")");
        case Expr::Kind::Unary:
            return -op_from_expr(*e.args[0]);
        case Expr::Kind::Binary: {
            if (e.op == '^') {
                OreOp base = op_from_expr(*e.args[0]);
                const Expr* ex = e.args[1].get();
                bool neg = false;
                while (ex->kind == Expr::Kind::Unary) {
                    neg = !neg;
                    ex = ex->args[0].get();
                }
                if (ex->kind != Expr::Kind::Number) {
                    throw InvalidInput("operator exponent must be an integer "
                                       "(position " + std::to_string(ex->pos) + ")");
                }
                long p = to_long_checked(ex->number, "exponent");
                if (neg) p = -p;
                if (p < 0) {
                    // Only monomials c*S^e invert cleanly.
                    if (base.coeffs().size() != 1) {
                        throw InvalidInput("cannot raise a sum to a negative power "
                                           "(position " + std::to_string(e.pos) + ")");
                    }
                    auto [exp, c] = *base.coeffs().begin();
                    OreOp inv = OreOp::monomial(c.shifted(-exp).inverse(), -exp);
                    OreOp r = OreOp::identity();
                    for (long i = 0; i < -p; ++i) r = r * inv;
                    return r;
                }
                OreOp r = OreOp::identity();
                for (long i = 0; i < p; ++i) r = r * base;
                return r;
            }
            OreOp l = op_from_expr(*e.args[0]);
            OreOp r = op_from_expr(*e.args[1]);
            switch (e.op) {
                case '+': return l + r;
                case '-': return l - r;
                case '*': return l * r;
                case '/': {
                    if (r.is_zero()) {
                        throw DivisionByZero("division by zero in operator "
                                             "(position " + std::to_string(e.pos) +
                                             ")");
                    }
                    if (r.coeffs().size() != 1 || r.min_exp() != 0) {
                        throw InvalidInput("can only divide by a coefficient "
                                           "(position " + std::to_string(e.pos) +
                                           ")");
                    }
                    return l * OreOp(r.coeff(0).inverse());
                }
                default: break;
            }
            throw InternalError("unknown binary operator");
        }
        case Expr::Kind::Call:
            throw InvalidInput("function calls are not allowed in operators "
                               "(position " + std::to_string(e.pos) + ")");
    }
    throw InternalError("unhandled expression node");
}

}  // namespace

OreOp parse_op(const std::string& text) {
    return op_from_expr(*parse_expression(text));
}

}  // namespace hyptel
