#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyptel/rfuncnk.hpp"

namespace hyptel {

// Integer-affine form a*n + b*k + c.
struct AffineNK {
    Int a, b, c;

    PolyNK to_poly() const { return PolyNK::affine(a, b, c); }
    Rat eval(const Rat& n0, const Rat& k0) const { return a * n0 + b * k0 + c; }
    friend bool operator==(const AffineNK&, const AffineNK&) = default;
    friend AffineNK operator-(const AffineNK& x, const AffineNK& y) {
        return {x.a - y.a, x.b - y.b, x.c - y.c};
    }
    std::string to_string() const { return to_poly().to_string(); }
};

// One multiplicative building block of a hypergeometric term.
struct Factor {
    enum class Kind { Binomial, Factorial, Power };

    Kind kind;
    AffineNK arg1;                  // binomial upper / factorial argument /
                                    // power exponent
    AffineNK arg2{0, 0, 0};         // binomial lower
    Rat base = 1;                   // power base q, nonzero
    long exp = 1;                   // nonzero; folded into arg1 for powers

    std::string to_string() const;
    friend bool operator==(const Factor&, const Factor&) = default;
};

// Product of factors times a rational prefactor.
struct TermSpec {
    std::vector<Factor> factors;
    RFuncNK prefactor{1L};

    std::string to_string() const;
    friend bool operator==(const TermSpec&, const TermSpec&) = default;
};

// A term together with its shift certificates.
struct HTerm {
    TermSpec spec;
    RFuncNK r1;                     // S_n(H)/H
    RFuncNK r2;                     // S_k(H)/H
};

// Substitution on k that maps the term to a rational multiple of itself:
// phi sends k to n-k (order 2), tau(p) sends k to k + 1/p (order p).
struct Automorphism {
    enum class Kind { Phi, Tau };

    Kind kind;
    long period;                    // 2 for phi, p for tau
    RFuncNK ratio;                  // image(H)/H

    // Image of k: alpha*n + beta*k + gamma.
    Rat alpha() const { return kind == Kind::Phi ? Rat(1) : Rat(0); }
    Rat beta() const { return kind == Kind::Phi ? Rat(-1) : Rat(1); }
    Rat gamma() const {
        return kind == Kind::Phi ? Rat(0) : make_rat(Int(1), Int(period));
    }
    std::string name() const;
};

// Grammar: products/quotients of binomial(A,B), factorial(A), q^A (with q a
// nonzero rational constant and A integer-affine), integer exponents, and
// rational prefactor pieces.  Rejects zero exponents and non-integer affine
// arguments.
TermSpec parse_term(const std::string& text);

// Shift certificates R1 = S_n(H)/H and R2 = S_k(H)/H, computed factor by
// factor from rising-factorial quotients.
HTerm certificates(const TermSpec& spec);

// Abramov-Petkovsek style shift reduction H = r0 * h0 where no two affine
// factors of num/den of S_k(H0)/H0 differ by a nonzero integer k-shift.
struct APReduction {
    RFuncNK r0;
    HTerm h0;
};
APReduction ap_shift_reduce(const HTerm& h);

// Exact value at an integer point.  binomial(a,b) is 0 outside 0 <= b <= a;
// a negative factorial under a positive exponent is a pole, under a negative
// exponent it contributes 0.  A prefactor pole where the factor product
// vanishes evaluates to 0 and sets *regularized.
Rat eval_term(const TermSpec& spec, long n0, long k0,
              bool* regularized = nullptr);

// image(H)/H for the given substitution kind, or nullopt when the image is
// not a rational multiple of H.
std::optional<RFuncNK> automorphism_ratio(const TermSpec& spec,
                                          Automorphism::Kind kind,
                                          long period = 0);

// k-interval outside which the factor product vanishes at n = n0 (from
// binomials with positive exponent and inverse factorials); nullopt when
// unbounded on either side.  May be empty (lo > hi).
std::optional<std::pair<long, long>> natural_support(const TermSpec& spec,
                                                     long n0);

// Summation range for the k-sum.
struct KRange {
    enum class Kind { Natural, ZeroToN, Fixed };
    Kind kind = Kind::Natural;
    long lo = 0, hi = 0;            // Fixed only

    std::pair<long, long> bounds(const TermSpec& spec, long n0) const;
    std::string to_string() const;
};
KRange parse_k_range(const std::string& text);

// Structured input: [term] expr = ...; [sum] k_range = ...; [options] ...
struct TermInput {
    TermSpec spec;
    KRange k_range;
    std::map<std::string, std::string> options;
};
TermInput load_term_document(const std::string& text);

}  // namespace hyptel
