#include <doctest.h>

#include <optional>
#include <string>
#include <vector>

#include "hyptel/errors.hpp"
#include "hyptel/parser.hpp"
#include "hyptel/polyk.hpp"
#include "hyptel/polynk.hpp"
#include "hyptel/term.hpp"
#include "rand_util.hpp"

using namespace hyptel;

namespace {

// Oracle: a certificate is shift-reduced in k when no two of its affine
// factors lie a nonzero integer k-shift apart, checked through the published
// dispersion machinery rather than the reduction's own class arithmetic.
bool shift_reduced_in_k(const RFuncNK& rho) {
    std::vector<AffinePoly> parts;
    auto collect = [&parts](const PolyNK& p) {
        AffineFactorization fa = factor_affine_k(p);
        REQUIRE(fa.complete());
        for (const auto& [f, m] : fa.factors) {
            if (f.b != 0) parts.push_back(f);
        }
    };
    collect(rho.num());
    collect(rho.den());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        PolyK fi = PolyK::from_rfuncnk(RFuncNK(parts[i].to_poly()));
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
            PolyK fj = PolyK::from_rfuncnk(RFuncNK(parts[j].to_poly()));
            for (long d : dispersion_set(fi, fj)) {
                if (d != 0) return false;
            }
            for (long d : dispersion_set(fj, fi)) {
                if (d != 0) return false;
            }
        }
    }
    return true;
}

Factor binomial_factor(AffineNK a, AffineNK b, long e) {
    return {Factor::Kind::Binomial, a, b, Rat(1), e};
}

Factor factorial_factor(AffineNK a, long e) {
    return {Factor::Kind::Factorial, a, AffineNK{0, 0, 0}, Rat(1), e};
}

Factor power_factor(const Rat& q, AffineNK a) {
    return {Factor::Kind::Power, a, AffineNK{0, 0, 0}, q, 1};
}

long nonzero_exp(testutil::Rng& rng, long lo, long hi) {
    long e = 0;
    while (e == 0) e = rng.integer(lo, hi);
    return e;
}

// Specs that stay well defined and nonzero for 1 <= n and 0 <= k <= n, so
// that shifted evaluation points land on comparable values.
TermSpec random_eval_spec(testutil::Rng& rng) {
    TermSpec s;
    int nf = static_cast<int>(rng.integer(1, 3));
    for (int i = 0; i < nf; ++i) {
        long u = rng.integer(0, 2);
        long e = nonzero_exp(rng, -2, 3);
        switch (rng.integer(0, 5)) {
            case 0:
                s.factors.push_back(
                    binomial_factor({1, 0, u}, {0, 1, 0}, e));
                break;
            case 1:
                s.factors.push_back(
                    binomial_factor({2, 0, u}, {1, 1, 0}, e));
                break;
            case 2:
                s.factors.push_back(
                    binomial_factor({1, 1, u}, {0, 1, 0}, e));
                break;
            case 3:
                s.factors.push_back(factorial_factor(
                    {rng.integer(0, 1), rng.chance(0.5) ? 1 : 0, u},
                    nonzero_exp(rng, -2, 2)));
                break;
            case 4:
                s.factors.push_back(factorial_factor({1, -1, u},
                                                     nonzero_exp(rng, -2, 2)));
                break;
            default:
                s.factors.push_back(power_factor(
                    rng.rational_nonzero(3, 2),
                    {rng.integer(-2, 2), rng.integer(-2, 2),
                     rng.integer(-2, 2)}));
                break;
        }
    }
    if (rng.chance(0.6)) s.prefactor = rng.rfuncnk_nonzero(2, 3);
    return s;
}

// Specs whose k-shift certificate factors into k-affine pieces, as the
// reduction requires; the optional planted pair forces a nontrivial merge.
TermSpec random_ap_spec(testutil::Rng& rng) {
    TermSpec s;
    int nf = static_cast<int>(rng.integer(1, 2));
    for (int i = 0; i < nf; ++i) {
        AffineNK a1{rng.integer(0, 2), rng.integer(-2, 2), rng.integer(-2, 2)};
        if (rng.chance(0.5)) {
            AffineNK a2{rng.integer(0, 1), rng.integer(-2, 2),
                        rng.integer(-2, 2)};
            s.factors.push_back(binomial_factor(a1, a2,
                                                nonzero_exp(rng, -3, 3)));
        } else {
            s.factors.push_back(factorial_factor(a1,
                                                 nonzero_exp(rng, -2, 2)));
        }
    }
    RFuncNK pre(1L);
    int np = static_cast<int>(rng.integer(0, 2));
    for (int i = 0; i < np; ++i) {
        AffinePoly f = rng.affine_k(2, 2, 4);
        pre = pre * RFuncNK(f.to_poly()).pow(rng.chance(0.5) ? 1 : -1);
    }
    if (rng.chance(0.5)) {
        // A factor and a k-shift of it on opposite sides of the fraction.
        AffinePoly f = rng.affine_k(2, 2, 3);
        long jump = rng.integer(1, 3);
        PolyNK moved = PolyNK::affine(f.a, f.b, f.c + jump * f.b);
        pre = pre * RFuncNK(f.to_poly()) / RFuncNK(moved);
    }
    s.prefactor = pre;
    return s;
}

// Factors of the shape binomial(a*n+u, a*k+v) are carried to themselves by
// k -> n-k up to a rational multiple, so the phi ratio always exists.
TermSpec random_phi_spec(testutil::Rng& rng) {
    TermSpec s;
    int nf = static_cast<int>(rng.integer(1, 3));
    for (int i = 0; i < nf; ++i) {
        if (rng.chance(0.25)) {
            s.factors.push_back(power_factor(
                rng.rational_nonzero(3, 2),
                {rng.integer(-2, 2), 0, rng.integer(-2, 2)}));
            continue;
        }
        long a = rng.integer(1, 2);
        s.factors.push_back(binomial_factor(
            {a, 0, rng.integer(-2, 2)}, {0, a, rng.integer(-2, 2)},
            nonzero_exp(rng, -2, 3)));
    }
    if (rng.chance(0.5)) s.prefactor = rng.rfuncnk_nonzero(2, 3);
    return s;
}

// Every k-coefficient divisible by p, the precondition for tau(p).
TermSpec random_tau_spec(testutil::Rng& rng, long p) {
    TermSpec s;
    int nf = static_cast<int>(rng.integer(1, 2));
    for (int i = 0; i < nf; ++i) {
        AffineNK a1{rng.integer(0, 2), p * rng.integer(0, 1),
                    rng.integer(-2, 2)};
        switch (rng.integer(0, 2)) {
            case 0:
                s.factors.push_back(binomial_factor(
                    {rng.integer(1, 2), p * rng.integer(0, 1),
                     rng.integer(0, 2)},
                    {0, p, rng.integer(-2, 2)},
                    nonzero_exp(rng, -2, 2)));
                break;
            case 1:
                s.factors.push_back(factorial_factor(a1,
                                                     nonzero_exp(rng, -2, 2)));
                break;
            default:
                s.factors.push_back(power_factor(rng.rational_nonzero(3, 2),
                                                 a1));
                break;
        }
    }
    if (rng.chance(0.5)) s.prefactor = rng.rfuncnk_nonzero(2, 3);
    return s;
}

RFuncNK phi_image(const RFuncNK& f) {
    return f.subst_k_affine(Rat(1), Rat(-1), Rat(0));
}

}  // namespace

TEST_CASE("term expressions parse to canonical factor lists") {
    TermSpec s = parse_term("binomial(n,k)^7 / (2*n+3*k)");
    REQUIRE(s.factors.size() == 1);
    CHECK(s.factors[0].kind == Factor::Kind::Binomial);
    CHECK(s.factors[0].arg1 == AffineNK{1, 0, 0});
    CHECK(s.factors[0].arg2 == AffineNK{0, 1, 0});
    CHECK(s.factors[0].exp == 7);
    CHECK(s.prefactor == parse_rational("1/(2*n+3*k)"));

    TermSpec s6 = parse_term("binomial(3*n,3*k)^2 * binomial(3*n,3*k+1)");
    REQUIRE(s6.factors.size() == 2);
    CHECK(s6.factors[0].kind == Factor::Kind::Binomial);
    CHECK(s6.factors[1].kind == Factor::Kind::Binomial);
    CHECK(s6.prefactor.is_one());

    // Repeated factors merge; quotients subtract exponents.
    TermSpec m = parse_term("binomial(n,k) * binomial(n,k)^2");
    REQUIRE(m.factors.size() == 1);
    CHECK(m.factors[0].exp == 3);
    TermSpec q = parse_term("2^(n+k) * factorial(k) / 2^(n)");
    REQUIRE(q.factors.size() == 2);
    CHECK(q.factors[0].kind == Factor::Kind::Factorial);
    CHECK(q.factors[1].kind == Factor::Kind::Power);
    CHECK(q.factors[1].arg1 == AffineNK{0, 1, 0});

    CHECK_THROWS_AS(parse_term("binomial(n,k)^0"), InvalidInput);
    CHECK_THROWS_AS(parse_term("binomial(n,k"), InvalidInput);
    CHECK_THROWS_AS(parse_term("binomial(n/2,k)"), InvalidInput);
    CHECK_THROWS_AS(parse_term("binomial(n*k,k)"), InvalidInput);
    CHECK_THROWS_AS(parse_term("gamma(n,k)"), InvalidInput);
    CHECK_THROWS_AS(parse_term("0 * binomial(n,k)"), InvalidInput);

    // Printing round trips through the parser.
    for (const char* expr :
         {"binomial(n,k)^7 / (2*n+3*k)",
          "binomial(3*n,3*k)^2 * binomial(3*n,3*k+1)",
          "(-1)^k * factorial(n) / (factorial(k) * factorial(n-k))",
          "(1/2)^(2*n-3*k) * binomial(2*n,n+k) * (n^2+1)/(k+2)"}) {
        TermSpec t = parse_term(expr);
        CHECK(parse_term(t.to_string()) == t);
    }
}

TEST_CASE("certificates come from rising factorial quotients") {
    HTerm plain = certificates(parse_term("binomial(n,k)^7"));
    CHECK(plain.r1 == parse_rational("((n+1)/(n-k+1))^7"));
    CHECK(plain.r2 == parse_rational("((n-k)/(k+1))^7"));

    HTerm one = certificates(parse_term("binomial(n,k)"));
    RFuncNK both = parse_rational("(n+1)/(k+1)");
    CHECK(one.r1.shifted(0, Rat(1)) * one.r2 == both);
    CHECK(one.r2.shifted(1, Rat(0)) * one.r1 == both);

    HTerm eq5 = certificates(parse_term("binomial(n,k)^7 / (2*n+3*k)"));
    CHECK(eq5.r1 ==
          parse_rational("((n+1)/(n-k+1))^7 * (2*n+3*k)/(2*n+3*k+2)"));
    CHECK(eq5.r2 ==
          parse_rational("((n-k)/(k+1))^7 * (2*n+3*k)/(2*n+3*k+3)"));
}

TEST_CASE("shift reduction extracts shift-equivalent factor pairs") {
    HTerm eq5 = certificates(parse_term("binomial(n,k)^7 / (2*n+3*k)"));
    APReduction ap = ap_shift_reduce(eq5);
    CHECK(ap.r0 == parse_rational("1/(2*n+3*k)"));
    CHECK(ap.h0.spec == parse_term("binomial(n,k)^7"));
    CHECK(ap.h0.r2 == parse_rational("((n-k)/(k+1))^7"));
    CHECK(shift_reduced_in_k(ap.h0.r2));

    // Already reduced input comes back untouched.
    HTerm plain = certificates(parse_term("binomial(n,k)"));
    APReduction id = ap_shift_reduce(plain);
    CHECK(id.r0.is_one());
    CHECK(id.h0.spec == plain.spec);
    CHECK(id.h0.r2 == plain.r2);

    // A prefactor pair (k+1)/(k+4) is absorbed entirely into R0.
    HTerm pre = certificates(parse_term("binomial(n,k) * (k+1)/(k+4)"));
    CHECK_FALSE(shift_reduced_in_k(pre.r2));
    APReduction red = ap_shift_reduce(pre);
    CHECK(red.r0 == parse_rational("(k+1)/(k+4)"));
    CHECK(red.h0.spec.prefactor.is_one());
    CHECK(shift_reduced_in_k(red.h0.r2));
}

TEST_CASE("evaluation follows the binomial support conventions") {
    TermSpec eq5 = parse_term("binomial(n,k)^7 / (2*n+3*k)");
    CHECK(eval_term(eq5, 1, 1) == make_rat(Int(1), Int(5)));
    TermSpec b = parse_term("binomial(n,k)");
    CHECK(eval_term(b, 5, 2) == Rat(10));
    CHECK(eval_term(b, 5, 7) == Rat(0));
    CHECK(eval_term(b, 5, -1) == Rat(0));

    // A vanishing binomial under a negative exponent is a genuine pole, as
    // is a negative factorial under a positive one.
    CHECK_THROWS_AS(eval_term(parse_term("binomial(n,k)^(-1)"), 5, 7),
                    PoleAtPoint);
    CHECK_THROWS_AS(eval_term(parse_term("factorial(n-2*k)"), 1, 1),
                    PoleAtPoint);
    CHECK(eval_term(parse_term("factorial(n-2*k)^(-1)"), 1, 1) == Rat(0));

    // Prefactor poles are fatal unless the factor part vanishes there.
    CHECK_THROWS_AS(eval_term(parse_term("binomial(n,k)/(n-k)"), 5, 5),
                    PoleAtPoint);
    bool reg = false;
    CHECK(eval_term(parse_term("binomial(n,k)/(n-k+2)"), 5, 7, &reg) ==
          Rat(0));
    CHECK(reg);
    reg = false;
    CHECK(eval_term(eq5, 2, 1, &reg) == make_rat(Int(128), Int(7)));
    CHECK_FALSE(reg);
}

TEST_CASE("automorphism ratios detect term symmetries") {
    auto sym = automorphism_ratio(parse_term("binomial(n,k)^7"),
                                  Automorphism::Kind::Phi);
    REQUIRE(sym.has_value());
    CHECK(sym->is_one());

    CHECK_FALSE(automorphism_ratio(parse_term("binomial(n,k)"),
                                   Automorphism::Kind::Tau, 3)
                    .has_value());
    CHECK_THROWS_AS(automorphism_ratio(parse_term("binomial(n,k)"),
                                       Automorphism::Kind::Tau, 1),
                    InvalidInput);

    TermSpec s6 = parse_term("binomial(3*n,3*k)^2 * binomial(3*n,3*k+1)");
    auto tau = automorphism_ratio(s6, Automorphism::Kind::Tau, 3);
    REQUIRE(tau.has_value());
    CHECK(*tau ==
          parse_rational("(3*n-3*k)^2*(3*n-3*k-1)/((3*k+1)^2*(3*k+2))"));

    Automorphism phi{Automorphism::Kind::Phi, 2, *sym};
    CHECK(phi.name() == "phi");
    CHECK(phi.alpha() == 1);
    CHECK(phi.beta() == -1);
    Automorphism t3{Automorphism::Kind::Tau, 3, *tau};
    CHECK(t3.name() == "tau(3)");
    CHECK(t3.gamma() == make_rat(Int(1), Int(3)));
}

TEST_CASE("natural support and summation ranges") {
    TermSpec b = parse_term("binomial(n,k)");
    auto s = natural_support(b, 5);
    REQUIRE(s.has_value());
    CHECK(*s == std::make_pair(0L, 5L));
    CHECK(natural_support(b, -1)->first > natural_support(b, -1)->second);

    auto half = natural_support(parse_term("binomial(n,2*k)"), 5);
    REQUIRE(half.has_value());
    CHECK(*half == std::make_pair(0L, 2L));

    auto fact = natural_support(
        parse_term("factorial(n)/(factorial(k)*factorial(n-k))"), 7);
    REQUIRE(fact.has_value());
    CHECK(*fact == std::make_pair(0L, 7L));

    CHECK_FALSE(natural_support(parse_term("2^(n-k)"), 5).has_value());
    auto empty = natural_support(parse_term("binomial(n,n+1)"), 5);
    REQUIRE(empty.has_value());
    CHECK(empty->first > empty->second);

    CHECK(parse_k_range("all").kind == KRange::Kind::Natural);
    CHECK(parse_k_range(" 0..n ").kind == KRange::Kind::ZeroToN);
    KRange f = parse_k_range("-3..17");
    CHECK(f.kind == KRange::Kind::Fixed);
    CHECK(f.lo == -3);
    CHECK(f.hi == 17);
    CHECK_THROWS_AS(parse_k_range("k"), InvalidInput);
    CHECK_THROWS_AS(parse_k_range("1..n"), InvalidInput);

    CHECK(parse_k_range("0..n").bounds(b, 9) == std::make_pair(0L, 9L));
    CHECK(parse_k_range("2..4").bounds(b, 9) == std::make_pair(2L, 4L));
    CHECK(parse_k_range("all").bounds(b, 9) == std::make_pair(0L, 9L));
    CHECK_THROWS_AS(parse_k_range("all").bounds(parse_term("2^(n-k)"), 9),
                    InvalidInput);
    for (const char* r : {"all", "0..n", "-3..17"}) {
        KRange k = parse_k_range(r);
        CHECK(parse_k_range(k.to_string()).kind == k.kind);
    }
}

TEST_CASE("term documents load spec and range") {
    TermInput in = load_term_document(
        "[term]\n"
        "expr = \"binomial(n,k)^7 / (2*n+3*k)\"\n"
        "[sum]\n"
        "k_range = 0..n\n"
        "[options]\n"
        "format = json\n");
    CHECK(in.spec == parse_term("binomial(n,k)^7 / (2*n+3*k)"));
    CHECK(in.k_range.kind == KRange::Kind::ZeroToN);
    CHECK(in.options.at("format") == "json");

    TermInput bare = load_term_document("[term]\nexpr = binomial(n,k)\n");
    CHECK(bare.k_range.kind == KRange::Kind::Natural);
    CHECK(bare.options.empty());

    CHECK_THROWS_AS(load_term_document("[sum]\nk_range = all\n"),
                    InvalidInput);
}

TEST_CASE("certificates agree with pointwise evaluation ratios") {
    testutil::Rng rng(0x7E4D0001);
    int done = 0;
    for (int it = 0; it < 4000 && done < 200; ++it) {
        TermSpec s = random_eval_spec(rng);
        HTerm h = certificates(s);
        long n0 = rng.integer(1, 9);
        long k0 = rng.integer(0, n0);
        Rat base, up_n, up_k;
        try {
            base = eval_term(s, n0, k0);
            up_n = eval_term(s, n0 + 1, k0);
            up_k = eval_term(s, n0, k0 + 1);
        } catch (const Error&) {
            continue;
        }
        if (base == 0) continue;
        Rat nv(n0), kv(k0);
        if (h.r1.has_pole_at(nv, kv) || h.r2.has_pole_at(nv, kv)) continue;
        CHECK(up_n / base == h.r1.eval(nv, kv));
        CHECK(up_k / base == h.r2.eval(nv, kv));
        ++done;
    }
    CHECK(done == 200);
}

TEST_CASE("shift certificates satisfy the mixed compatibility identity") {
    testutil::Rng rng(0x7E4D0002);
    for (int it = 0; it < 200; ++it) {
        TermSpec s = random_ap_spec(rng);
        if (rng.chance(0.3)) s.prefactor = rng.rfuncnk_nonzero(2, 3);
        HTerm h = certificates(s);
        CHECK_FALSE(h.r1.is_zero());
        CHECK_FALSE(h.r2.is_zero());
        CHECK(h.r1.shifted(0, Rat(1)) * h.r2 ==
              h.r2.shifted(1, Rat(0)) * h.r1);
    }
}

TEST_CASE("shift reduction is sound and reaches a reduced certificate") {
    testutil::Rng rng(0x7E4D0003);
    for (int it = 0; it < 200; ++it) {
        TermSpec s = random_ap_spec(rng);
        HTerm h = certificates(s);
        APReduction ap = ap_shift_reduce(h);
        // H = R0 * H0 must reproduce the original certificates.
        CHECK(h.r1 ==
              ap.h0.r1 * ap.r0.shifted(1, Rat(0)) / ap.r0);
        CHECK(h.r2 ==
              ap.h0.r2 * ap.r0.shifted(0, Rat(1)) / ap.r0);
        CHECK(shift_reduced_in_k(ap.h0.r2));
    }
}

TEST_CASE("phi ratios multiply to one over the involution") {
    testutil::Rng rng(0x7E4D0004);
    for (int it = 0; it < 200; ++it) {
        TermSpec s = random_phi_spec(rng);
        auto ratio = automorphism_ratio(s, Automorphism::Kind::Phi);
        REQUIRE(ratio.has_value());
        CHECK_FALSE(ratio->is_zero());
        CHECK((*ratio * phi_image(*ratio)).is_one());
    }
}

TEST_CASE("tau ratios compose to the k-shift certificate") {
    testutil::Rng rng(0x7E4D0005);
    for (int it = 0; it < 200; ++it) {
        long p = std::vector<long>{2, 3, 5}[rng.integer(0, 2)];
        TermSpec s = random_tau_spec(rng, p);
        auto ratio = automorphism_ratio(s, Automorphism::Kind::Tau, p);
        REQUIRE(ratio.has_value());
        RFuncNK walk(1L);
        for (long j = 0; j < p; ++j) {
            walk = walk * ratio->shifted(0, make_rat(Int(j), Int(p)));
        }
        CHECK(walk == certificates(s).r2);
    }
}
