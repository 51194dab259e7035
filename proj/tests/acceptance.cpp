// Acceptance gate: one pass/fail line per criterion with the measured
// values.  Exits nonzero when any criterion fails.  argv[1] is the unit
// test binary, spawned for the property-suite criterion.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hyptel/errors.hpp"
#include "hyptel/factor.hpp"
#include "hyptel/ore.hpp"
#include "hyptel/term.hpp"
#include "hyptel/verify.hpp"

using namespace hyptel;

namespace {

int failures = 0;

void line(int idx, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::cout << "criterion " << idx << ": " << (pass ? "PASS" : "FAIL")
              << " - " << detail << "\n";
    std::cout.flush();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
        .count();
}

PolyZ linz(long c0, long c1) {
    return PolyZ(std::vector<Int>{Int(c0), Int(c1)});
}

// Loop ratio of the seventh-power example, written out from its closed form.
RFuncN seventh_ratio() {
    PolyZ num = PolyZ(54L) * linz(0, 1) * linz(1, 1) * linz(2, 1) * linz(3, 2);
    PolyZ den =
        PolyZ(5L) * linz(12, 5) * linz(9, 5) * linz(6, 5) * linz(3, 5);
    return RFuncN(num, den).pow(7);
}

int coeff_degree(const OreOp& op) {
    int d = 0;
    for (const auto& [e, c] : op.coeffs()) {
        d = std::max(d, std::max(c.num().degree(), c.den().degree()));
    }
    return d;
}

std::string skipped_text(const CheckResult& c) {
    if (c.skipped.empty()) return "none";
    std::string out;
    for (std::size_t i = 0; i < c.skipped.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(c.skipped[i]);
    }
    return out;
}

struct GuessOutcome {
    bool pass = false;
    std::string detail;
};

// Guesses the minimal recurrence of the sums from scratch and cross-checks
// it against the telescoper's minimal operator in both directions.
GuessOutcome guess_against(const TermSpec& spec, const OreOp& l_min,
                           const SeqWindow& reference) {
    GuessOutcome out;
    int ord = l_min.order();
    int deg = coeff_degree(l_min);
    long need = static_cast<long>(ord + 1) * (deg + 2) + ord + 10;
    SeqWindow sums = sum_sequence(spec, KRange{KRange::Kind::ZeroToN, 0, 0},
                                  1, need);
    auto guessed = guess_recurrence(sums, ord, deg);
    if (!guessed) {
        out.detail = "no operator within order " + std::to_string(ord) +
                     ", degree " + std::to_string(deg);
        return out;
    }
    bool order_match = guessed->order() == ord;
    bool same = *guessed == l_min.normalized();
    bool guessed_on_reference = check_annihilates(*guessed, reference).pass;
    bool minimal_on_window = check_annihilates(l_min, sums).pass;
    out.pass = order_match && guessed_on_reference && minimal_on_window;
    out.detail = "order " + std::to_string(guessed->order()) + " vs " +
                 std::to_string(ord) +
                 (same ? " (operators identical)" : " (operators differ)") +
                 ", cross-annihilation " +
                 (guessed_on_reference && minimal_on_window ? "both ways"
                                                            : "FAILED");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string unit_tests = argc > 1 ? argv[1] : "";
    const KRange zero_to_n{KRange::Kind::ZeroToN, 0, 0};

    // Criterion 1: the seventh-power example in factored form.
    TermSpec eq5_spec = parse_term("binomial(n,k)^7/(2*n+3*k)");
    auto t0 = std::chrono::steady_clock::now();
    TelescopeOptions opt1;
    opt1.expanded = true;
    TelescoperResult eq5 = telescope(eq5_spec, opt1);
    double eq5_secs = seconds_since(t0);
    {
        OreOp expected_r =
            OreOp::from_coeffs({{3, RFuncN(1L)}, {0, -seventh_ratio()}})
                .normalized();
        std::vector<int> comp_orders;
        for (const auto& c : eq5.parts.components) {
            comp_orders.push_back(c.op.order());
        }
        std::sort(comp_orders.begin(), comp_orders.end());
        bool ok = eq5.right.op == expected_r && eq5.dim == 7 &&
                  comp_orders == std::vector<int>{3, 4} &&
                  eq5.l_left.order() == 7 && eq5.l_expanded &&
                  eq5.l_expanded->order() == 10 && eq5.l_min.order() == 7 &&
                  eq5_secs <= 120.0;
        std::ostringstream d;
        d << "R order " << eq5.right.op.order()
          << (eq5.right.op == expected_r ? " matches the closed form"
                                         : " DIFFERS from the closed form")
          << ", dim " << eq5.dim << ", component orders";
        for (int o : comp_orders) d << " " << o;
        d << ", expanded order "
          << (eq5.l_expanded ? eq5.l_expanded->order() : -1)
          << ", minimal order " << eq5.l_min.order() << ", " << eq5_secs
          << " s (limit 120)";
        line(1, ok, d.str());
    }

    // Criterion 2: both operators annihilate the sums for n = 1..60.
    SeqWindow eq5_sums = sum_sequence(eq5_spec, zero_to_n, 1, 60);
    {
        CheckResult minimal = check_annihilates(eq5.l_min, eq5_sums);
        CheckResult expanded = check_annihilates(*eq5.l_expanded, eq5_sums);
        bool ok = minimal.pass && expanded.pass;
        line(2, ok,
             "minimal " + std::string(minimal.pass ? "holds" : "fails") +
                 " on " + minimal.range + " (skipped: " +
                 skipped_text(minimal) + "), expanded " +
                 (expanded.pass ? "holds" : "fails") + " on " +
                 expanded.range + " (skipped: " + skipped_text(expanded) +
                 ")");
    }

    // Criterion 3: the factored form is at most a quarter of the expanded
    // operator's text size.
    {
        double ratio = static_cast<double>(eq5.factored_bytes) /
                       static_cast<double>(eq5.expanded_bytes);
        bool ok = eq5.expanded_bytes > 0 && ratio <= 0.25;
        std::ostringstream d;
        d << "factored " << eq5.factored_bytes << " B, expanded "
          << eq5.expanded_bytes << " B, ratio " << ratio << " (limit 0.25)";
        line(3, ok, d.str());
    }

    // Criterion 4: the triple product splits into four components.
    TermSpec triple_spec =
        parse_term("binomial(3*n,3*k)^2*binomial(3*n,3*k+1)");
    TelescopeOptions opt4;
    opt4.expanded = true;
    TelescoperResult triple = telescope(triple_spec, opt4);
    SeqWindow triple_sums = sum_sequence(triple_spec, zero_to_n, 1, 40);
    {
        std::vector<int> comp_orders;
        for (const auto& c : triple.parts.components) {
            comp_orders.push_back(c.op.order());
        }
        std::sort(comp_orders.begin(), comp_orders.end());
        CheckResult minimal = check_annihilates(triple.l_min, triple_sums);
        bool ok = comp_orders == std::vector<int>{1, 2, 3, 3} &&
                  triple.l_expanded->order() == 9 &&
                  triple.l_min.order() == 5 && minimal.pass;
        std::ostringstream d;
        d << "component orders";
        for (int o : comp_orders) d << " " << o;
        d << ", telescoper order " << triple.l_expanded->order()
          << ", minimal order " << triple.l_min.order() << ", sums n=1..40 "
          << (minimal.pass ? "annihilated" : "NOT annihilated")
          << " (skipped: " << skipped_text(minimal) << ")";
        line(4, ok, d.str());
    }

    // Criterion 5: the power family follows the halving rule.
    std::vector<TelescoperResult> family;
    std::vector<SeqWindow> family_sums;
    {
        auto f0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::ostringstream d;
        for (int s = 1; s <= 6; ++s) {
            std::string text = "binomial(n,k)";
            if (s > 1) text += "^" + std::to_string(s);
            TermSpec spec = parse_term(text);
            TelescopeOptions opt;
            opt.expanded = true;
            TelescoperResult res = telescope(spec, opt);
            SeqWindow sums = sum_sequence(spec, zero_to_n, 1, 40);
            int want = (s + 1) / 2;
            int even_dim = 0;
            for (const auto& c : res.parts.components) even_dim += c.dim();
            int odd_dim = 0;
            for (const auto& [dim, zs] : res.parts.dropped) {
                if (zs) odd_dim += dim;
            }
            CheckResult ann = check_annihilates(res.l_min, sums);
            bool here = res.l_min.order() == want && even_dim == want &&
                        odd_dim == want - 1 && ann.pass;
            ok = ok && here;
            d << "s=" << s << ": order " << res.l_min.order() << " (want "
              << want << "), dims " << even_dim << "+" << odd_dim
              << (ann.pass ? "" : ", sums NOT annihilated") << "; ";
            family.push_back(std::move(res));
            family_sums.push_back(std::move(sums));
        }
        double secs = seconds_since(f0);
        ok = ok && secs <= 600.0;
        d << secs << " s (limit 600)";
        line(5, ok, d.str());
    }

    // Criterion 6: every randomized property suite passes with its recorded
    // seed.
    {
        const char* suites =
            "canonical form is idempotent,"
            "field laws hold in canonical form,"
            "shifts compose additively,"
            "factorization multiplies back to the input,"
            "dispersion set matches exhaustive search,"
            "operator product uses the shift commutation rule,"
            "least common left multiple of first-order operators,"
            "operator json round trips,"
            "product is associative and distributes over addition,"
            "right division is exact for random operators,"
            "lclm order is minimal against an ansatz solver,"
            "apply respects operator composition,"
            "normalization is idempotent and tracks a unit factor,"
            "certificates agree with pointwise evaluation ratios,"
            "shift certificates satisfy the mixed compatibility identity,"
            "shift reduction is sound and reaches a reduced certificate,"
            "phi ratios multiply to one over the involution,"
            "tau ratios compose to the k-shift certificate,"
            "standard forms carry exact difference certificates,"
            "reduction is linear over rational functions of n,"
            "standard forms are fixed points of the reduction,"
            "relations are certified and the basis monomials stay "
            "independent,"
            "shift matrix columns track the twisted action on coordinates,"
            "right factors are sound\\, minimal\\, and certified,"
            "symmetry split is a direct sum compatible with the shift,"
            "Krylov annihilators are exact and minimal,"
            "pipeline runs keep the factored product exact,"
            "recurrence guessing recovers planted operators,"
            "certificates imply recurrences for the sums";
        bool ok = false;
        std::string detail = "unit test binary not supplied";
        if (!unit_tests.empty()) {
            std::string cmd = unit_tests + " -tc=\"" + suites + "\"";
            int st = std::system(cmd.c_str());
            ok = st != -1 && WIFEXITED(st) && WEXITSTATUS(st) == 0;
            detail = std::string(ok ? "29 property suites passed"
                                    : "property suites FAILED") +
                     ", 200 cases each, seeds 0xA1CE0001..5, "
                     "0x04E00000..2, 0x04E00010..14, 0x7E4D0001..10";
        }
        line(6, ok, detail);
    }

    // Criterion 7: independent guessing reproduces the minimal orders.
    {
        GuessOutcome eq5_guess =
            guess_against(eq5_spec, eq5.l_min, eq5_sums);
        GuessOutcome triple_guess =
            guess_against(triple_spec, triple.l_min, triple_sums);
        bool ok = eq5_guess.pass && triple_guess.pass;
        std::ostringstream d;
        d << "seventh power: " << eq5_guess.detail
          << "; triple: " << triple_guess.detail;
        for (int s = 1; s <= 6; ++s) {
            std::string text = "binomial(n,k)";
            if (s > 1) text += "^" + std::to_string(s);
            GuessOutcome g =
                guess_against(parse_term(text),
                              family[static_cast<std::size_t>(s - 1)].l_min,
                              family_sums[static_cast<std::size_t>(s - 1)]);
            ok = ok && g.pass;
            d << "; s=" << s << ": " << g.detail;
        }
        line(7, ok, d.str());
    }

    std::cout << (failures == 0 ? "acceptance: all criteria pass"
                                : "acceptance: " +
                                      std::to_string(failures) +
                                      " criterion(s) failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}
