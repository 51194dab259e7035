#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hyptel/ore.hpp"
#include "hyptel/term.hpp"

namespace hyptel {

// Outcome of a single independent check.  `range` describes what was
// examined, `witness` holds the first failure (empty on pass), `skipped`
// lists integer points excluded from an evaluation check together with the
// reason encoded in `range`.
struct CheckResult {
    std::string name;
    std::string range;
    bool pass = false;
    std::string witness;
    std::vector<long> skipped;

    nlohmann::json to_json() const;
};

// A bundle of checks with an overall verdict.
struct VerificationReport {
    std::vector<CheckResult> checks;

    bool passed() const;
    std::string to_string() const;
    nlohmann::json to_json() const;
};

// Exact values of a(n) = sum over k of the term, for n = n_from..n_to with
// k running over the given range at each n.  Throws PoleAtPoint naming the
// offending (n, k) when the summand is undefined at an in-range point; a
// removable prefactor pole under a vanishing factor product contributes 0
// and sets *regularized when the caller asks.
SeqWindow sum_sequence(const TermSpec& spec, const KRange& k_range,
                       long n_from, long n_to, bool* regularized = nullptr);

// Checks that op applied to the window vanishes at every usable point.
// Integer points where a coefficient denominator or the leading coefficient
// vanishes carry no usable constraint and are skipped and listed; throws
// InsufficientWindow when no point at all can be checked.
CheckResult check_annihilates(const OreOp& op, const SeqWindow& s);

// Checks the telescoping identity for an expanded operator L = sum c_i S_n^i
// with certificate c: applying L to the term must equal the k-difference of
// c times the term, as an exact rational-function identity
//   sum_i c_i(n) prod_{j<i} S_n^j(R1)  =  S_k(c) R2 - c.
CheckResult check_certificate(const OreOp& op, const RFuncNK& cert,
                              const HTerm& h);

// Scans integer points n in [n_from, n_to], k in the summation range widened
// by one at the top, for poles of the certificate; such points break the
// boundary argument that turns the telescoping identity into a recurrence
// for the sum.
CheckResult check_certificate_poles(const RFuncNK& cert, const TermSpec& spec,
                                    const KRange& k_range, long n_from,
                                    long n_to);

// Minimal-order, then minimal-degree operator with integer polynomial
// coefficients annihilating the whole window, found by modular linear
// algebra with rational reconstruction and verified exactly over Q before
// being returned.  The window must leave at least ten equations beyond the
// unknown count at the largest ansatz, i.e. hold at least
// (max_order + 1) * (max_degree + 2) + max_order + 10 values; otherwise
// InsufficientWindow.  Returns nullopt when no operator within the caps
// fits.
std::optional<OreOp> guess_recurrence(const SeqWindow& s, int max_order,
                                      int max_degree);

}  // namespace hyptel
