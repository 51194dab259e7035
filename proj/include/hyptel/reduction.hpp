#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "hyptel/linalg.hpp"
#include "hyptel/polyk.hpp"
#include "hyptel/term.hpp"

namespace hyptel {

// Result of reducing f*H modulo differences: f = frac + poly + (S_k(g)*r2 - g)
// where r2 = S_k(H)/H.  frac is a proper fraction whose denominator factors
// are the irreducible pole positions of the term (one representative per
// shift class), poly is supported on the basis monomial degrees, and cert
// holds g when certificate tracking was requested.
struct StdForm {
    RFuncNK frac;
    PolyK poly;
    std::optional<RFuncNK> cert;
};

// Finite basis of the span of the monomial images k^d * H modulo differences.
// degrees lists the k-degrees whose monomials stay independent (ascending);
// relations maps every reducible degree d up to the cap to the coordinates of
// k^d * H in that basis.
struct SubmoduleBasis {
    int dim = 0;
    std::vector<int> degrees;
    std::map<int, VecQ> relations;
};

// Matrix of the forward n-shift on the basis: column j holds the coordinates
// of S_n(m_j) where m_j = k^degrees[j] * H.
struct SnMatrix {
    MatQ a;
    bool invertible = false;
};

// Reduction calculator for a fixed shift-reduced hypergeometric term H.
// Owns an incrementally grown elimination basis for the difference space
// {S_k(g*H) - g*H}; all queries share that cache, so a context must not be
// used from several threads at once.
class ReductionContext {
public:
    // degree_cap bounds the polynomial degrees the ansatz may touch;
    // 0 picks a default based on the binomial exponents of the term.
    explicit ReductionContext(HTerm h, int degree_cap = 0);
    ~ReductionContext();
    ReductionContext(ReductionContext&&) noexcept;
    ReductionContext& operator=(ReductionContext&&) noexcept;
    ReductionContext(const ReductionContext&) = delete;
    ReductionContext& operator=(const ReductionContext&) = delete;

    const HTerm& h0() const;
    int degree_cap() const;
    const RFuncNK& r1() const;        // S_n(H)/H
    const RFuncNK& r2() const;        // S_k(H)/H
    const RFuncNK& r1_back() const;   // S_n^{-1}(H)/H
    const RFuncNK& r2_back() const;   // S_k^{-1}(H)/H

    // Reduce f*H to standard form.  Throws UnsupportedDenominator when the
    // denominator of f has a k-dependent factor that is not integer-affine,
    // and AnsatzCapExceeded when the reduction needs degrees past the cap.
    StdForm std_form(const RFuncNK& f, bool track_cert = false);

    const SubmoduleBasis& basis();

    // Coordinates of p*H in the monomial basis; p must already be free of
    // fractional parts (any polynomial in k qualifies).
    VecQ coords(const PolyK& p);

    const SnMatrix& sn_matrix();

private:
    struct Engine;
    std::unique_ptr<Engine> eng_;
};

}  // namespace hyptel
