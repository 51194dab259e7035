#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hyptel/linalg.hpp"
#include "hyptel/ore.hpp"
#include "hyptel/polyk.hpp"
#include "hyptel/reduction.hpp"
#include "hyptel/term.hpp"

namespace hyptel {

// One denominator class of the prefactor ratio: the class returns to itself
// under S_n^t combined with S_k^s (t minimal positive with t*a + s*b = 0),
// and the matched ratio is the closed form of the obstruction transported
// around that loop, evaluated on the root line of the factor.
struct ShiftClassData {
    AffinePoly factor{0, 0, 0};
    long t = 0;
    long s = 0;
    std::optional<RFuncN> ratio;    // empty when the closed form has a pole
};

struct RightFactorResult {
    OreOp op;                       // R, normalized
    PolyK residual;                 // R(H) = residual * h0 + Delta_k(...)
    std::vector<ShiftClassData> classes;
    std::optional<RFuncNK> cert;    // G with R(H) = residual * h0 + Delta_k(G * h0)
};

// Minimal-order monic operator R in Q(n)[S_n] mapping H into the span of the
// basis monomial sections modulo differences, returned normalized together
// with the residual section it lands on.  h must share the factor list of
// ctx's kernel; the ratio h/h0 supplies the starting fraction.
RightFactorResult right_factor(const HTerm& h, ReductionContext& ctx,
                               bool track_cert = false);

// Substitutions fixing the kernel up to a rational-function factor:
// phi (k -> n-k) when its ratio is rational, tau(p) (k -> k + 1/p) for each
// p >= 2 dividing every k-coefficient of binomial and factorial arguments.
std::vector<Automorphism> detect_automorphisms(const HTerm& h0);

// Matrix of the substitution on the coordinate space; column j holds the
// coordinates of the image of the j-th basis monomial section.
MatQ automorphism_matrix(const Automorphism& a, ReductionContext& ctx);

struct Component {
    std::vector<VecQ> basis;        // spanning coordinate vectors
    VecQ target;                    // projected right-factor residual
    OreOp op;                       // annihilator of target (telescope fills it)
    bool zero_sum = false;          // odd part of the k -> n-k symmetry

    int dim() const { return static_cast<int>(basis.size()); }
};

struct Decomposition {
    std::vector<Component> components;          // nonzero projected target
    std::vector<std::pair<int, bool>> dropped;  // (dim, zero_sum) of the rest
};

// Common refinement of the rational eigenspace splittings of the given
// automorphisms, with target projected into each block.  Blocks whose
// projected target vanishes are recorded in `dropped` instead.  Throws
// UnsupportedDecomposition when the projector families do not commute.
Decomposition decompose(ReductionContext& ctx,
                        const std::vector<Automorphism>& auts,
                        const VecQ& target);

// Minimal monic annihilator of a nonzero target under v -> A * sigma_n(v),
// returned normalized.
OreOp krylov_annihilator(const VecQ& target, const SnMatrix& sn);

struct TelescopeOptions {
    bool symmetry = true;           // use automorphism splitting
    bool certificate = false;       // assemble the telescoping certificate
    bool expanded = false;          // multiply out L_left * R
    int degree_cap = 0;             // 0 = automatic
};

struct StageTimings {
    double reduce = 0;              // shift reduction + basis construction
    double right = 0;               // right factor
    double split = 0;               // automorphism detection + decomposition
    double components = 0;          // per-component annihilators
    double combine = 0;             // lclm, products, certificate
};

struct TelescoperResult {
    HTerm h;                        // input term with certificates
    RFuncNK r0;                     // h = r0 * h0
    HTerm h0;                       // shift-reduced kernel
    int dim = 0;                    // coordinate space dimension
    RightFactorResult right;
    std::vector<Automorphism> automorphisms;
    Decomposition parts;            // component.op filled in
    OreOp l_left;                   // lclm of the component operators
    OreOp l_min;                    // lclm of non-zero-sum components, times R
    std::optional<OreOp> l_expanded;        // L_left * R on request
    std::optional<RFuncNK> certificate;     // C with L_expanded(H) = Delta_k(C*H)
    std::size_t factored_bytes = 0; // canonical text of R + component operators
    std::size_t expanded_bytes = 0; // canonical text of L_left * R
    StageTimings timings;
};

// Full pipeline: shift-reduce, right factor, symmetry split, one annihilator
// per component, then the combined operators.  The certificate, when
// requested, is assembled for l_expanded (computed in that case even without
// the expanded flag).
TelescoperResult telescope(const TermSpec& spec, const TelescopeOptions& opt = {});

}  // namespace hyptel
