#pragma once

#include <stdexcept>
#include <string>

namespace hyptel {

// Error taxonomy shared by the library, the CLI and the bindings.  Each
// condition gets its own type so callers can catch selectively; `code()` is
// stable text used in machine-readable error reports.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct InvalidInput : Error {
    explicit InvalidInput(const std::string& w) : Error("invalid_input", w) {}
};

struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& w) : Error("division_by_zero", w) {}
};

// Evaluation hit a pole (or an undefined point such as a negative factorial).
struct PoleAtPoint : Error {
    explicit PoleAtPoint(const std::string& w) : Error("pole_at_point", w) {}
};

// A denominator has an irreducible k-dependent factor outside the supported
// class (integer-affine in k).  The message names the offending factor.
struct UnsupportedDenominator : Error {
    explicit UnsupportedDenominator(const std::string& w)
        : Error("unsupported_denominator", w) {}
};

// A sequence window is too short for the requested operation.
struct InsufficientWindow : Error {
    explicit InsufficientWindow(const std::string& w)
        : Error("insufficient_window", w) {}
};

// An iteratively grown ansatz hit its hard cap without closing the system.
struct AnsatzCapExceeded : Error {
    explicit AnsatzCapExceeded(const std::string& w)
        : Error("ansatz_cap_exceeded", w) {}
};

// The right-factor engine cannot certify a factor for this pole structure.
struct UnsupportedPoleOrder : Error {
    explicit UnsupportedPoleOrder(const std::string& w)
        : Error("unsupported_pole_order", w) {}
};

// Symmetry operators that do not commute (or projectors that fail to split
// the space) cannot drive the decomposition.
struct UnsupportedDecomposition : Error {
    explicit UnsupportedDecomposition(const std::string& w)
        : Error("unsupported_decomposition", w) {}
};

// A broken internal invariant.  Seeing this is a bug, not a usage error.
struct InternalError : Error {
    explicit InternalError(const std::string& w) : Error("internal", w) {}
};

}  // namespace hyptel
