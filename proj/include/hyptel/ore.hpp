#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "hyptel/rfuncn.hpp"

namespace hyptel {

// Contiguous window of exact sequence values: values[i] is the value at
// n = offset + i.
struct SeqWindow {
    long offset = 0;
    std::vector<Rat> values;

    long first() const { return offset; }
    long last() const { return offset + static_cast<long>(values.size()) - 1; }
    const Rat& at(long n) const;        // InvalidInput outside the window
};

// Operator sum c_i(n) * S^i in Q(n)[S, S^-1], where S shifts n by one.
// Multiplication uses S * c(n) = c(n+1) * S.  The normalized form has
// minimum exponent 0, a common integer-polynomial coefficient vector with
// content 1 and no common polynomial factor, and a positive leading
// coefficient.
class OreOp {
public:
    OreOp() = default;
    explicit OreOp(const RFuncN& c);                 // order-0 operator
    static OreOp identity() { return OreOp(RFuncN(1L)); }
    static OreOp monomial(const RFuncN& c, int exp); // c * S^exp
    static OreOp shift() { return monomial(RFuncN(1L), 1); }
    static OreOp from_coeffs(std::map<int, RFuncN> coeffs);

    bool is_zero() const { return c_.empty(); }
    // max exponent - min exponent; -1 for the zero operator.
    int order() const;
    int min_exp() const;                             // 0 for zero operator
    int max_exp() const;
    const std::map<int, RFuncN>& coeffs() const { return c_; }
    RFuncN coeff(int exp) const;
    bool is_normalized() const { return normalized_; }

    OreOp operator-() const;
    OreOp operator+(const OreOp& o) const;
    OreOp operator-(const OreOp& o) const;
    OreOp operator*(const OreOp& o) const;
    bool operator==(const OreOp& o) const { return c_ == o.c_; }

    // Exponents shifted so the minimum is 0 (right-multiplying by a power of
    // S), denominators and content cleared, leading coefficient positive.
    OreOp normalized() const;

    // a = q * b + r with order(r) < order(b); requires nonnegative exponents.
    static std::pair<OreOp, OreOp> right_divmod(const OreOp& a, const OreOp& b);

    // Result value at n is sum c_i(n) * s(n+i); the window shrinks by
    // max_exp at the top and by -min(0, min_exp) at the bottom.
    SeqWindow apply(const SeqWindow& s) const;

    // "(n+1)*S - (4*n+2)" style; canonical on normalized operators, and
    // prints rational coefficients faithfully otherwise.
    std::string to_string() const;
    nlohmann::json to_json() const;
    static OreOp from_json(const nlohmann::json& j);

    // Total bytes of the canonical text form (size reporting).
    std::size_t text_size() const { return to_string().size(); }

private:
    void prune();
    std::map<int, RFuncN> c_;
    bool normalized_ = false;
};

// Least common left multiple: minimal-order operator that every input
// right-divides.  InvalidInput on an empty list or a zero operator.
OreOp lclm(const std::vector<OreOp>& ops);

OreOp parse_op(const std::string& text);

}  // namespace hyptel
