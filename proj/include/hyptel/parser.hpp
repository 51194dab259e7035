#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hyptel/rational.hpp"
#include "hyptel/rfuncnk.hpp"

namespace hyptel {

// Expression AST shared by the term grammar, the operator grammar, and plain
// rational-function input: integers, identifiers, + - * / ^, parentheses,
// and calls like binomial(a, b).
struct Expr {
    enum class Kind { Number, Variable, Unary, Binary, Call };
    Kind kind;
    std::size_t pos = 0;               // byte offset in the source text
    Int number;                        // Number
    std::string name;                  // Variable / Call
    char op = 0;                       // Binary: one of + - * / ^; Unary: -
    std::vector<std::unique_ptr<Expr>> args;   // operands / call arguments
};

// Throws InvalidInput with the byte position on syntax errors.
std::unique_ptr<Expr> parse_expression(const std::string& text);

// Evaluate an AST over Q(n,k).  Calls are rejected; unknown identifiers and
// non-integer exponents are errors.
RFuncNK eval_rational_expr(const Expr& e);

// Convenience: parse + evaluate.
RFuncNK parse_rational(const std::string& text);

// Line-oriented input document:
//   [term]
//   expr = binomial(n,k)^7 / (2*n+3*k)
//   [sum]
//   k_range = 0..n
// Values may be double-quoted; '#' starts a comment.  Unknown sections are
// kept; duplicate keys are errors.
struct Document {
    std::map<std::string, std::map<std::string, std::string>> sections;
    const std::string* find(const std::string& section,
                            const std::string& key) const;
};

Document parse_document(const std::string& text);

}  // namespace hyptel
