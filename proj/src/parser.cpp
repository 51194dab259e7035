#include "hyptel/parser.hpp"

#include <cctype>

#include "hyptel/errors.hpp"

namespace hyptel {

namespace {

struct Token {
    enum class Kind { Number, Ident, Op, LParen, RParen, Comma, End };
    Kind kind;
    std::size_t pos;
    std::string text;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        tok_.pos = i_;
        if (i_ >= s_.size()) {
            tok_ = {Token::Kind::End, i_, ""};
            return;
        }
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
            tok_ = {Token::Kind::Number, i_, s_.substr(i_, j - i_)};
            i_ = j;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) {
                ++j;
            }
            tok_ = {Token::Kind::Ident, i_, s_.substr(i_, j - i_)};
            i_ = j;
            return;
        }
        switch (c) {
            case '+': case '-': case '*': case '/': case '^':
                tok_ = {Token::Kind::Op, i_, std::string(1, c)};
                break;
            case '(':
                tok_ = {Token::Kind::LParen, i_, "("};
                break;
            case ')':
                tok_ = {Token::Kind::RParen, i_, ")"};
                break;
            case ',':
                tok_ = {Token::Kind::Comma, i_, ","};
                break;
            default:
                throw InvalidInput("unexpected character '" + std::string(1, c) +
                                   "' at position " + std::to_string(i_));
        }
        ++i_;
    }

    const std::string& s_;
    std::size_t i_ = 0;
    Token tok_;
};

class Parser {
public:
    explicit Parser(const std::string& s) : lex_(s) {}

    std::unique_ptr<Expr> parse() {
        auto e = sum();
        if (lex_.peek().kind != Token::Kind::End) {
            fail("unexpected trailing input");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) {
        throw InvalidInput(what + " at position " + std::to_string(lex_.peek().pos));
    }

    bool at_op(char c) {
        return lex_.peek().kind == Token::Kind::Op && lex_.peek().text[0] == c;
    }

    std::unique_ptr<Expr> make_binary(char op, std::unique_ptr<Expr> l,
                                      std::unique_ptr<Expr> r, std::size_t pos) {
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::Binary;
        e->pos = pos;
        e->op = op;
        e->args.push_back(std::move(l));
        e->args.push_back(std::move(r));
        return e;
    }

    std::unique_ptr<Expr> sum() {
        auto l = product();
        while (at_op('+') || at_op('-')) {
            Token t = lex_.take();
            l = make_binary(t.text[0], std::move(l), product(), t.pos);
        }
        return l;
    }

    std::unique_ptr<Expr> product() {
        auto l = unary();
        while (at_op('*') || at_op('/')) {
            Token t = lex_.take();
            l = make_binary(t.text[0], std::move(l), unary(), t.pos);
        }
        return l;
    }

    std::unique_ptr<Expr> unary() {
        if (at_op('-')) {
            Token t = lex_.take();
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::Unary;
            e->pos = t.pos;
            e->op = '-';
            e->args.push_back(unary());
            return e;
        }
        if (at_op('+')) {
            lex_.take();
            return unary();
        }
        return power();
    }

    std::unique_ptr<Expr> power() {
        auto base = atom();
        if (at_op('^')) {
            Token t = lex_.take();
            // Right-associative; the exponent may carry a unary sign.
            return make_binary('^', std::move(base), unary(), t.pos);
        }
        return base;
    }

    std::unique_ptr<Expr> atom() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Token::Kind::Number: {
                Token num = lex_.take();
                auto e = std::make_unique<Expr>();
                e->kind = Expr::Kind::Number;
                e->pos = num.pos;
                e->number = int_from_string(num.text);
                return e;
            }
            case Token::Kind::Ident: {
                Token id = lex_.take();
                if (lex_.peek().kind == Token::Kind::LParen) {
                    lex_.take();
                    auto e = std::make_unique<Expr>();
                    e->kind = Expr::Kind::Call;
                    e->pos = id.pos;
                    e->name = id.text;
                    if (lex_.peek().kind != Token::Kind::RParen) {
                        e->args.push_back(sum());
                        while (lex_.peek().kind == Token::Kind::Comma) {
                            lex_.take();
                            e->args.push_back(sum());
                        }
                    }
                    if (lex_.peek().kind != Token::Kind::RParen) {
                        fail("expected ')'");
                    }
                    lex_.take();
                    return e;
                }
                auto e = std::make_unique<Expr>();
                e->kind = Expr::Kind::Variable;
                e->pos = id.pos;
                e->name = id.text;
                return e;
            }
            case Token::Kind::LParen: {
                lex_.take();
                auto e = sum();
                if (lex_.peek().kind != Token::Kind::RParen) fail("expected ')'");
                lex_.take();
                return e;
            }
            default:
                fail("expected a number, identifier, or '('");
        }
    }

    Lexer lex_;
};

}  // namespace

std::unique_ptr<Expr> parse_expression(const std::string& text) {
    return Parser(text).parse();
}

RFuncNK eval_rational_expr(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Number:
            return RFuncNK(Rat(e.number));
        case Expr::Kind::Variable:
            if (e.name == "n") return RFuncNK(PolyNK::var_n());
            if (e.name == "k") return RFuncNK(PolyNK::var_k());
            throw InvalidInput("unknown identifier '" + e.name + "' at position " +
                               std::to_string(e.pos));
        case Expr::Kind::Unary:
            return -eval_rational_expr(*e.args[0]);
        case Expr::Kind::Binary: {
            if (e.op == '^') {
                RFuncNK base = eval_rational_expr(*e.args[0]);
                const Expr* ex = e.args[1].get();
                bool neg = false;
                while (ex->kind == Expr::Kind::Unary) {
                    neg = !neg;
                    ex = ex->args[0].get();
                }
                if (ex->kind != Expr::Kind::Number) {
                    throw InvalidInput("exponent must be an integer at position " +
                                       std::to_string(ex->pos));
                }
                long p = to_long_checked(ex->number, "exponent");
                return base.pow(neg ? -p : p);
            }
            RFuncNK l = eval_rational_expr(*e.args[0]);
            RFuncNK r = eval_rational_expr(*e.args[1]);
            switch (e.op) {
                case '+': return l + r;
                case '-': return l - r;
                case '*': return l * r;
                case '/':
                    if (r.is_zero()) {
                        throw DivisionByZero("division by zero at position " +
                                             std::to_string(e.pos));
                    }
                    return l / r;
                default: break;
            }
            throw InternalError("unknown binary operator");
        }
        case Expr::Kind::Call:
            throw InvalidInput("function '" + e.name +
                               "' is not allowed in a rational expression "
                               "(position " + std::to_string(e.pos) + ")");
    }
    throw InternalError("unhandled expression node");
}

RFuncNK parse_rational(const std::string& text) {
    return eval_rational_expr(*parse_expression(text));
}

const std::string* Document::find(const std::string& section,
                                  const std::string& key) const {
    auto s = sections.find(section);
    if (s == sections.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    return &k->second;
}

namespace {

std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

Document parse_document(const std::string& text) {
    Document doc;
    std::string section;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::string line = end == std::string::npos ? text.substr(start)
                                                    : text.substr(start, end - start);
        start = end == std::string::npos ? text.size() + 1 : end + 1;
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw InvalidInput("malformed section header on line " +
                                   std::to_string(line_no));
            }
            section = strip(line.substr(1, line.size() - 2));
            doc.sections[section];
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidInput("expected 'key = value' on line " +
                               std::to_string(line_no));
        }
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        if (key.empty()) {
            throw InvalidInput("empty key on line " + std::to_string(line_no));
        }
        auto& sec = doc.sections[section];
        if (sec.count(key)) {
            throw InvalidInput("duplicate key '" + key + "' on line " +
                               std::to_string(line_no));
        }
        sec[key] = value;
    }
    return doc;
}

}  // namespace hyptel
