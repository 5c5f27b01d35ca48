#pragma once

#include <cctype>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ahtlab/errors.hpp"
#include "ahtlab/numeric.hpp"

// Expression DSL for colorings.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/' | '%') factor)*
//   factor := NUM | VAR | call | '(' expr ')'
//           | 'if' '(' cond ',' expr ',' expr ')'
//   call   := ('lam' | 'mu' | 'pop') '(' expr ')'
//   cond   := expr ('==' | '!=' | '<' | '<=' | '>' | '>=') expr
//
// NUM is a nonnegative decimal literal. Arithmetic is signed 64-bit
// with wraparound; '/' and '%' are Euclidean (remainder always
// non-negative), and x/0, x%0, or a non-positive argument to lam/mu
// raise EvalError at evaluation time.
namespace ahtlab {

using Int = std::int64_t;

enum class BinaryOp { Add, Sub, Mul, Div, Mod };
enum class CmpOp { Lt, Le, Eq, Ne, Ge, Gt };
enum class CallOp { Lam, Mu, Pop };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Number, Var, Binary, Call, If } kind;

    Int value = 0;            // Number
    std::string name;         // Var
    BinaryOp bin_op{};        // Binary
    CallOp call_op{};         // Call
    CmpOp cmp_op{};           // If condition
    ExprPtr lhs, rhs;         // Binary operands / If condition sides
    ExprPtr then_branch, else_branch;
};

inline ExprPtr make_number(Int v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Number;
    e->value = v;
    return e;
}

inline ExprPtr make_var(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Var;
    e->name = std::move(name);
    return e;
}

inline ExprPtr make_binary(BinaryOp op, ExprPtr l, ExprPtr r) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Binary;
    e->bin_op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}

inline ExprPtr make_call(CallOp op, ExprPtr arg) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Call;
    e->call_op = op;
    e->lhs = std::move(arg);
    return e;
}

inline ExprPtr make_if(CmpOp op, ExprPtr cl, ExprPtr cr, ExprPtr t, ExprPtr f) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::If;
    e->cmp_op = op;
    e->lhs = std::move(cl);
    e->rhs = std::move(cr);
    e->then_branch = std::move(t);
    e->else_branch = std::move(f);
    return e;
}

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::Number: return a->value == b->value;
        case Expr::Kind::Var: return a->name == b->name;
        case Expr::Kind::Binary:
            return a->bin_op == b->bin_op && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
        case Expr::Kind::Call:
            return a->call_op == b->call_op && equal(a->lhs, b->lhs);
        case Expr::Kind::If:
            return a->cmp_op == b->cmp_op && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs) &&
                   equal(a->then_branch, b->then_branch) && equal(a->else_branch, b->else_branch);
    }
    return false;
}

namespace detail {

struct Token {
    enum class Kind { Number, Ident, Symbol, End } kind;
    std::string text;
    Int number = 0;
    int line = 1;
    int col = 1;
};

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_space();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= src_.size()) {
            t.kind = Token::Kind::End;
            return t;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            t.kind = Token::Kind::Number;
            std::uint64_t v = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                std::uint64_t d = std::uint64_t(src_[pos_] - '0');
                if (v > (std::uint64_t(INT64_MAX) - d) / 10)
                    throw ParseError("integer literal out of range", t.line, t.col);
                v = v * 10 + d;
                t.text.push_back(src_[pos_]);
                advance();
            }
            t.number = Int(v);
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = Token::Kind::Ident;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                t.text.push_back(src_[pos_]);
                advance();
            }
            return t;
        }
        t.kind = Token::Kind::Symbol;
        static constexpr std::string_view two[] = {"<=", ">=", "==", "!="};
        if (pos_ + 1 < src_.size()) {
            std::string_view pair = src_.substr(pos_, 2);
            for (auto s : two)
                if (pair == s) {
                    t.text = std::string(pair);
                    advance();
                    advance();
                    return t;
                }
        }
        if (std::string_view("+-*/%(),<>").find(c) == std::string_view::npos)
            throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.col);
        t.text.push_back(c);
        advance();
        return t;
    }

  private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < src_.size() &&
               std::isspace(static_cast<unsigned char>(src_[pos_])))
            advance();
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
  public:
    Parser(std::string_view src, std::vector<std::string> vars)
        : lexer_(src), vars_(std::move(vars)) {
        cur_ = lexer_.next();
    }

    ExprPtr parse() {
        auto e = parse_expr();
        if (cur_.kind != Token::Kind::End)
            throw ParseError("trailing input after expression", cur_.line, cur_.col);
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, cur_.line, cur_.col);
    }

    void bump() { cur_ = lexer_.next(); }

    bool at_symbol(std::string_view s) const {
        return cur_.kind == Token::Kind::Symbol && cur_.text == s;
    }

    bool at_ident(std::string_view s) const {
        return cur_.kind == Token::Kind::Ident && cur_.text == s;
    }

    void expect_symbol(std::string_view s) {
        if (!at_symbol(s)) fail("expected '" + std::string(s) + "'");
        bump();
    }

    void expect_ident(std::string_view s) {
        if (!at_ident(s)) fail("expected '" + std::string(s) + "'");
        bump();
    }

    ExprPtr parse_expr() {
        auto lhs = parse_term();
        while (at_symbol("+") || at_symbol("-")) {
            BinaryOp op = cur_.text == "+" ? BinaryOp::Add : BinaryOp::Sub;
            bump();
            lhs = make_binary(op, std::move(lhs), parse_term());
        }
        return lhs;
    }

    ExprPtr parse_term() {
        auto lhs = parse_factor();
        while (at_symbol("*") || at_symbol("/") || at_symbol("%")) {
            BinaryOp op = cur_.text == "*"   ? BinaryOp::Mul
                          : cur_.text == "/" ? BinaryOp::Div
                                             : BinaryOp::Mod;
            bump();
            lhs = make_binary(op, std::move(lhs), parse_factor());
        }
        return lhs;
    }

    ExprPtr parse_factor() {
        if (cur_.kind == Token::Kind::Number) {
            Int v = cur_.number;
            bump();
            return make_number(v);
        }
        if (at_symbol("(")) {
            bump();
            auto e = parse_expr();
            expect_symbol(")");
            return e;
        }
        if (cur_.kind == Token::Kind::Ident) {
            if (cur_.text == "if") return parse_if();
            if (cur_.text == "lam" || cur_.text == "mu" || cur_.text == "pop") {
                std::string fn = cur_.text;
                CallOp op = fn == "lam"  ? CallOp::Lam
                            : fn == "mu" ? CallOp::Mu
                                         : CallOp::Pop;
                bump();
                expect_symbol("(");
                auto arg = parse_expr();
                if (at_symbol(","))
                    fail("arity error: " + fn + " takes one argument");
                expect_symbol(")");
                return make_call(op, std::move(arg));
            }
            for (const auto& v : vars_)
                if (cur_.text == v) {
                    auto e = make_var(cur_.text);
                    bump();
                    return e;
                }
            fail("unknown identifier '" + cur_.text + "'");
        }
        if (cur_.kind == Token::Kind::End) fail("unexpected end of input");
        fail("unexpected token '" + cur_.text + "'");
    }

    ExprPtr parse_if() {
        expect_ident("if");
        expect_symbol("(");
        auto cl = parse_expr();
        CmpOp op;
        if (at_symbol("<")) op = CmpOp::Lt;
        else if (at_symbol("<=")) op = CmpOp::Le;
        else if (at_symbol("==")) op = CmpOp::Eq;
        else if (at_symbol("!=")) op = CmpOp::Ne;
        else if (at_symbol(">=")) op = CmpOp::Ge;
        else if (at_symbol(">")) op = CmpOp::Gt;
        else fail("expected comparison operator");
        bump();
        auto cr = parse_expr();
        expect_symbol(",");
        auto t = parse_expr();
        expect_symbol(",");
        auto f = parse_expr();
        if (at_symbol(","))
            fail("arity error: if takes a condition and two branches");
        expect_symbol(")");
        return make_if(op, std::move(cl), std::move(cr), std::move(t), std::move(f));
    }

    Lexer lexer_;
    Token cur_;
    std::vector<std::string> vars_;
};

// Wraparound signed arithmetic via unsigned two's complement.
inline Int wrap_add(Int a, Int b) {
    return Int(std::uint64_t(a) + std::uint64_t(b));
}
inline Int wrap_sub(Int a, Int b) {
    return Int(std::uint64_t(a) - std::uint64_t(b));
}
inline Int wrap_mul(Int a, Int b) {
    return Int(std::uint64_t(a) * std::uint64_t(b));
}

} // namespace detail

// Euclidean division: remainder in [0, |b|), quotient rounded so that
// a == q*b + r holds.
inline Int euclid_div(Int a, Int b) {
    if (b == 0) throw EvalError("division by zero");
    if (a == INT64_MIN && b == -1) return INT64_MIN; // wraps, r = 0
    Int q = a / b, r = a % b;
    if (r < 0) q += (b > 0 ? -1 : 1);
    return q;
}

inline Int euclid_mod(Int a, Int b) {
    if (b == 0) throw EvalError("modulo by zero");
    if (a == INT64_MIN && b == -1) return 0;
    Int r = a % b;
    if (r < 0) r += (b > 0 ? b : -b);
    return r;
}

// Environment: named variable bindings, resolved at evaluation time.
struct Binding {
    std::string name;
    Int value;
};

inline Int eval(const ExprPtr& e, std::span<const Binding> env) {
    switch (e->kind) {
        case Expr::Kind::Number:
            return e->value;
        case Expr::Kind::Var:
            for (const auto& b : env)
                if (b.name == e->name) return b.value;
            throw EvalError("unbound variable '" + e->name + "'");
        case Expr::Kind::Binary: {
            Int a = eval(e->lhs, env), b = eval(e->rhs, env);
            switch (e->bin_op) {
                case BinaryOp::Add: return detail::wrap_add(a, b);
                case BinaryOp::Sub: return detail::wrap_sub(a, b);
                case BinaryOp::Mul: return detail::wrap_mul(a, b);
                case BinaryOp::Div: return euclid_div(a, b);
                case BinaryOp::Mod: return euclid_mod(a, b);
            }
            throw EvalError("bad binary op");
        }
        case Expr::Kind::Call: {
            Int a = eval(e->lhs, env);
            switch (e->call_op) {
                case CallOp::Lam:
                    if (a <= 0) throw EvalError("lam: argument must be positive");
                    return lam(PosInt(a));
                case CallOp::Mu:
                    if (a <= 0) throw EvalError("mu: argument must be positive");
                    return mu(PosInt(a));
                case CallOp::Pop:
                    if (a < 0) throw EvalError("pop: argument must be non-negative");
                    return popcount(PosInt(a));
            }
            throw EvalError("bad call op");
        }
        case Expr::Kind::If: {
            Int a = eval(e->lhs, env), b = eval(e->rhs, env);
            bool cond = false;
            switch (e->cmp_op) {
                case CmpOp::Lt: cond = a < b; break;
                case CmpOp::Le: cond = a <= b; break;
                case CmpOp::Eq: cond = a == b; break;
                case CmpOp::Ne: cond = a != b; break;
                case CmpOp::Ge: cond = a >= b; break;
                case CmpOp::Gt: cond = a > b; break;
            }
            return eval(cond ? e->then_branch : e->else_branch, env);
        }
    }
    throw EvalError("bad expression node");
}

// Parses `src` with the given free variables (e.g. {"n"} or {"i","j"}).
inline ExprPtr parse_expr(std::string_view src, std::vector<std::string> vars) {
    return detail::Parser(src, std::move(vars)).parse();
}

namespace detail {

// if(...) and calls are self-delimiting, so only binaries ever force
// parentheses on their children.
inline int precedence(const ExprPtr& e) {
    if (e->kind == Expr::Kind::Binary)
        return (e->bin_op == BinaryOp::Add || e->bin_op == BinaryOp::Sub) ? 1 : 2;
    return 3;
}

inline void print_rec(std::string& out, const ExprPtr& e, int min_prec);

inline void print_child(std::string& out, const ExprPtr& e, int min_prec) {
    if (precedence(e) < min_prec) {
        out.push_back('(');
        print_rec(out, e, 0);
        out.push_back(')');
    } else {
        print_rec(out, e, min_prec);
    }
}

inline void print_rec(std::string& out, const ExprPtr& e, int min_prec) {
    switch (e->kind) {
        case Expr::Kind::Number:
            out += std::to_string(e->value);
            return;
        case Expr::Kind::Var:
            out += e->name;
            return;
        case Expr::Kind::Binary: {
            const int p = precedence(e);
            const char* op = nullptr;
            switch (e->bin_op) {
                case BinaryOp::Add: op = " + "; break;
                case BinaryOp::Sub: op = " - "; break;
                case BinaryOp::Mul: op = " * "; break;
                case BinaryOp::Div: op = " / "; break;
                case BinaryOp::Mod: op = " % "; break;
            }
            // Left-associative: the right child needs strictly higher
            // precedence to drop its parens.
            print_child(out, e->lhs, p);
            out += op;
            print_child(out, e->rhs, p + 1);
            (void)min_prec;
            return;
        }
        case Expr::Kind::Call:
            switch (e->call_op) {
                case CallOp::Lam: out += "lam("; break;
                case CallOp::Mu: out += "mu("; break;
                case CallOp::Pop: out += "pop("; break;
            }
            print_rec(out, e->lhs, 0);
            out.push_back(')');
            return;
        case Expr::Kind::If: {
            const char* op = nullptr;
            switch (e->cmp_op) {
                case CmpOp::Lt: op = " < "; break;
                case CmpOp::Le: op = " <= "; break;
                case CmpOp::Eq: op = " == "; break;
                case CmpOp::Ne: op = " != "; break;
                case CmpOp::Ge: op = " >= "; break;
                case CmpOp::Gt: op = " > "; break;
            }
            out += "if(";
            print_rec(out, e->lhs, 0);
            out += op;
            print_rec(out, e->rhs, 0);
            out += ", ";
            print_rec(out, e->then_branch, 0);
            out += ", ";
            print_rec(out, e->else_branch, 0);
            out.push_back(')');
            return;
        }
    }
}

} // namespace detail

// Canonical form: minimal parentheses, single spaces around binary
// operators. parse(print(e)) reproduces e for every parseable source.
inline std::string print_expr(const ExprPtr& e) {
    std::string out;
    detail::print_rec(out, e, 0);
    return out;
}

} // namespace ahtlab
