#pragma once

// Symbolic expressions in one variable t: parsing, exact differentiation,
// guarded evaluation, and a canonical printer whose output reparses to the
// identical tree.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "umbilic/core.hpp"

namespace umbilic {

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

enum class ExprKind {
    Constant,
    Var,  // the variable t
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,  // integer exponent only
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
};

struct ExprNode {
    ExprKind kind;
    double value = 0.0;    // Constant
    long exponent = 0;     // Pow
    ExprPtr a, b;          // operands (b only for binary kinds)
};

inline ExprPtr make_constant(double v) {
    return std::make_shared<ExprNode>(ExprNode{ExprKind::Constant, v, 0, nullptr, nullptr});
}
inline ExprPtr make_var() {
    return std::make_shared<ExprNode>(ExprNode{ExprKind::Var, 0.0, 0, nullptr, nullptr});
}
inline ExprPtr make_unary(ExprKind k, ExprPtr a) {
    return std::make_shared<ExprNode>(ExprNode{k, 0.0, 0, std::move(a), nullptr});
}
inline ExprPtr make_binary(ExprKind k, ExprPtr a, ExprPtr b) {
    return std::make_shared<ExprNode>(ExprNode{k, 0.0, 0, std::move(a), std::move(b)});
}
inline ExprPtr make_pow(ExprPtr a, long n) {
    return std::make_shared<ExprNode>(ExprNode{ExprKind::Pow, 0.0, n, std::move(a), nullptr});
}

// ---------------------------------------------------------------------------
// Canonical printer: fully parenthesized, so precedence never matters and
// print -> parse reproduces the tree node for node.

inline std::string print_expr(const ExprPtr& e);

namespace detail {

inline std::string print_constant(double v) {
    // Shortest representation that round-trips the double exactly.
    for (int prec = 1; prec <= 17; ++prec) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline const char* function_name(ExprKind k) {
    switch (k) {
        case ExprKind::Sin: return "sin";
        case ExprKind::Cos: return "cos";
        case ExprKind::Tan: return "tan";
        case ExprKind::Sinh: return "sinh";
        case ExprKind::Cosh: return "cosh";
        case ExprKind::Tanh: return "tanh";
        case ExprKind::Exp: return "exp";
        case ExprKind::Log: return "log";
        case ExprKind::Sqrt: return "sqrt";
        default: return "?";
    }
}

}  // namespace detail

inline std::string print_expr(const ExprPtr& e) {
    if (!e) throw ValidationError("print_expr: null expression");
    switch (e->kind) {
        case ExprKind::Constant: return detail::print_constant(e->value);
        case ExprKind::Var: return "t";
        case ExprKind::Add: return "(" + print_expr(e->a) + " + " + print_expr(e->b) + ")";
        case ExprKind::Sub: return "(" + print_expr(e->a) + " - " + print_expr(e->b) + ")";
        case ExprKind::Mul: return "(" + print_expr(e->a) + " * " + print_expr(e->b) + ")";
        case ExprKind::Div: return "(" + print_expr(e->a) + " / " + print_expr(e->b) + ")";
        case ExprKind::Neg: return "(-" + print_expr(e->a) + ")";
        case ExprKind::Pow:
            return "(" + print_expr(e->a) + " ^ " + std::to_string(e->exponent) + ")";
        default:
            return std::string(detail::function_name(e->kind)) + "(" + print_expr(e->a) + ")";
    }
}

// Structural equality of trees.
inline bool expr_equal(const ExprPtr& x, const ExprPtr& y) {
    if (!x || !y) return x == y;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case ExprKind::Constant: return x->value == y->value;
        case ExprKind::Var: return true;
        case ExprKind::Pow: return x->exponent == y->exponent && expr_equal(x->a, y->a);
        case ExprKind::Add:
        case ExprKind::Sub:
        case ExprKind::Mul:
        case ExprKind::Div:
            return expr_equal(x->a, y->a) && expr_equal(x->b, y->b);
        default:
            return expr_equal(x->a, y->a);
    }
}

// ---------------------------------------------------------------------------
// Parser: infix grammar with precedence (tightest first)
//   unary minus > '^' (integer exponent) > '*','/' > '+','-'
//
//   expr   := term (('+'|'-') term)*
//   term   := power (('*'|'/') power)*
//   power  := unary ('^' integer)?
//   unary  := '-' unary | atom
//   atom   := number | 't' | name '(' expr ')' | '(' expr ')'

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : src_(text), pos_(0) {}

    ExprPtr parse() {
        ExprPtr e = parse_sum();
        skip_ws();
        if (pos_ != src_.size())
            throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= src_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr parse_sum() {
        ExprPtr e = parse_term();
        for (;;) {
            if (consume('+')) {
                e = make_binary(ExprKind::Add, e, parse_term());
            } else if (consume('-')) {
                e = make_binary(ExprKind::Sub, e, parse_term());
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_power();
        for (;;) {
            if (consume('*')) {
                e = make_binary(ExprKind::Mul, e, parse_power());
            } else if (consume('/')) {
                e = make_binary(ExprKind::Div, e, parse_power());
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_unary();
        if (consume('^')) {
            skip_ws();
            const std::size_t at = pos_;
            long sign = 1;
            if (consume('-')) sign = -1;
            skip_ws();
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                throw ParseError("exponent must be an integer literal", at);
            long n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                n = n * 10 + (src_[pos_] - '0');
                if (n > 1000000) throw ParseError("exponent too large", at);
                ++pos_;
            }
            if (pos_ < src_.size() && src_[pos_] == '.')
                throw ParseError("exponent must be an integer literal", at);
            return make_pow(base, sign * n);
        }
        return base;
    }

    ExprPtr parse_unary() {
        if (consume('-')) return make_unary(ExprKind::Neg, parse_unary());
        return parse_atom();
    }

    ExprPtr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = src_[pos_];

        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_sum();
            if (!consume(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    ExprPtr parse_number() {
        const std::size_t at = pos_;
        std::size_t n = pos_;
        auto is_digit = [&](std::size_t i) {
            return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
        };
        while (is_digit(n)) ++n;
        if (n < src_.size() && src_[n] == '.') {
            ++n;
            while (is_digit(n)) ++n;
        }
        if (n < src_.size() && (src_[n] == 'e' || src_[n] == 'E')) {
            std::size_t m = n + 1;
            if (m < src_.size() && (src_[m] == '+' || src_[m] == '-')) ++m;
            if (is_digit(m)) {
                n = m;
                while (is_digit(n)) ++n;
            }
        }
        const std::string text(src_.substr(at, n - at));
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end == text.c_str() || *end != '\0')
            throw ParseError("malformed number", at);
        pos_ = n;
        return make_constant(v);
    }

    ExprPtr parse_name() {
        const std::size_t at = pos_;
        std::size_t n = pos_;
        while (n < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[n])) || src_[n] == '_'))
            ++n;
        const std::string name(src_.substr(at, n - at));
        pos_ = n;
        if (name == "t") return make_var();

        static const std::pair<const char*, ExprKind> kFns[] = {
            {"sin", ExprKind::Sin},   {"cos", ExprKind::Cos},   {"tan", ExprKind::Tan},
            {"sinh", ExprKind::Sinh}, {"cosh", ExprKind::Cosh}, {"tanh", ExprKind::Tanh},
            {"exp", ExprKind::Exp},   {"log", ExprKind::Log},   {"sqrt", ExprKind::Sqrt},
        };
        for (const auto& [fname, kind] : kFns) {
            if (name == fname) {
                if (!consume('(')) throw ParseError("expected '(' after function name", pos_);
                ExprPtr arg = parse_sum();
                if (!consume(')')) throw ParseError("expected ')'", pos_);
                return make_unary(kind, arg);
            }
        }
        throw ParseError("unknown identifier '" + name + "'", at);
    }
};

}  // namespace detail

inline ExprPtr parse_warp_expr(std::string_view text) {
    return detail::Parser(text).parse();
}

// ---------------------------------------------------------------------------
// Evaluation with domain guards; no silent NaN/Inf ever escapes.

inline double eval_ast(const ExprPtr& e, double t) {
    if (!e) throw ValidationError("eval_ast: null expression");
    auto guard = [&](double v) {
        if (!std::isfinite(v)) throw EvalError("non-finite result", print_expr(e));
        return v;
    };
    switch (e->kind) {
        case ExprKind::Constant: return guard(e->value);
        case ExprKind::Var: return guard(t);
        case ExprKind::Add: return guard(eval_ast(e->a, t) + eval_ast(e->b, t));
        case ExprKind::Sub: return guard(eval_ast(e->a, t) - eval_ast(e->b, t));
        case ExprKind::Mul: return guard(eval_ast(e->a, t) * eval_ast(e->b, t));
        case ExprKind::Div: {
            const double num = eval_ast(e->a, t);
            const double den = eval_ast(e->b, t);
            if (den == 0.0) throw EvalError("division by zero", print_expr(e));
            return guard(num / den);
        }
        case ExprKind::Neg: return guard(-eval_ast(e->a, t));
        case ExprKind::Pow: {
            const double base = eval_ast(e->a, t);
            if (base == 0.0 && e->exponent < 0)
                throw EvalError("zero raised to a negative power", print_expr(e));
            return guard(std::pow(base, static_cast<double>(e->exponent)));
        }
        case ExprKind::Sin: return guard(std::sin(eval_ast(e->a, t)));
        case ExprKind::Cos: return guard(std::cos(eval_ast(e->a, t)));
        case ExprKind::Tan: {
            const double x = eval_ast(e->a, t);
            const double v = std::tan(x);
            if (!std::isfinite(v)) throw EvalError("tangent at a singularity", print_expr(e));
            return v;
        }
        case ExprKind::Sinh: return guard(std::sinh(eval_ast(e->a, t)));
        case ExprKind::Cosh: return guard(std::cosh(eval_ast(e->a, t)));
        case ExprKind::Tanh: return guard(std::tanh(eval_ast(e->a, t)));
        case ExprKind::Exp: return guard(std::exp(eval_ast(e->a, t)));
        case ExprKind::Log: {
            const double x = eval_ast(e->a, t);
            if (x <= 0.0) throw EvalError("logarithm of a non-positive value", print_expr(e));
            return guard(std::log(x));
        }
        case ExprKind::Sqrt: {
            const double x = eval_ast(e->a, t);
            if (x < 0.0) throw EvalError("square root of a negative value", print_expr(e));
            return guard(std::sqrt(x));
        }
    }
    throw ValidationError("eval_ast: unknown node kind");
}

// ---------------------------------------------------------------------------
// Exact symbolic differentiation (with light constant folding so second
// derivatives stay compact).

namespace detail {

inline bool is_const(const ExprPtr& e, double v) {
    return e && e->kind == ExprKind::Constant && e->value == v;
}

inline ExprPtr fold_add(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
        return make_constant(a->value + b->value);
    return make_binary(ExprKind::Add, std::move(a), std::move(b));
}
inline ExprPtr fold_sub(ExprPtr a, ExprPtr b) {
    if (is_const(b, 0.0)) return a;
    if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
        return make_constant(a->value - b->value);
    if (is_const(a, 0.0)) return make_unary(ExprKind::Neg, std::move(b));
    return make_binary(ExprKind::Sub, std::move(a), std::move(b));
}
inline ExprPtr fold_mul(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
        return make_constant(a->value * b->value);
    return make_binary(ExprKind::Mul, std::move(a), std::move(b));
}
inline ExprPtr fold_div(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0) && !is_const(b, 0.0)) return make_constant(0.0);
    if (is_const(b, 1.0)) return a;
    return make_binary(ExprKind::Div, std::move(a), std::move(b));
}
inline ExprPtr fold_neg(ExprPtr a) {
    if (a->kind == ExprKind::Constant) return make_constant(-a->value);
    return make_unary(ExprKind::Neg, std::move(a));
}
inline ExprPtr fold_pow(ExprPtr a, long n) {
    if (n == 0) return make_constant(1.0);
    if (n == 1) return a;
    return make_pow(std::move(a), n);
}

}  // namespace detail

inline ExprPtr differentiate(const ExprPtr& e) {
    using namespace detail;
    if (!e) throw ValidationError("differentiate: null expression");
    switch (e->kind) {
        case ExprKind::Constant: return make_constant(0.0);
        case ExprKind::Var: return make_constant(1.0);
        case ExprKind::Add: return fold_add(differentiate(e->a), differentiate(e->b));
        case ExprKind::Sub: return fold_sub(differentiate(e->a), differentiate(e->b));
        case ExprKind::Mul:
            return fold_add(fold_mul(differentiate(e->a), e->b),
                            fold_mul(e->a, differentiate(e->b)));
        case ExprKind::Div:
            // (a/b)' = (a'b - ab') / b^2
            return fold_div(fold_sub(fold_mul(differentiate(e->a), e->b),
                                     fold_mul(e->a, differentiate(e->b))),
                            fold_pow(e->b, 2));
        case ExprKind::Neg: return fold_neg(differentiate(e->a));
        case ExprKind::Pow:
            // (a^n)' = n a^(n-1) a'
            return fold_mul(
                fold_mul(make_constant(static_cast<double>(e->exponent)),
                         fold_pow(e->a, e->exponent - 1)),
                differentiate(e->a));
        case ExprKind::Sin: return fold_mul(make_unary(ExprKind::Cos, e->a), differentiate(e->a));
        case ExprKind::Cos:
            return fold_mul(fold_neg(make_unary(ExprKind::Sin, e->a)), differentiate(e->a));
        case ExprKind::Tan:
            // tan' = 1 / cos^2
            return fold_div(differentiate(e->a), fold_pow(make_unary(ExprKind::Cos, e->a), 2));
        case ExprKind::Sinh:
            return fold_mul(make_unary(ExprKind::Cosh, e->a), differentiate(e->a));
        case ExprKind::Cosh:
            return fold_mul(make_unary(ExprKind::Sinh, e->a), differentiate(e->a));
        case ExprKind::Tanh:
            // tanh' = 1 / cosh^2
            return fold_div(differentiate(e->a), fold_pow(make_unary(ExprKind::Cosh, e->a), 2));
        case ExprKind::Exp: return fold_mul(make_unary(ExprKind::Exp, e->a), differentiate(e->a));
        case ExprKind::Log: return fold_div(differentiate(e->a), e->a);
        case ExprKind::Sqrt:
            // sqrt' = a' / (2 sqrt(a))
            return fold_div(differentiate(e->a),
                            fold_mul(make_constant(2.0), make_unary(ExprKind::Sqrt, e->a)));
    }
    throw ValidationError("differentiate: unknown node kind");
}

}  // namespace umbilic
