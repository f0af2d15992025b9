#pragma once

#include "ftw/numeric_kernel.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ftw {

/// Coefficient expression over the variable `t` and the fractional order `mu`.
///
/// Grammar (lowest to highest precedence):
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?          right-associative
///   primary := number | 't' | 'mu' | 'pi' | name '(' sum ')' | '(' sum ')'
/// with name one of gamma, cosh, sinh, exp, sqrt.
class Expr {
public:
    enum class Kind { Number, Variable, Order, Pi, Negate, Add, Subtract, Multiply, Divide, Power, Call };

    Kind kind() const noexcept { return node_->kind; }

    /// Throws EvaluationError on division by zero, gamma poles and non-finite results.
    double evaluate(double t, double mu = 1.0) const;

    /// Fully parenthesized form; parse(print()) yields an identical tree.
    std::string print() const;

    friend bool operator==(const Expr& a, const Expr& b);

    /// Builds the tree of a single node; used by the parser.
    static Expr number(double value);
    static Expr leaf(Kind kind);
    static Expr unary(Kind kind, Expr operand);
    static Expr binary(Kind kind, Expr lhs, Expr rhs);
    static Expr call(std::string name, Expr argument);

private:
    struct Node {
        Kind kind;
        double value = 0.0;
        std::string name;
        std::vector<Expr> children;
    };
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

/// Throws ParseError carrying the 1-based column of the offending token.
Expr parse_expression(std::string_view source);

/// t -> expr(t, mu).
RealFunction to_function(Expr expr, double mu);

}  // namespace ftw
