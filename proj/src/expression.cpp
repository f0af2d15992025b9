#include "ftw/expression.hpp"

#include "ftw/errors.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace ftw {

namespace {

constexpr std::array<std::string_view, 5> kFunctions{"gamma", "cosh", "sinh", "exp", "sqrt"};

double call_function(std::string_view name, double x) {
    if (name == "gamma") {
        if (x <= 0.0 && x == std::floor(x)) {
            throw EvaluationError("gamma pole at " + std::to_string(x));
        }
        return std::tgamma(x);
    }
    if (name == "cosh") {
        return std::cosh(x);
    }
    if (name == "sinh") {
        return std::sinh(x);
    }
    if (name == "exp") {
        return std::exp(x);
    }
    if (x < 0.0) {
        throw EvaluationError("sqrt of negative value " + std::to_string(x));
    }
    return std::sqrt(x);
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr parse() {
        skip_space();
        if (pos_ == src_.size()) {
            fail("empty expression");
        }
        Expr e = sum();
        skip_space();
        if (pos_ != src_.size()) {
            fail(std::string("unexpected '") + src_[pos_] + "'");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        const int column = static_cast<int>(pos_) + 1;
        throw ParseError(what + " at column " + std::to_string(column), 0, column);
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr sum() {
        Expr lhs = product();
        while (true) {
            if (accept('+')) {
                lhs = Expr::binary(Expr::Kind::Add, lhs, product());
            } else if (accept('-')) {
                lhs = Expr::binary(Expr::Kind::Subtract, lhs, product());
            } else {
                return lhs;
            }
        }
    }

    Expr product() {
        Expr lhs = unary();
        while (true) {
            if (accept('*')) {
                lhs = Expr::binary(Expr::Kind::Multiply, lhs, unary());
            } else if (accept('/')) {
                lhs = Expr::binary(Expr::Kind::Divide, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    Expr unary() {
        if (accept('-')) {
            return Expr::unary(Expr::Kind::Negate, unary());
        }
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (accept('^')) {
            return Expr::binary(Expr::Kind::Power, base, unary());
        }
        return base;
    }

    Expr primary() {
        skip_space();
        if (pos_ == src_.size()) {
            fail("unexpected end of expression");
        }
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = sum();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return identifier();
        }
        fail(std::string("unexpected '") + c + "'");
    }

    Expr number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) {
                ++p;
            }
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                pos_ = p;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    ++pos_;
                }
            }
        }
        double value = 0.0;
        const auto [end, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc() || end != src_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return Expr::number(value);
    }

    Expr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "t") {
            return Expr::leaf(Expr::Kind::Variable);
        }
        if (name == "mu") {
            return Expr::leaf(Expr::Kind::Order);
        }
        if (name == "pi") {
            return Expr::leaf(Expr::Kind::Pi);
        }
        for (auto fn : kFunctions) {
            if (name == fn) {
                if (!accept('(')) {
                    fail("expected '(' after " + std::string(name));
                }
                Expr arg = sum();
                if (!accept(')')) {
                    fail("expected ')'");
                }
                return Expr::call(std::string(name), arg);
            }
        }
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

const char* symbol(Expr::Kind kind) {
    switch (kind) {
        case Expr::Kind::Add:
            return " + ";
        case Expr::Kind::Subtract:
            return " - ";
        case Expr::Kind::Multiply:
            return " * ";
        case Expr::Kind::Divide:
            return " / ";
        default:
            return " ^ ";
    }
}

}  // namespace

Expr Expr::number(double value) {
    return Expr(std::make_shared<const Node>(Node{Kind::Number, value, {}, {}}));
}

Expr Expr::leaf(Kind kind) {
    return Expr(std::make_shared<const Node>(Node{kind, 0.0, {}, {}}));
}

Expr Expr::unary(Kind kind, Expr operand) {
    return Expr(std::make_shared<const Node>(Node{kind, 0.0, {}, {std::move(operand)}}));
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs) {
    return Expr(std::make_shared<const Node>(Node{kind, 0.0, {}, {std::move(lhs), std::move(rhs)}}));
}

Expr Expr::call(std::string name, Expr argument) {
    return Expr(std::make_shared<const Node>(Node{Kind::Call, 0.0, std::move(name), {std::move(argument)}}));
}

double Expr::evaluate(double t, double mu) const {
    const Node& n = *node_;
    double r = 0.0;
    switch (n.kind) {
        case Kind::Number:
            return n.value;
        case Kind::Variable:
            return t;
        case Kind::Order:
            return mu;
        case Kind::Pi:
            return std::numbers::pi;
        case Kind::Negate:
            return -n.children[0].evaluate(t, mu);
        case Kind::Call:
            r = call_function(n.name, n.children[0].evaluate(t, mu));
            break;
        default: {
            const double a = n.children[0].evaluate(t, mu);
            const double b = n.children[1].evaluate(t, mu);
            switch (n.kind) {
                case Kind::Add:
                    r = a + b;
                    break;
                case Kind::Subtract:
                    r = a - b;
                    break;
                case Kind::Multiply:
                    r = a * b;
                    break;
                case Kind::Divide:
                    if (b == 0.0) {
                        throw EvaluationError("division by zero at t=" + std::to_string(t));
                    }
                    r = a / b;
                    break;
                default:
                    r = std::pow(a, b);
                    break;
            }
        }
    }
    if (!std::isfinite(r)) {
        throw EvaluationError("non-finite value in '" + print() + "' at t=" + std::to_string(t));
    }
    return r;
}

std::string Expr::print() const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::Number: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", n.value);
            return buf;
        }
        case Kind::Variable:
            return "t";
        case Kind::Order:
            return "mu";
        case Kind::Pi:
            return "pi";
        case Kind::Negate:
            return "(-" + n.children[0].print() + ")";
        case Kind::Call:
            return n.name + "(" + n.children[0].print() + ")";
        default:
            return "(" + n.children[0].print() + symbol(n.kind) + n.children[1].print() + ")";
    }
}

bool operator==(const Expr& a, const Expr& b) {
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.kind == y.kind && x.value == y.value && x.name == y.name && x.children == y.children;
}

Expr parse_expression(std::string_view source) {
    return Parser(source).parse();
}

RealFunction to_function(Expr expr, double mu) {
    return [expr = std::move(expr), mu](double t) { return expr.evaluate(t, mu); };
}

}  // namespace ftw
