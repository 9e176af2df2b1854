#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace susyq {

using cplx = std::complex<double>;

class ExprError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by parse(). offset() is the byte offset into the source text.
class ParseError : public ExprError {
public:
    enum class Kind { syntax, unknown_identifier, non_integer_exponent };

    ParseError(Kind kind, std::size_t offset, const std::string& message);

    Kind kind() const noexcept { return kind_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    Kind kind_;
    std::size_t offset_;
};

/// Division by zero during evaluation.
class PoleError : public ExprError {
public:
    explicit PoleError(double x);
    double x() const noexcept { return x_; }

private:
    double x_;
};

/// ln() of zero during evaluation.
class DomainError : public ExprError {
public:
    explicit DomainError(double x);
    double x() const noexcept { return x_; }

private:
    double x_;
};

enum class NodeKind { constant, variable, add, mul, neg, div, pow_int, exp, sin, cos, tanh, log_abs };

/// Immutable expression tree in the real variable x with complex constants.
///
/// Nodes are shared, so copies are cheap and an Expr may be evaluated from
/// several threads at once. The factory functions fold constants and drop
/// additive zeros and multiplicative ones; nothing else is simplified.
class Expr {
public:
    Expr();  // the constant 0

    static Expr constant(cplx value);
    static Expr variable();

    NodeKind kind() const noexcept;
    cplx constant_value() const;  // only for NodeKind::constant
    int exponent() const;         // only for NodeKind::pow_int
    std::size_t arity() const noexcept;
    const Expr& child(std::size_t i) const;

    bool is_constant() const noexcept { return kind() == NodeKind::constant; }
    bool is_constant(cplx value) const noexcept;

    cplx operator()(double x) const;

    /// Fully parenthesised text accepted by parse() with the same value.
    std::string str() const;

    std::size_t node_count() const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node);
    static Expr make(NodeKind kind, Expr a, Expr b, cplx value = {}, int power = 0);

    friend Expr pow(const Expr& base, int n);
    friend Expr exp(const Expr& a);
    friend Expr sin(const Expr& a);
    friend Expr cos(const Expr& a);
    friend Expr tanh(const Expr& a);
    friend Expr ln(const Expr& a);

    std::shared_ptr<const Node> node_;
};

Expr pow(const Expr& base, int n);
Expr exp(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr tanh(const Expr& a);
/// log|a| for real a; the principal logarithm for non-real a.
Expr ln(const Expr& a);

inline Expr operator+(const Expr& a, cplx c) { return a + Expr::constant(c); }
inline Expr operator+(cplx c, const Expr& a) { return Expr::constant(c) + a; }
inline Expr operator-(const Expr& a, cplx c) { return a - Expr::constant(c); }
inline Expr operator-(cplx c, const Expr& a) { return Expr::constant(c) - a; }
inline Expr operator*(const Expr& a, cplx c) { return a * Expr::constant(c); }
inline Expr operator*(cplx c, const Expr& a) { return Expr::constant(c) * a; }
inline Expr operator/(const Expr& a, cplx c) { return a / Expr::constant(c); }
inline Expr operator/(cplx c, const Expr& a) { return Expr::constant(c) / a; }

/// Named parameters substituted at parse time.
using Bindings = std::map<std::string, cplx, std::less<>>;

/// Grammar (see docs/grammar.md):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' int)?
///   primary := number | 'x' | name | func '(' expr ')' | '(' expr ')'
Expr parse(std::string_view text, const Bindings& bindings = {});

/// Accepts {name: number | [re, im]}.
Bindings bindings_from_json(const nlohmann::json& j);

Expr differentiate(const Expr& e);
cplx eval(const Expr& e, double x);

/// Same expression with every constant conjugated. Since x is real this is
/// the pointwise complex conjugate of e.
Expr conj(const Expr& e);

}  // namespace susyq
