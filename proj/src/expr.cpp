#include "susyq/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

namespace susyq {

ParseError::ParseError(Kind kind, std::size_t offset, const std::string& message)
    : ExprError(message + " at offset " + std::to_string(offset)), kind_(kind), offset_(offset) {}

namespace {

std::string x_message(const char* what, double x) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s at x = %.17g", what, x);
    return buf;
}

}  // namespace

PoleError::PoleError(double x) : ExprError(x_message("pole (division by zero)", x)), x_(x) {}
DomainError::DomainError(double x) : ExprError(x_message("ln of zero", x)), x_(x) {}

struct Expr::Node {
    NodeKind kind = NodeKind::constant;
    cplx value{};
    int power = 0;
    std::array<Expr, 2> children{Expr(nullptr), Expr(nullptr)};  // null for leaves
};

Expr::Expr() {
    static const std::shared_ptr<const Node> zero = std::make_shared<const Node>();
    node_ = zero;
}
Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(cplx value) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::constant;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::variable() {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::variable;
    return Expr(std::move(n));
}

Expr Expr::make(NodeKind kind, Expr a, Expr b, cplx value, int power) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->value = value;
    n->power = power;
    n->children = {std::move(a), std::move(b)};
    return Expr(std::move(n));
}

NodeKind Expr::kind() const noexcept { return node_->kind; }

cplx Expr::constant_value() const {
    if (kind() != NodeKind::constant) throw ExprError("constant_value() on a non-constant node");
    return node_->value;
}

int Expr::exponent() const {
    if (kind() != NodeKind::pow_int) throw ExprError("exponent() on a non-power node");
    return node_->power;
}

std::size_t Expr::arity() const noexcept {
    switch (kind()) {
        case NodeKind::constant:
        case NodeKind::variable:
            return 0;
        case NodeKind::add:
        case NodeKind::mul:
        case NodeKind::div:
            return 2;
        default:
            return 1;
    }
}

const Expr& Expr::child(std::size_t i) const {
    if (i >= arity()) throw ExprError("child index out of range");
    return node_->children[i];
}

bool Expr::is_constant(cplx value) const noexcept {
    return kind() == NodeKind::constant && node_->value == value;
}

std::size_t Expr::node_count() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < arity(); ++i) n += child(i).node_count();
    return n;
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr::constant(a.constant_value() + b.constant_value());
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    return Expr::make(NodeKind::add, a, b);
}

Expr operator-(const Expr& a) {
    if (a.is_constant()) return Expr::constant(-a.constant_value());
    if (a.kind() == NodeKind::neg) return a.child(0);
    return Expr::make(NodeKind::neg, a, Expr());
}

Expr operator-(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr::constant(a.constant_value() - b.constant_value());
    return a + (-b);
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr::constant(a.constant_value() * b.constant_value());
    if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    if (a.is_constant(-1.0)) return -b;
    if (b.is_constant(-1.0)) return -a;
    return Expr::make(NodeKind::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_constant(1.0)) return a;
    if (a.is_constant(0.0) && !b.is_constant(0.0)) return a;
    if (a.is_constant() && b.is_constant() && b.constant_value() != 0.0)
        return Expr::constant(a.constant_value() / b.constant_value());
    return Expr::make(NodeKind::div, a, b);
}

Expr pow(const Expr& base, int n) {
    if (n == 0) return Expr::constant(1.0);
    if (n == 1) return base;
    if (base.is_constant() && (n > 0 || base.constant_value() != 0.0))
        return Expr::constant(std::pow(base.constant_value(), n));
    return Expr::make(NodeKind::pow_int, base, Expr(), {}, n);
}

Expr exp(const Expr& a) {
    if (a.is_constant()) return Expr::constant(std::exp(a.constant_value()));
    return Expr::make(NodeKind::exp, a, Expr());
}

Expr sin(const Expr& a) {
    if (a.is_constant()) return Expr::constant(std::sin(a.constant_value()));
    return Expr::make(NodeKind::sin, a, Expr());
}

Expr cos(const Expr& a) {
    if (a.is_constant()) return Expr::constant(std::cos(a.constant_value()));
    return Expr::make(NodeKind::cos, a, Expr());
}

Expr tanh(const Expr& a) {
    if (a.is_constant()) return Expr::constant(std::tanh(a.constant_value()));
    return Expr::make(NodeKind::tanh, a, Expr());
}

namespace {

cplx log_abs(cplx u, double x) {
    if (u == 0.0) throw DomainError(x);
    if (u.imag() == 0.0) return std::log(std::abs(u.real()));
    return std::log(u);
}

}  // namespace

Expr ln(const Expr& a) {
    if (a.is_constant() && a.constant_value() != 0.0) return Expr::constant(log_abs(a.constant_value(), 0.0));
    return Expr::make(NodeKind::log_abs, a, Expr());
}

// ---------------------------------------------------------------------------
// evaluation

cplx eval(const Expr& e, double x) {
    switch (e.kind()) {
        case NodeKind::constant:
            return e.constant_value();
        case NodeKind::variable:
            return x;
        case NodeKind::add:
            return eval(e.child(0), x) + eval(e.child(1), x);
        case NodeKind::mul:
            return eval(e.child(0), x) * eval(e.child(1), x);
        case NodeKind::neg:
            return -eval(e.child(0), x);
        case NodeKind::div: {
            const cplx den = eval(e.child(1), x);
            if (den == 0.0) throw PoleError(x);
            return eval(e.child(0), x) / den;
        }
        case NodeKind::pow_int: {
            const cplx b = eval(e.child(0), x);
            const int n = e.exponent();
            if (n < 0 && b == 0.0) throw PoleError(x);
            return std::pow(b, n);
        }
        case NodeKind::exp:
            return std::exp(eval(e.child(0), x));
        case NodeKind::sin:
            return std::sin(eval(e.child(0), x));
        case NodeKind::cos:
            return std::cos(eval(e.child(0), x));
        case NodeKind::tanh:
            return std::tanh(eval(e.child(0), x));
        case NodeKind::log_abs:
            return log_abs(eval(e.child(0), x), x);
    }
    throw ExprError("corrupt expression node");
}

cplx Expr::operator()(double x) const { return eval(*this, x); }

// ---------------------------------------------------------------------------
// differentiation

Expr differentiate(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::constant:
            return Expr::constant(0.0);
        case NodeKind::variable:
            return Expr::constant(1.0);
        case NodeKind::add:
            return differentiate(e.child(0)) + differentiate(e.child(1));
        case NodeKind::mul: {
            const Expr& a = e.child(0);
            const Expr& b = e.child(1);
            return differentiate(a) * b + a * differentiate(b);
        }
        case NodeKind::neg:
            return -differentiate(e.child(0));
        case NodeKind::div: {
            const Expr& a = e.child(0);
            const Expr& b = e.child(1);
            return (differentiate(a) * b - a * differentiate(b)) / pow(b, 2);
        }
        case NodeKind::pow_int: {
            const Expr& a = e.child(0);
            const int n = e.exponent();
            return Expr::constant(static_cast<double>(n)) * pow(a, n - 1) * differentiate(a);
        }
        case NodeKind::exp:
            return e * differentiate(e.child(0));
        case NodeKind::sin:
            return cos(e.child(0)) * differentiate(e.child(0));
        case NodeKind::cos:
            return -(sin(e.child(0)) * differentiate(e.child(0)));
        case NodeKind::tanh:
            return (Expr::constant(1.0) - pow(e, 2)) * differentiate(e.child(0));
        case NodeKind::log_abs:
            return differentiate(e.child(0)) / e.child(0);
    }
    throw ExprError("corrupt expression node");
}

Expr conj(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::constant:
            return Expr::constant(std::conj(e.constant_value()));
        case NodeKind::variable:
            return e;
        case NodeKind::add:
            return conj(e.child(0)) + conj(e.child(1));
        case NodeKind::mul:
            return conj(e.child(0)) * conj(e.child(1));
        case NodeKind::neg:
            return -conj(e.child(0));
        case NodeKind::div:
            return conj(e.child(0)) / conj(e.child(1));
        case NodeKind::pow_int:
            return pow(conj(e.child(0)), e.exponent());
        case NodeKind::exp:
            return exp(conj(e.child(0)));
        case NodeKind::sin:
            return sin(conj(e.child(0)));
        case NodeKind::cos:
            return cos(conj(e.child(0)));
        case NodeKind::tanh:
            return tanh(conj(e.child(0)));
        case NodeKind::log_abs:
            return ln(conj(e.child(0)));
    }
    throw ExprError("corrupt expression node");
}

// ---------------------------------------------------------------------------
// printing

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_constant(cplx c) {
    const double re = c.real();
    const double im = c.imag();
    if (im == 0.0) return re < 0 || std::signbit(re) ? "(" + format_double(re) + ")" : format_double(re);
    const std::string imag = format_double(std::abs(im)) + "i";
    if (re == 0.0) return im < 0 ? "(-" + imag + ")" : imag;
    return "(" + format_double(re) + (im < 0 ? " - " : " + ") + imag + ")";
}

const char* function_name(NodeKind k) {
    switch (k) {
        case NodeKind::exp: return "exp";
        case NodeKind::sin: return "sin";
        case NodeKind::cos: return "cos";
        case NodeKind::tanh: return "tanh";
        case NodeKind::log_abs: return "ln";
        default: return nullptr;
    }
}

}  // namespace

std::string Expr::str() const {
    switch (kind()) {
        case NodeKind::constant:
            return format_constant(node_->value);
        case NodeKind::variable:
            return "x";
        case NodeKind::add:
            return "(" + child(0).str() + " + " + child(1).str() + ")";
        case NodeKind::mul:
            return "(" + child(0).str() + " * " + child(1).str() + ")";
        case NodeKind::div:
            return "(" + child(0).str() + " / " + child(1).str() + ")";
        case NodeKind::neg:
            return "(-" + child(0).str() + ")";
        case NodeKind::pow_int:
            return "(" + child(0).str() + "^" + std::to_string(node_->power) + ")";
        default:
            return std::string(function_name(kind())) + "(" + child(0).str() + ")";
    }
}

// ---------------------------------------------------------------------------
// parsing

namespace {

class Parser {
public:
    Parser(std::string_view text, const Bindings& bindings) : text_(text), bindings_(bindings) {}

    Expr run() {
        Expr e = expression();
        skip_space();
        if (pos_ != text_.size()) fail(ParseError::Kind::syntax, "unexpected character '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(ParseError::Kind kind, const std::string& msg) const { throw ParseError(kind, pos_, msg); }
    [[noreturn]] void fail_at(ParseError::Kind kind, std::size_t at, const std::string& msg) const {
        throw ParseError(kind, at, msg);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) fail(ParseError::Kind::syntax, std::string("expected '") + c + "' before end of input");
            fail(ParseError::Kind::syntax, std::string("expected '") + c + "'");
        }
    }

    Expr expression() {
        Expr e = term();
        for (;;) {
            if (accept('+'))
                e = e + term();
            else if (accept('-'))
                e = e - term();
            else
                return e;
        }
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            if (accept('*'))
                e = e * unary();
            else if (accept('/'))
                e = e / unary();
            else
                return e;
        }
    }

    Expr unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (!accept('^')) return base;
        return pow(base, integer_exponent());
    }

    int integer_exponent() {
        skip_space();
        const std::size_t start = pos_;
        const bool paren = accept('(');
        skip_space();
        bool negative = false;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
            negative = text_[pos_] == '-';
            ++pos_;
            skip_space();
        }
        const std::size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == digits) {
            if (pos_ < text_.size() && (text_[pos_] == '.' || std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
                                        text_[pos_] == '('))
                fail_at(ParseError::Kind::non_integer_exponent, start, "non-integer exponent");
            fail(ParseError::Kind::syntax, "expected integer exponent");
        }
        if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E' || text_[pos_] == 'i'))
            fail_at(ParseError::Kind::non_integer_exponent, start, "non-integer exponent");
        int value = 0;
        const auto [ptr, ec] = std::from_chars(text_.data() + digits, text_.data() + pos_, value);
        if (ec != std::errc() || ptr != text_.data() + pos_) fail_at(ParseError::Kind::syntax, digits, "exponent out of range");
        if (paren) {
            skip_space();
            if (pos_ < text_.size() && text_[pos_] != ')') fail_at(ParseError::Kind::non_integer_exponent, start, "non-integer exponent");
            expect(')');
        }
        return negative ? -value : value;
    }

    Expr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail(ParseError::Kind::syntax, "unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expression();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(ParseError::Kind::syntax, "unexpected character '" + std::string(1, c) + "'");
    }

    Expr number() {
        const std::size_t start = pos_;
        auto digit = [&](std::size_t p) { return p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p])); };
        while (digit(pos_)) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (digit(pos_)) ++pos_;
        }
        if (pos_ == start + 1 && text_[start] == '.') fail_at(ParseError::Kind::syntax, start, "malformed number");
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (digit(p)) {
                pos_ = p;
                while (digit(pos_)) ++pos_;
            }
        }
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc() || ptr != text_.data() + pos_) fail_at(ParseError::Kind::syntax, start, "malformed number");
        if (pos_ < text_.size() && text_[pos_] == 'i' &&
            !(pos_ + 1 < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])) || text_[pos_ + 1] == '_'))) {
            ++pos_;
            return Expr::constant(cplx(0.0, value));
        }
        return Expr::constant(value);
    }

    Expr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "x") return Expr::variable();

        using Fn = Expr (*)(const Expr&);
        static const std::pair<std::string_view, Fn> functions[] = {
            {"exp", &exp}, {"sin", &sin}, {"cos", &cos}, {"tanh", &tanh}, {"ln", &ln}};
        for (const auto& [fname, fn] : functions) {
            if (name == fname) {
                skip_space();
                if (pos_ >= text_.size() || text_[pos_] != '(')
                    fail(ParseError::Kind::syntax, "expected '(' after function name '" + std::string(name) + "'");
                ++pos_;
                Expr arg = expression();
                expect(')');
                return fn(arg);
            }
        }
        if (auto it = bindings_.find(name); it != bindings_.end()) return Expr::constant(it->second);
        fail_at(ParseError::Kind::unknown_identifier, start, "unknown identifier '" + std::string(name) + "'");
    }

    std::string_view text_;
    const Bindings& bindings_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const Bindings& bindings) { return Parser(text, bindings).run(); }

Bindings bindings_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ExprError("bindings must be a JSON object");
    Bindings out;
    for (const auto& [name, value] : j.items()) {
        if (value.is_number()) {
            out[name] = value.get<double>();
        } else if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number()) {
            out[name] = cplx(value[0].get<double>(), value[1].get<double>());
        } else {
            throw ExprError("binding '" + name + "' must be a number or [re, im]");
        }
    }
    return out;
}

}  // namespace susyq
