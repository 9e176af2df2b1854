#include <doctest.h>

#include <cmath>
#include <random>

#include "susyq/expr.hpp"
#include "susyq/models.hpp"

using namespace susyq;

namespace {

cplx central_difference(const Expr& e, double x, double h = 1e-4) {
    return (e(x + h) - e(x - h)) / (2 * h);
}

}  // namespace

TEST_CASE("parse: variable and constants") {
    CHECK(parse("x").kind() == NodeKind::variable);
    CHECK(parse("2.5").is_constant(2.5));
    CHECK(parse("1e-3")(0.0) == cplx(1e-3));
    CHECK(parse("2i").is_constant(cplx(0, 2)));
    CHECK(parse(".5")(0.0) == cplx(0.5));
}

TEST_CASE("parse: every production evaluates as expected") {
    const double x = 0.7;
    CHECK(std::abs(parse("x + 2*x - 3")(x) - (3 * x - 3)) < 1e-15);
    CHECK(std::abs(parse("x / 4")(x) - x / 4) < 1e-15);
    CHECK(std::abs(parse("-x")(x) + x) < 1e-15);
    CHECK(std::abs(parse("+x")(x) - x) < 1e-15);
    CHECK(std::abs(parse("x^3")(x) - x * x * x) < 1e-15);
    CHECK(std::abs(parse("x^-2")(x) - 1 / (x * x)) < 1e-14);
    CHECK(std::abs(parse("x^(2)")(x) - x * x) < 1e-15);
    CHECK(std::abs(parse("(x + 1) * (x - 1)")(x) - (x * x - 1)) < 1e-15);
    CHECK(std::abs(parse("exp(x)")(x) - std::exp(x)) < 1e-15);
    CHECK(std::abs(parse("sin(x)")(x) - std::sin(x)) < 1e-15);
    CHECK(std::abs(parse("cos(x)")(x) - std::cos(x)) < 1e-15);
    CHECK(std::abs(parse("tanh(x)")(x) - std::tanh(x)) < 1e-15);
    CHECK(std::abs(parse("ln(x)")(-x) - std::log(x)) < 1e-15);
    CHECK(std::abs(parse("0.5*tanh(x) + 1i*sin(x)")(x) - cplx(0.5 * std::tanh(x), std::sin(x))) < 1e-15);
}

TEST_CASE("parse: precedence and associativity") {
    CHECK(parse("2 + 3 * 4")(0.0) == cplx(14));
    CHECK(parse("8 / 4 / 2")(0.0) == cplx(1));
    CHECK(parse("2 - 3 - 4")(0.0) == cplx(-5));
    CHECK(parse("-x^2")(3.0) == cplx(-9));
}

TEST_CASE("parse: bindings are substituted") {
    const Expr e = parse("k + exp(x)", {{"k", -1.0}});
    CHECK(std::abs(e(0.0)) < 1e-15);
    CHECK(std::abs(e(1.0) - (std::exp(1.0) - 1.0)) < 1e-15);
}

TEST_CASE("parse: errors carry kind and offset") {
    auto kind_of = [](const char* text) {
        try {
            (void)parse(text);
        } catch (const ParseError& e) {
            return std::pair{e.kind(), e.offset()};
        }
        FAIL("no error for " << text);
        return std::pair{ParseError::Kind::syntax, std::size_t(0)};
    };
    CHECK(kind_of("x +") == std::pair{ParseError::Kind::syntax, std::size_t(3)});
    CHECK(kind_of("a*x") == std::pair{ParseError::Kind::unknown_identifier, std::size_t(0)});
    CHECK(kind_of("x^0.5") == std::pair{ParseError::Kind::non_integer_exponent, std::size_t(2)});
    CHECK(kind_of("x + y") == std::pair{ParseError::Kind::unknown_identifier, std::size_t(4)});
    CHECK(kind_of("x^2.5").first == ParseError::Kind::non_integer_exponent);
    CHECK(kind_of("x^k").first == ParseError::Kind::non_integer_exponent);
    CHECK(kind_of("exp x").first == ParseError::Kind::syntax);
    CHECK(kind_of("(x").first == ParseError::Kind::syntax);
    CHECK(kind_of("x)").first == ParseError::Kind::syntax);
}

TEST_CASE("differentiate: closed forms") {
    const Expr d = differentiate(parse("x - exp(x)"));
    for (double x : {-1.0, 0.0, 2.0}) CHECK(std::abs(d(x) - (1.0 - std::exp(x))) < 1e-14);
    CHECK(differentiate(Expr::constant(3.0)).is_constant(0.0));
    const Expr cube = differentiate(parse("x^3"));
    CHECK(std::abs(cube(2.0) - 12.0) < 1e-14);
    CHECK(std::abs(central_difference(parse("x^3"), 2.0) - 12.0) < 1e-7);
}

TEST_CASE("differentiate: agrees with central differences on registry expressions") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (const auto& name : model_names()) {
        const ModelRecord m = make_model(name);
        for (const Expr* e : {&m.pair.wA, &m.pair.wB, &m.pair.V1, &m.pair.V2}) {
            const Expr d = differentiate(*e);
            int tested = 0;
            while (tested < 50) {
                const double x = u(rng);
                try {
                    const cplx fd = central_difference(*e, x, 1e-5);
                    const cplx an = d(x);
                    CHECK(std::abs(fd - an) <= 1e-5 * (1.0 + std::abs(an)));
                    ++tested;
                } catch (const PoleError&) {
                }
            }
        }
    }
}

TEST_CASE("differentiate: second derivative against the analytic form") {
    const Expr e = parse("x*exp(-x^2) + tanh(x)*sin(x)");
    const Expr d2 = differentiate(differentiate(e));
    for (double x : {-1.3, -0.2, 0.4, 1.7}) {
        const double g = std::exp(-x * x);
        const double t = std::tanh(x), s = std::sin(x), c = std::cos(x);
        const double sech2 = 1 - t * t;
        const double exact = (4 * x * x * x - 6 * x) * g + (-2 * t * sech2) * s + 2 * sech2 * c - t * s;
        CHECK(std::abs(d2(x) - exact) < 1e-12);
    }
}

TEST_CASE("eval: poles and domain errors") {
    CHECK(parse("exp(x)")(0.0) == cplx(1.0));
    CHECK_THROWS_AS((void)parse("1/x")(0.0), PoleError);
    CHECK_THROWS_AS((void)parse("ln(x)")(0.0), DomainError);
}

TEST_CASE("eval: Black-Scholes wA limits") {
    // v -> -1/(r+1) on the right and v -> infinity on the left
    const ModelRecord m = black_scholes_model(1.0, 1.0);
    CHECK(std::abs(m.pair.wA(30.0) + 1.0) < 1e-6);
    CHECK(std::abs(m.pair.wA(-30.0) - 1.0) < 1e-6);
}

TEST_CASE("print then parse preserves values") {
    const char* sources[] = {"x", "-x^2 + 3.25*x - 1e-7", "exp(-(x - 0.5)^2) / (1 + x^2)",
                             "(0.3 + 2i)*tanh(x) - 1i*sin(x)*cos(x)", "ln(x^2 + 1) + 0.1^3", "1/3 + x/7"};
    for (const char* s : sources) {
        const Expr e = parse(s);
        const Expr back = parse(e.str());
        for (double x : {-2.0, -0.3, 0.0, 0.9, 3.1}) CHECK(std::abs(e(x) - back(x)) <= 1e-15 * (1 + std::abs(e(x))));
    }
}

TEST_CASE("conj conjugates pointwise") {
    const Expr e = parse("(1 + 2i)*x + 1i*exp(x)");
    for (double x : {-1.0, 0.5}) CHECK(std::abs(conj(e)(x) - std::conj(e(x))) < 1e-15);
}

TEST_CASE("bindings from JSON") {
    const Bindings b = bindings_from_json(nlohmann::json::parse(R"({"k": -1, "z": [0.5, 2]})"));
    CHECK(b.at("k") == cplx(-1));
    CHECK(b.at("z") == cplx(0.5, 2));
    CHECK_THROWS_AS((void)bindings_from_json(nlohmann::json::parse("[1]")), ExprError);
}

TEST_CASE("structure: arity and folding") {
    const Expr e = parse("x + 0");
    CHECK(e.kind() == NodeKind::variable);
    CHECK(parse("1*x").kind() == NodeKind::variable);
    CHECK(parse("2*3").is_constant(6.0));
    const Expr s = parse("sin(x)");
    CHECK(s.arity() == 1);
    CHECK(s.child(0).kind() == NodeKind::variable);
}
