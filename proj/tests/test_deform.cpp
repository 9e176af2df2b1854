#include <doctest.h>

#include <cmath>

#include "susyq/deform.hpp"
#include "susyq/model_checks.hpp"
#include "susyq/models.hpp"
#include "susyq/polynomial.hpp"

using namespace susyq;

namespace {

std::vector<GridFunction> hermite_basis(const Grid& g, int count) {
    std::vector<GridFunction> out;
    for (int n = 0; n < count; ++n) out.push_back(sample([n](double x) { return cplx(hermite_function(n, x)); }, g));
    return out;
}

Deformation standard(const Grid& g) {
    return make_deformation(parse("0.5*tanh(x) + 0.6 + 0.3i*sin(x)"), parse("x"), g);
}

}  // namespace

TEST_CASE("constant q recovers ordinary SUSY") {
    const Grid g;
    const Deformation d = make_deformation(Expr::constant(0.7), parse("x"), g);
    const SuperpotentialPair p = deformed_pair(d);
    for (double x : test_points(20, 5.0)) {
        CHECK(std::abs(p.wA(x) - x) < 1e-15);
        CHECK(std::abs(p.wB(x) - x) < 1e-15);
    }
    CHECK(d.m == doctest::Approx(0.7));
    CHECK(d.M == doctest::Approx(0.7));
}

TEST_CASE("bounds of Re q are found by grid scan") {
    const Grid g;
    const Deformation d = standard(g);
    CHECK(d.m == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(d.M == doctest::Approx(1.1).epsilon(1e-6));
    CHECK(d.bound_at_edge);  // tanh saturates only as |x| -> infinity
    CHECK_FALSE(d.certification.empty());
}

TEST_CASE("non-positive real part is rejected") {
    const Grid g;
    CHECK_THROWS_AS((void)make_deformation(parse("tanh(x)"), parse("x"), g), DeformError);
    CHECK_THROWS_AS((void)make_deformation(parse("0.4 + 0.5*tanh(x)"), parse("x"), g), DeformError);
}

TEST_CASE("deformation from JSON") {
    const Grid g;
    const auto j = nlohmann::json::parse(R"({"q": "a*tanh(x) + c", "w": "x", "bindings": {"a": 0.2, "c": 1}})");
    const Deformation d = deformation_from_json(j, g);
    CHECK(d.m == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("deformed potentials match their closed forms") {
    const Grid g;
    const Deformation d = standard(g);
    CHECK(deformed_potential_check(d, test_points(40, 6.0)).all_pass());
}

TEST_CASE("deformed basis: pairing is the base orthonormality") {
    const Grid g;
    const Deformation d = standard(g);
    const DeformedBasis b = deformed_basis(d, hermite_basis(g, 9));
    const Report r = deformed_basis_check(d, b);
    CHECK(r.all_pass());
    for (std::size_t n = 0; n < 9; ++n)
        for (std::size_t m = 0; m < 9; ++m) CHECK(std::abs(inner(b.psi[n], b.phi[m]) - (n == m ? 1.0 : 0.0)) < 1e-8);
    for (std::size_t n = 0; n < 9; ++n) {
        CHECK(norm(b.phi[n]) <= std::exp(d.M) * (1 + 1e-10));
        CHECK(norm(b.psi[n]) <= std::exp(-d.m) * (1 + 1e-10));
    }
}

TEST_CASE("non-orthonormal base is rejected") {
    const Grid g;
    const Deformation d = standard(g);
    auto base = hermite_basis(g, 3);
    base[1] = base[1] * cplx(1.1);
    CHECK_THROWS_AS((void)deformed_basis(d, base), DeformError);
}

TEST_CASE("deformed eigenfunctions and the sandwich identity") {
    const Grid g;
    const Deformation d = standard(g);
    const auto base = hermite_basis(g, 9);
    // h1 = -d^2 + x^2 - 1 and h2 = -d^2 + x^2 + 1 share the Hermite functions
    DeformedSector s1{{}, deformed_basis(d, base)}, s2{{}, deformed_basis(d, base)};
    for (int n = 0; n < 9; ++n) {
        s1.E.push_back(2.0 * n);
        s2.E.push_back(2.0 * n + 2.0);
    }
    CHECK(deformed_eigencheck(d, s1, s2).all_pass());
    CHECK(sandwich_residual(d, smooth_test_functions(g, 10, 21)) < 1e-5);
}

TEST_CASE("intertwining coefficients are sqrt(E_n) up to phase") {
    const Grid g;
    const ModelRecord m = deformed_harmonic_model();
    const SampledPair p(m.pair, g);
    std::vector<EigenPair> s1, s2;
    for (std::size_t n = 0; n < 8; ++n) {
        s1.push_back({m.energy1(n), generate(m.phi1, n, g)});
        s2.push_back({m.energy2(n), generate(m.phi2, n, g)});
    }
    const IntertwineResult r = intertwine_check(p, s1, s2, 1e-5);
    CHECK(r.report.all_pass());
    for (const auto& row : r.rows) {
        if (row.skipped) continue;
        CHECK(std::abs(std::abs(row.alpha) - std::sqrt(row.E.real())) < 1e-5);
        CHECK(std::abs(std::abs(row.beta) - std::sqrt(row.E.real())) < 1e-5);
    }
}
