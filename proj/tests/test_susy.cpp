#include <doctest.h>

#include <cmath>

#include "susyq/model_checks.hpp"
#include "susyq/models.hpp"
#include "susyq/susy.hpp"

using namespace susyq;

namespace {

double max_diff(const Expr& a, const Expr& b, const std::vector<double>& pts) {
    double e = 0;
    for (double x : pts) e = std::max(e, std::abs(a(x) - b(x)));
    return e;
}

const std::vector<double> pts = test_points(30, 4.0);

}  // namespace

TEST_CASE("build_pair: ordinary SUSY") {
    const SuperpotentialPair p = build_pair(parse("x"), parse("x"));
    CHECK(max_diff(p.q1, Expr(), pts) == 0.0);
    CHECK(max_diff(p.V1, parse("x^2 - 1"), pts) < 1e-13);
    CHECK(max_diff(p.V2, parse("x^2 + 1"), pts) < 1e-13);
    CHECK(max_diff(p.V1_adj, p.V1, pts) < 1e-13);
}

TEST_CASE("build_pair: pseudo-bosonic pair") {
    const Bindings k{{"k", -1.0}};
    const SuperpotentialPair p = build_pair(parse("k + exp(x)", k), parse("x - exp(x)"));
    CHECK(max_diff(p.q1, parse("x + 1 - 2*exp(x)"), pts) < 1e-12);
    CHECK(max_diff(p.V2 - p.V1, Expr::constant(1.0), pts) < 1e-10);
}

TEST_CASE("build_pair: wB = -wA gives V1 = V2") {
    const SuperpotentialPair p = build_pair(parse("sin(x) + 1i*x"), parse("-sin(x) - 1i*x"));
    CHECK(max_diff(p.V1, p.V2, pts) < 1e-12);
}

TEST_CASE("check_pair on random pairs") {
    const SuperpotentialPair p = build_pair(parse("0.3*x + 1i*tanh(x)"), parse("x - 0.2i*sin(x)"));
    const Report r = check_pair(p, pts);
    CHECK(r.all_pass());
}

TEST_CASE("adjoint pair swaps and conjugates") {
    const SuperpotentialPair p = build_pair(parse("x + 1i"), parse("2*x - 0.5i*exp(-x^2)"));
    const SuperpotentialPair a = adjoint_pair(p);
    CHECK(max_diff(a.V1, p.V1_adj, pts) < 1e-13);
    CHECK(max_diff(a.V2, p.V2_adj, pts) < 1e-13);
}

TEST_CASE("first-order appliers annihilate the pseudo-bosonic vacuum") {
    const Grid g;
    const ModelRecord m = pseudo_bosonic_model(-1.0);
    const SampledPair p(m.pair, g);
    const GridFunction phi0 = generate(m.phi1, 0, g);
    CHECK(interior_norm(apply_A(p, phi0)) < 1e-6 * norm(phi0));
    CHECK(interior_norm(apply_H1(p, phi0)) < 1e-6 * norm(phi0));
}

TEST_CASE("H1 dagger is H1 of the adjoint pair") {
    const Grid g(8.0, 1025);
    const SuperpotentialPair p = build_pair(parse("x + 0.4i*tanh(x)"), parse("1.5*x + 0.2*sin(x)"));
    const SampledPair sp(p, g), sa(adjoint_pair(p), g);
    for (const GridFunction& f : smooth_test_functions(g, 5, 11)) {
        CHECK(relative_residual(apply_H1_dag(sp, f), apply_H1(sa, f)) < 1e-12);
        CHECK(relative_residual(apply_H2_dag(sp, f), apply_H2(sa, f)) < 1e-12);
    }
}

TEST_CASE("composition, commutator and adjoint pairing on 100 smooth functions") {
    const Grid g(10.0, 2049);
    const SuperpotentialPair p = build_pair(parse("x - 0.5*tanh(x) + 0.3i*sin(x)"), parse("x + 0.5*tanh(x) + 0.2i"));
    const SampledPair sp(p, g);
    const auto fs = smooth_test_functions(g, 100, 5);
    double comp = 0, comm = 0, adj = 0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const GridFunction& f = fs[i];
        const GridFunction& h = fs[(i + 1) % fs.size()];
        comp = std::max(comp, relative_residual(apply_H1(sp, f), apply_B(sp, apply_A(sp, f))));
        comp = std::max(comp, relative_residual(apply_H2(sp, f), apply_A(sp, apply_B(sp, f))));
        const GridFunction c = apply_A(sp, apply_B(sp, f)) - apply_B(sp, apply_A(sp, f));
        comm = std::max(comm, interior_norm(c - (sp.dwA + sp.dwB) * f) / norm(f));
        const cplx lhs = inner(apply_A_dag(sp, h), f), rhs = inner(h, apply_A(sp, f));
        const cplx lhs_b = inner(apply_B_dag(sp, h), f), rhs_b = inner(h, apply_B(sp, f));
        adj = std::max({adj, std::abs(lhs - rhs) / std::abs(rhs), std::abs(lhs_b - rhs_b) / std::abs(rhs_b)});
    }
    CHECK(comp < 1e-5);
    CHECK(comm < 1e-6);
    CHECK(adj < 1e-8);
}

TEST_CASE("vacua of the harmonic pair") {
    const Grid g;
    const Vacua v = vacua(build_pair(parse("x"), parse("x")), g);
    CHECK(v.phi1.in_l2);
    CHECK_FALSE(v.phi2.in_l2);
    CHECK(v.psi1.in_l2);
    CHECK_FALSE(v.psi2.in_l2);
    CHECK(v.phi1.residual < 1e-6);
    CHECK(std::abs(v.phi1.exponent_left + 12 * 0.9) < 1.5);  // slope of -x^2/2 over the outer fifth
    CHECK(std::abs(norm(v.phi1.f) - 1.0) < 1e-10);
}

TEST_CASE("vacuum duality: conj(psi1) phi2 is constant") {
    const Grid g;
    const ModelRecord m = pseudo_bosonic_model(-1.0);
    Vacua v;
    const Report r = vacua_check(m.pair, g, m.vacuum_normalization, m.antiderivatives, &v);
    CHECK(r.all_pass());
    std::vector<double> ratio;
    for (std::size_t j = 100; j + 100 < g.size(); j += 50) {
        const double la = v.psi1.f.log_abs(j) + v.phi2.f.log_abs(j);
        ratio.push_back(la);
    }
    for (double x : ratio) CHECK(std::abs(x - ratio.front()) < 1e-8);
}

TEST_CASE("asymptotic exponents of a Gaussian and an exponential") {
    const Grid g;
    const ScaledFunction gauss(sample(parse("exp(-x^2/2)"), g));
    const auto [l, r] = asymptotic_exponents(gauss);
    CHECK(l < -5.0);
    CHECK(r < -5.0);
    const ScaledFunction e(sample(parse("exp(-0.5*x)"), g));
    const auto [l2, r2] = asymptotic_exponents(e);
    CHECK(std::abs(l2 - 0.5) < 1e-10);
    CHECK(std::abs(r2 + 0.5) < 1e-10);
}

TEST_CASE("intertwining on the harmonic oscillator") {
    const Grid g;
    const ModelRecord m = harmonic_model();
    const SampledPair p(m.pair, g);
    std::vector<EigenPair> s1, s2;
    for (std::size_t n = 0; n < 8; ++n) {
        s1.push_back({m.energy1(n), generate(m.phi1, n, g)});
        s2.push_back({m.energy2(n), generate(m.phi2, n, g)});
    }
    const IntertwineResult res = intertwine_check(p, s1, s2, 1e-5);
    CHECK(res.report.all_pass());
    for (const auto& row : res.rows) {
        if (row.skipped) continue;
        CHECK(row.product_error < 1e-5);
        CHECK(std::abs(row.alpha * row.beta - row.E) < 1e-5);
    }
}

TEST_CASE("intertwining reports non-proportional partners") {
    const Grid g;
    const ModelRecord m = harmonic_model();
    const SampledPair p(m.pair, g);
    std::vector<EigenPair> s1, s2;
    for (std::size_t n = 1; n < 4; ++n) {
        s1.push_back({m.energy1(n), generate(m.phi1, n, g)});
        // wrong partner: shifted index
        s2.push_back({m.energy1(n), generate(m.phi2, n, g)});
    }
    CHECK_FALSE(intertwine_check(p, s1, s2, 1e-5).report.all_pass());
}

TEST_CASE("superalgebra: nilpotency is structural") {
    const Grid g(6.0, 513);
    const SampledPair p(build_pair(parse("x"), parse("x")), g);
    const SuperalgebraOps ops = superalgebra_ops(p);
    CHECK((ops.QA * ops.QA).structurally_zero());
    CHECK((ops.QB * ops.QB).structurally_zero());
    CHECK_FALSE((ops.QA * ops.QB).structurally_zero());
}

TEST_CASE("superalgebra on harmonic doublets") {
    const Grid g;
    const ModelRecord m = harmonic_model();
    const SampledPair p(m.pair, g);
    const Report r = intertwining_check(m, p);
    CHECK(r.all_pass());
}
