#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "susyq/gk.hpp"
#include "susyq/models.hpp"

using namespace susyq;

namespace {

Spectrum linear(double c, std::size_t count = 2000) {
    return Spectrum::from_formula([c](std::size_t n) { return cplx(c * double(n)); }, count);
}

}  // namespace

TEST_CASE("spectrum bookkeeping") {
    const Spectrum s = linear(1.0);
    CHECK(s.log_abs_rho(0) == 0.0);
    CHECK(s.log_abs_rho(5) == doctest::Approx(std::log(120.0)));
    CHECK(s.R() == INFINITY);
    CHECK(s.multiplicity_one());
    CHECK(s.real());
    CHECK_THROWS_AS(Spectrum({0.0, 1.0, 0.0}), GKError);
}

TEST_CASE("theta accumulates without branch jumps") {
    // arg E_k = 3 for every k: the accumulated angle grows linearly past pi
    const cplx e = std::polar(1.0, 3.0);
    const Spectrum s({0.0, e, 2.0 * e, 3.0 * e});
    CHECK(s.theta(3) == doctest::Approx(9.0));
    const cplx r = s.sqrt_rho(3);
    CHECK(std::abs(r * r - e * 2.0 * e * 3.0 * e) < 1e-12);
}

TEST_CASE("degenerate spectrum is flagged") {
    const Spectrum s({0.0, 1.0, 1.0, 2.0});
    CHECK_FALSE(s.multiplicity_one());
}

TEST_CASE("bounded spectrum has a finite radius") {
    const Spectrum s = Spectrum::from_formula([](std::size_t n) { return cplx(2.0 * double(n) / double(n + 1)); });
    CHECK(s.R() == doctest::Approx(2.0).epsilon(1e-2));
    CHECK_THROWS_AS((void)normalization_K(s, 5.0), GKDomainError);
}

TEST_CASE("K(J) for n! is exp(-J/2)") {
    const Spectrum s = linear(1.0);
    CHECK(normalization_K(s, 0.0) == 1.0);
    for (double J : {0.5, 2.0, 7.5}) CHECK(std::abs(normalization_K(s, J) - std::exp(-J / 2)) < 1e-12);
    CHECK(std::abs(inverse_K_squared(s, 2.0).value - std::exp(2.0)) < 1e-10 * std::exp(2.0));
}

TEST_CASE("K is positive and decreasing") {
    const Spectrum s = Spectrum::from_formula([](std::size_t n) { return cplx(double(n * n) + double(n)); });
    double prev = 2.0;
    for (double J = 0.0; J < 20.0; J += 0.5) {
        const double K = normalization_K(s, J);
        CHECK(K > 0.0);
        CHECK(K < prev);
        prev = K;
    }
}

TEST_CASE("state at J = 0 is the ground state") {
    const Spectrum s = linear(1.0);
    const GKDomain dom = gk_domain(s);
    const GKState st = build_state(s, dom, Family::phi, 1, 0.0, 0.4);
    REQUIRE(st.coefficients.size() >= 1);
    CHECK(st.coefficients[0] == cplx(1.0));
    for (std::size_t n = 1; n < st.coefficients.size(); ++n) CHECK(st.coefficients[n] == cplx(0.0));
    CHECK(pair_norm(st, build_state(s, dom, Family::psi, 1, 0.0, 0.4)).coefficient == cplx(1.0));
}

TEST_CASE("coefficient pair norm is 1 on complex spectra") {
    // constant imaginary part beyond n = 0 keeps delta E = 0
    const Spectrum s = Spectrum::from_formula([](std::size_t n) { return n == 0 ? cplx(0) : cplx(2.0 * double(n), 0.3); });
    const GKDomain dom = gk_domain(s);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> uJ(0.0, 8.0), ug(-5.0, 5.0);
    for (int i = 0; i < 20; ++i) {
        const double J = uJ(rng), gm = ug(rng);
        const GKState phi = build_state(s, dom, Family::phi, 1, J, gm);
        const GKState psi = build_state(s, dom, Family::psi, 1, J, gm);
        CHECK(std::abs(pair_norm(phi, psi).coefficient - 1.0) < 1e-12);
    }
}

TEST_CASE("pair norm rejects mismatched parameters") {
    const Spectrum s = linear(1.0);
    const GKDomain dom = gk_domain(s);
    const GKState a = build_state(s, dom, Family::phi, 1, 1.0, 0.0);
    const GKState b = build_state(s, dom, Family::psi, 1, 2.0, 0.0);
    CHECK_THROWS_AS((void)pair_norm(a, b), GKError);
}

TEST_CASE("grid pair norm on the deformed harmonic model") {
    const Grid g;
    const ModelRecord m = deformed_harmonic_model();
    const Spectrum s = Spectrum::from_formula(m.energy1);
    const GKDomain dom = gk_domain(s);
    const GKState phi = build_state(s, dom, Family::phi, 1, 2.0, 1.3);
    const GKState psi = build_state(s, dom, Family::psi, 1, 2.0, 1.3);
    std::vector<GridFunction> pb, qb;
    for (std::size_t n = 0; n < std::max(phi.N, psi.N); ++n) {
        pb.push_back(generate(m.phi1, n, g));
        qb.push_back(generate(m.psi1, n, g));
    }
    const PairNorm pn = pair_norm(phi, psi, pb, qb);
    REQUIRE(pn.quadrature);
    CHECK(std::abs(*pn.quadrature - 1.0) < 1e-7);
    CHECK_THROWS_AS((void)realize(phi, std::vector<GridFunction>(pb.begin(), pb.begin() + 2)), GKError);
}

TEST_CASE("domain: delta E failure downgrades J_min") {
    const Spectrum s = Spectrum::from_formula([](std::size_t n) { return cplx(double(n), 0.5 * std::sqrt(double(n))); });
    const GKDomain dom = gk_domain(s);
    CHECK_FALSE(dom.delta_E_ok);
    CHECK(dom.J_min == 0.0);
    CHECK_THROWS_AS(dom.require(0.5), GKDomainError);
}

TEST_CASE("domain from growing norms") {
    const Spectrum s = Spectrum::from_formula([](std::size_t n) { return cplx(2.0 * double(n) / double(n + 1)); });
    std::vector<double> norms;
    for (int n = 0; n < 10; ++n) norms.push_back(1.5 * std::pow(1.2, n));
    const GKDomain dom = gk_domain(s, norms, norms);
    CHECK(dom.r_phi == doctest::Approx(1.2).epsilon(1e-6));
    CHECK(dom.A_phi == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(dom.J_min < s.R());
    CHECK_THROWS_AS(dom.require(dom.J_min), GKDomainError);
    CHECK_NOTHROW(dom.require(0.5 * dom.J_min));
}

TEST_CASE("evolution shifts gamma") {
    const Spectrum s = Spectrum::from_formula([](std::size_t n) { return n == 0 ? cplx(0) : cplx(double(n), 0.5); });
    const GKDomain dom = gk_domain(s);
    for (Family f : {Family::phi, Family::psi}) {
        const GKState st = build_state(s, dom, f, 1, 1.5, 0.2);
        const EvolveResult zero = evolve(st, s, 0.0);
        for (std::size_t n = 0; n < st.N; ++n) CHECK(std::abs(zero.state.coefficients[n] - st.coefficients[n]) < 1e-15);
        const EvolveResult a = evolve(evolve(st, s, 0.7).state, s, 1.1);
        const EvolveResult b = evolve(st, s, 1.8);
        CHECK(a.mismatch < 1e-12);
        for (std::size_t n = 0; n < st.N; ++n) CHECK(std::abs(a.state.coefficients[n] - b.state.coefficients[n]) < 1e-12);
    }
}

TEST_CASE("action identity") {
    for (double c : {1.0, 2.0}) {
        const Spectrum s = linear(c);
        const GKDomain dom = gk_domain(s);
        for (double J : {0.0, 0.3, 4.0}) {
            const ActionResult r =
                action_identity(build_state(s, dom, Family::phi, 1, J, 0.9), build_state(s, dom, Family::psi, 1, J, 0.9), s);
            CHECK(std::abs(r.coefficient - J) < 1e-8 * std::max(1.0, J));
        }
    }
    const Spectrum shifted = Spectrum::from_formula([](std::size_t n) { return cplx(double(n) + 1.0); });
    const GKDomain dom = gk_domain(shifted);
    CHECK_THROWS_AS((void)action_identity(build_state(shifted, dom, Family::phi, 1, 1.0, 0.0),
                                          build_state(shifted, dom, Family::psi, 1, 1.0, 0.0), shifted),
                    GKError);
}

TEST_CASE("moment registry") {
    std::string diag;
    const auto d1 = moment_density(linear(1.0), &diag);
    REQUIRE(d1);
    CHECK(d1->rho(0.0) == doctest::Approx(1.0));
    CHECK(verify_moments(*d1, linear(1.0)).all_pass());
    const auto d2 = moment_density(linear(2.0));
    REQUIRE(d2);
    CHECK(d2->rho(1.0) == doctest::Approx(0.5 * std::exp(-0.5)));
    CHECK(verify_moments(*d2, linear(2.0)).all_pass());
    // oracle: n-th moment of (1/c) e^{-J/c} is c^n n!
    for (int n = 0; n <= 6; ++n) {
        const auto q = integrate_halfline([&](double J) { return std::pow(J, n) * d2->rho(J); }, 1e-12);
        CHECK(q.value == doctest::Approx(std::pow(2.0, n) * std::tgamma(n + 1.0)).epsilon(1e-8));
    }
    const Spectrum bounded = Spectrum::from_formula([](std::size_t n) { return cplx(double(n) / double(n + 1)); });
    CHECK_FALSE(moment_density(bounded, &diag));
    CHECK_FALSE(diag.empty());
}

TEST_CASE("resolution estimate: orthogonal directions tend to zero") {
    const Grid g;
    const ModelRecord m = deformed_harmonic_model();
    const Spectrum s = Spectrum::from_formula(m.energy1);
    std::vector<GridFunction> pb, qb;
    for (std::size_t n = 0; n < 12; ++n) {
        pb.push_back(generate(m.phi1, n, g));
        qb.push_back(generate(m.psi1, n, g));
    }
    const auto density = moment_density(s);
    REQUIRE(density);
    const ResolutionTrace t =
        resolution_estimate(qb[1], pb[2], pb, qb, s, *density, {{25.0, 80.0, 12}, {100.0, 80.0, 12}, {400.0, 80.0, 12}});
    REQUIRE(t.points.size() == 3);
    CHECK(std::abs(t.points[0].target) < 1e-10);
    // cross term between n = 1 and n = 2 decays like 1/(Gamma |E_1 - E_2|)
    for (const auto& p : t.points) CHECK(p.error <= 2.0 / (p.Gamma * 2.0) * 10.0);
    CHECK(t.points[2].error < t.points[0].error);
}

TEST_CASE("resolution estimate: ground state") {
    const Grid g;
    const ModelRecord m = deformed_harmonic_model();
    const Spectrum s = Spectrum::from_formula(m.energy1);
    std::vector<GridFunction> pb, qb;
    for (std::size_t n = 0; n < 12; ++n) {
        pb.push_back(generate(m.phi1, n, g));
        qb.push_back(generate(m.psi1, n, g));
    }
    const auto density = moment_density(s);
    REQUIRE(density);
    const ResolutionTrace t = resolution_estimate(pb[0], pb[0], pb, qb, s, *density, {{200.0, 80.0, 12}});
    CHECK(t.points[0].error / std::abs(t.points[0].target) < 0.02);
    std::ostringstream os;
    write_trace_csv(os, t);
    CHECK(os.str().rfind("Gamma,J_max,N,", 0) == 0);
}

TEST_CASE("lowering operator") {
    const Spectrum s = linear(1.0);
    const CMatrix a = lowering_action(s, 0.5, Family::phi, 8);
    for (std::size_t i = 0; i < 8; ++i) CHECK(a(i, 0) == cplx(0.0));
    CMatrix p = a;
    for (int k = 1; k < 8; ++k) p = p * a;
    CHECK(p.max_abs() == 0.0);
    const GKDomain dom = gk_domain(s);
    for (double gm : {0.0, 1.0, M_PI}) {
        const GKState st = build_state(s, dom, Family::phi, 1, 1.0, gm);
        CHECK(lowering_eigen_residual(s, st) < 1e-8);
    }
}

TEST_CASE("K curve CSV") {
    std::ostringstream os;
    write_K_curve_csv(os, linear(1.0), 10.0, 11);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "J,K");
    int rows = 0;
    while (std::getline(is, line)) {
        const auto comma = line.find(',');
        const double J = std::stod(line.substr(0, comma)), K = std::stod(line.substr(comma + 1));
        CHECK(std::abs(K - std::exp(-J / 2)) < 1e-10);
        ++rows;
    }
    CHECK(rows == 11);
}

TEST_CASE("special intertwining maps") {
    const Spectrum s = linear(1.0);
    SpecialMapsInput in;
    for (std::size_t n = 0; n < 40; ++n) {
        in.alpha.push_back(s.E(n));
        in.beta.push_back(1.0);
    }
    CHECK(pb_special_maps(s, in).all_pass());
    in.J = 0.0;
    CHECK(pb_special_maps(s, in).all_pass());
}
