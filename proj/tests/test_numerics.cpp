#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "susyq/models.hpp"
#include "susyq/numerics.hpp"
#include "susyq/polynomial.hpp"

using namespace susyq;

TEST_CASE("grid geometry") {
    const Grid g;
    CHECK(g.size() == 4097);
    CHECK(g.x(0) == -12.0);
    CHECK(std::abs(g.x(g.size() - 1) - 12.0) < 1e-12);
    CHECK(g.x(2048) == 0.0);
    CHECK_THROWS_AS(Grid(0.0, 100), NumericsError);
    CHECK_THROWS_AS(Grid(1.0, 2), NumericsError);
}

TEST_CASE("sample: Gaussian norm and zero") {
    const Grid g;
    const GridFunction f = sample(parse("exp(-x^2/2)"), g);
    CHECK(std::abs(norm(f) * norm(f) - std::sqrt(M_PI)) < 1e-10);
    const GridFunction z = sample(Expr(), g);
    for (std::size_t j = 0; j < z.size(); ++j) CHECK(z[j] == cplx(0));
}

TEST_CASE("sample: pole on a grid point") {
    const ModelRecord m = black_scholes_model(0.0, 1.0);  // x0 = 0 is a grid point
    const Grid g;
    try {
        (void)sample(m.pair.V2, g);
        FAIL("expected a pole");
    } catch (const PoleOnGridError& e) {
        CHECK(e.index() == 2048);
        CHECK(e.x() == 0.0);
    }
}

TEST_CASE("derivative: polynomial exactness and fourth order") {
    const Grid g;
    const GridFunction d = derivative(sample(parse("x^2"), g));
    double err = 0;
    for (std::size_t j = 5; j + 5 < g.size(); ++j) err = std::max(err, std::abs(d[j] - 2 * g.x(j)));
    CHECK(err < 1e-8);

    const GridFunction c = derivative(sample(Expr::constant(4.0), g));
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(c[j]) < 1e-10);

    auto second_error = [](std::size_t n) {
        const Grid h(3.0, n);
        const GridFunction d2 = derivative(sample(parse("sin(x)"), h), 2);
        double e = 0;
        for (std::size_t j = 0; j < h.size(); ++j) e = std::max(e, std::abs(d2[j] + std::sin(h.x(j))));
        return e;
    };
    const double e1 = second_error(201), e2 = second_error(401);
    CHECK(e1 < 1e-5);
    CHECK(e1 / e2 > 10.0);  // 4th order interior, at least 3rd at the edges
}

TEST_CASE("inner: Hermite functions are orthonormal") {
    const Grid g;
    std::vector<GridFunction> h;
    for (int n = 0; n < 6; ++n) h.push_back(sample([n](double x) { return cplx(hermite_function(n, x)); }, g));
    for (int n = 0; n < 6; ++n)
        for (int m = 0; m < 6; ++m) CHECK(std::abs(inner(h[n], h[m]) - (n == m ? 1.0 : 0.0)) < 1e-10);
}

TEST_CASE("inner: positivity and Cauchy-Schwarz on random functions") {
    const Grid g(5.0, 301);
    std::mt19937 rng(3);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        GridFunction f(g), h(g);
        for (std::size_t j = 0; j < g.size(); ++j) {
            f[j] = {nd(rng), nd(rng)};
            h[j] = {nd(rng), nd(rng)};
        }
        const cplx ff = inner(f, f), hh = inner(h, h), fh = inner(f, h);
        CHECK(ff.real() >= 0.0);
        CHECK(std::abs(ff.imag()) < 1e-12 * ff.real());
        CHECK(std::norm(fh) <= ff.real() * hh.real() * (1 + 1e-12));
        CHECK(std::abs(inner(h, f) - std::conj(fh)) < 1e-12 * std::abs(fh) + 1e-14);
        CHECK(std::abs(inner(f, cplx(0, 2) * h) - cplx(0, 2) * fh) < 1e-12 * std::abs(fh) + 1e-14);
    }
}

TEST_CASE("inner: grid mismatch") {
    CHECK_THROWS_AS((void)inner(GridFunction(Grid(1.0, 33)), GridFunction(Grid(1.0, 35))), GridMismatchError);
}

TEST_CASE("pairing of the pseudo-bosonic vacua") {
    const Grid g;
    const ModelRecord m = pseudo_bosonic_model(-1.0);
    const ScaledFunction phi = m.phi1(0, g), psi = m.psi1(0, g);
    CHECK_FALSE(psi.representable());
    CHECK(std::abs(pairing(psi, phi) - 1.0) < 1e-8);
    CHECK(pairing_edge_ratio(psi, phi) < 1e-12);
}

TEST_CASE("scaled functions") {
    const Grid g(2.0, 17);
    std::vector<cplx> mant(17, 1.0), logs(17, 0.0);
    mant[1] = 2;
    mant[2] = 0;
    logs[1] = 1;
    logs[3] = 800;
    const ScaledFunction f(g, mant, logs);
    CHECK_FALSE(f.representable());
    CHECK_THROWS_AS((void)f.to_grid_function(), NumericsError);
    CHECK(f.log_abs(2) == -INFINITY);
    CHECK(std::abs(f.log_abs(1) - (1 + std::log(2.0))) < 1e-15);
    CHECK(f.max_log_abs() == 800.0);
    const GridFunction r = f.rescaled();
    CHECK(std::abs(r[3] - 1.0) < 1e-15);
    CHECK(std::abs(r[0]) < 1e-300);
}

TEST_CASE("halfline quadrature") {
    auto q = integrate_halfline([](double J) { return std::exp(-J); }, 1e-12);
    CHECK(std::abs(q.value - 1.0) < 1e-10);
    q = integrate_halfline([](double J) { return std::pow(J, 5) * std::exp(-J); }, 1e-12);
    CHECK(std::abs(q.value - 120.0) < 1e-8 * 120.0);
    q = integrate_halfline([](double J) { return J * J * J * 0.5 * std::exp(-J / 2); }, 1e-12);
    CHECK(std::abs(q.value - 48.0) < 1e-8 * 48.0);
    CHECK(q.panels > 0);
}

TEST_CASE("adaptive Simpson is exact on cubics") {
    const double v = integrate_adaptive([](double x) { return 4 * x * x * x - x + 2; }, -1.0, 2.0, 1e-14);
    CHECK(std::abs(v - (15.0 - 1.5 + 6.0)) < 1e-12);
}

TEST_CASE("gamma average") {
    CHECK(std::abs(gamma_average([](double) { return cplx(2, -1); }, 50.0) - cplx(2, -1)) < 1e-14);
    CHECK(std::abs(gamma_average([](double) { return cplx(1); }, 7.0) - 1.0) < 1e-14);
    for (double Gamma : {10.0, 40.0, 160.0}) {
        const double w = 1.3;
        const cplx a = gamma_average([w](double gm) { return std::exp(cplx(0, w * gm)); }, Gamma, 1 << 16);
        CHECK(std::abs(a) <= 2.0 / (Gamma * w));
        CHECK(std::abs(a - std::sin(w * Gamma) / (w * Gamma)) < 1e-10);
    }
}

TEST_CASE("series summation") {
    auto term = [](double J) {
        return [J](std::size_t n) { return cplx(std::pow(J, double(n)) / std::tgamma(double(n) + 1)); };
    };
    auto bound = [](double J) {
        return [J](std::size_t n) { return std::pow(J, double(n + 1)) / std::tgamma(double(n) + 2) * 2.0; };
    };
    const SeriesResult e = sum_series(term(1.0), bound(1.0), 1e-16);
    CHECK(std::abs(e.value - std::exp(1.0)) < 1e-12);
    const SeriesResult z = sum_series(term(0.0), bound(0.0), 1e-16);
    CHECK(z.value == cplx(1.0));
    CHECK(z.terms == 1);
    const SeriesResult two = sum_series(term(2.0), bound(2.0), 1e-16);
    CHECK(std::abs(two.value - std::exp(2.0)) < 1e-10);
}

TEST_CASE("CSV round trip keeps every digit") {
    const Grid g(3.0, 17);
    const GridFunction f = sample(parse("exp(x)/3 + 1i*sin(x)"), g);
    std::stringstream ss;
    write_csv(ss, f);
    const std::string text = ss.str();
    CHECK(text.rfind("# {", 0) == 0);
    const GridFunction back = read_csv(ss);
    CHECK(back.grid() == g);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(back[j] == f[j]);
}

TEST_CASE("eigenfunctions decay at the grid edges") {
    const Grid g;
    for (const char* name : {"harmonic", "deformed-harmonic", "swanson"}) {
        const ModelRecord m = make_model(name);
        // the rotated Gaussian of swanson decays like e^{-0.35 x^2}: n = 12 reaches 1.3e-12
        const std::size_t n_max = std::string(name) == "swanson" ? 11 : 12;
        for (std::size_t n = 0; n <= n_max; ++n) {
            const GridFunction phi = generate(m.phi1, n, g);
            CHECK(std::abs(phi[0]) < 1e-12);
            CHECK(std::abs(phi[g.size() - 1]) < 1e-12);
        }
    }
}

TEST_CASE("pseudo-bosonic pairings are negligible at the edges") {
    const Grid g;
    const ModelRecord m = pseudo_bosonic_model(-1.0);
    for (std::size_t n = 0; n <= 10; n += 2)
        for (std::size_t k = 0; k <= 10; k += 2) CHECK(pairing_edge_ratio(m.psi1(k, g), m.phi1(n, g)) < 1e-12);
}
