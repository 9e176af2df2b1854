#include "susyq/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "susyq/deform.hpp"

namespace susyq {

namespace {

constexpr double pi = std::numbers::pi;
const Expr X = Expr::variable();

Expr c(cplx v) { return Expr::constant(v); }

FamilyGenerator from_function(std::function<cplx(std::size_t, double)> f) {
    return [f = std::move(f)](std::size_t n, const Grid& g) {
        return ScaledFunction(sample([&](double x) { return f(n, x); }, g));
    };
}

/// mantissa(n, x) * exp(log_scale(x))
FamilyGenerator scaled(std::function<cplx(std::size_t, double)> mantissa, std::function<cplx(double)> log_scale) {
    return [m = std::move(mantissa), l = std::move(log_scale)](std::size_t n, const Grid& g) {
        std::vector<cplx> mv(g.size()), lv(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) {
            mv[j] = m(n, g.x(j));
            lv[j] = l(g.x(j));
        }
        return ScaledFunction(g, std::move(mv), std::move(lv));
    };
}

double get_real(const Bindings& b, const std::string& name) {
    const cplx v = b.at(name);
    if (v.imag() != 0.0) throw ModelError("parameter " + name + " must be real");
    return v.real();
}

}  // namespace

GridFunction generate(const FamilyGenerator& gen, std::size_t n, const Grid& g) {
    return gen(n, g).to_grid_function();
}

// ---------------------------------------------------------------------------
// registry

std::vector<std::string> model_names() {
    return {"harmonic", "deformed-harmonic", "swanson", "black-scholes", "pseudo-bosonic"};
}

std::vector<ModelParameter> model_parameters(const std::string& name) {
    if (name == "harmonic") return {};
    if (name == "deformed-harmonic")
        return {{"a", "amplitude of tanh(x) in q", 0.5, false},
                {"c", "constant part of q (needs c > |a|)", 0.6, false},
                {"b", "amplitude of i sin(x) in q", 0.3, false}};
    if (name == "swanson")
        return {{"theta", "angle in (-pi/4, pi/4), nonzero", pi / 8, false},
                {"printed_norm", "1 selects N1 conj(N2) = e^{-i theta}/sqrt(pi) instead of e^{i theta}/sqrt(pi)", 0.0,
                 false}};
    if (name == "black-scholes") return {{"r", "interest rate", 1.0, false}, {"v0", "integration constant > 0", 1.0, false}};
    if (name == "pseudo-bosonic") return {{"k", "real shift in wA = k + e^x", -1.0, false}};
    throw ModelError("unknown model '" + name + "'");
}

nlohmann::json model_schema(const std::string& name) {
    nlohmann::json j;
    j["name"] = name;
    auto& ps = j["parameters"] = nlohmann::json::array();
    for (const auto& p : model_parameters(name)) {
        nlohmann::json d = p.default_value.imag() == 0.0 ? nlohmann::json(p.default_value.real())
                                                         : nlohmann::json{p.default_value.real(), p.default_value.imag()};
        ps.push_back({{"name", p.name}, {"description", p.description}, {"default", d}, {"complex", p.complex_allowed}});
    }
    return j;
}

ModelRecord make_model(const std::string& name, const Bindings& bindings) {
    const auto params = model_parameters(name);
    Bindings b;
    for (const auto& p : params) b[p.name] = p.default_value;
    for (const auto& [k, v] : bindings) {
        if (std::none_of(params.begin(), params.end(), [&](const ModelParameter& p) { return p.name == k; }))
            throw ModelError("model '" + name + "' has no parameter '" + k + "'");
        b[k] = v;
    }
    ModelRecord m;
    if (name == "harmonic")
        m = harmonic_model();
    else if (name == "deformed-harmonic")
        m = deformed_harmonic_model(get_real(b, "a"), get_real(b, "c"), get_real(b, "b"));
    else if (name == "swanson")
        m = swanson_model(get_real(b, "theta"), get_real(b, "printed_norm") != 0.0 ? SwansonNormalization::as_printed
                                                                               : SwansonNormalization::pairing);
    else if (name == "black-scholes")
        m = black_scholes_model(get_real(b, "r"), get_real(b, "v0"));
    else
        m = pseudo_bosonic_model(get_real(b, "k"));
    m.parameters = b;
    return m;
}

// ---------------------------------------------------------------------------
// harmonic and deformed harmonic

ModelRecord harmonic_model() {
    ModelRecord m;
    m.name = "harmonic";
    m.pair = build_pair(X, X);
    m.energy1 = [](std::size_t n) { return cplx(2.0 * n); };
    m.energy2 = [](std::size_t n) { return cplx(2.0 * n + 2.0); };
    auto h = from_function([](std::size_t n, double x) { return cplx(hermite_function(int(n), x)); });
    m.phi1 = m.psi1 = m.phi2 = m.psi2 = h;
    m.biorthogonality_tol = 1e-10;
    return m;
}

ModelRecord deformed_harmonic_model(double a, double c0, double b) {
    if (!(c0 - std::abs(a) > 0.0)) throw ModelError("deformed-harmonic needs c > |a| so that Re q > 0");
    ModelRecord m;
    m.name = "deformed-harmonic";
    const Expr q = c(a) * tanh(X) + c(c0) + c(cplx{0, b}) * sin(X);
    const Expr dq = differentiate(q);
    m.pair = build_pair(X - dq, X + dq);
    m.energy1 = [](std::size_t n) { return cplx(2.0 * n); };
    m.energy2 = [](std::size_t n) { return cplx(2.0 * n + 2.0); };
    m.phi1 = m.phi2 = from_function([q](std::size_t n, double x) { return std::exp(q(x)) * hermite_function(int(n), x); });
    m.psi1 = m.psi2 =
        from_function([q](std::size_t n, double x) { return std::exp(-std::conj(q(x))) * hermite_function(int(n), x); });
    m.deformation = std::pair{q, X};
    m.biorthogonality_tol = 1e-8;
    m.eigen_count = 10;
    m.notes.push_back("q = " + q.str() + ", base w = x with Hermite eigenfunctions");
    return m;
}

// ---------------------------------------------------------------------------
// Swanson

GridFunction apply_swanson_hamiltonian(double theta, const GridFunction& f) {
    const cplx e2 = std::polar(1.0, 2 * theta);
    GridFunction x2 = sample([](double x) { return cplx(x * x); }, f.grid());
    return (1.0 / (2.0 * std::cos(2 * theta))) * (e2 * (x2 * f) - std::conj(e2) * derivative(f, 2));
}

ModelRecord swanson_model(double theta, SwansonNormalization norm) {
    if (!(std::abs(theta) < pi / 4) || theta == 0.0)
        throw ModelError("swanson needs theta in (-pi/4, pi/4) without 0, got " + format_number(theta));
    ModelRecord m;
    m.name = "swanson";
    const cplx e1 = std::polar(1.0, theta), e2 = std::polar(1.0, 2 * theta);
    m.pair = build_pair(c(e2) * X, c(e2) * X);
    m.energy1 = [e2](std::size_t n) { return 2.0 * double(n) * e2; };
    m.energy2 = [e2](std::size_t n) { return (2.0 * double(n) + 2.0) * e2; };
    m.gk_energy1 = [theta](std::size_t n) { return cplx((n + 0.5) / std::cos(2 * theta)); };
    m.sector2_shifted = true;

    const double quarter = std::pow(pi, -0.25);
    const cplx N1 = (norm == SwansonNormalization::pairing ? e1 : std::conj(e1)) * quarter;
    const cplx N2 = quarter;
    m.phi1 = m.phi2 = scaled([=](std::size_t n, double x) { return N1 * hermite_scaled(int(n), e1 * x); },
                             [=](double x) { return -0.5 * e2 * x * x; });
    m.psi1 = m.psi2 = scaled([=](std::size_t n, double x) { return N2 * hermite_scaled(int(n), std::conj(e1) * x); },
                             [=](double x) { return -0.5 * std::conj(e2) * x * x; });
    m.extra_hamiltonian = [theta](const GridFunction& f) { return apply_swanson_hamiltonian(theta, f); };
    m.extra_hamiltonian_dag = [theta](const GridFunction& f) { return apply_swanson_hamiltonian(-theta, f); };
    m.extra_hamiltonian_name = "H_theta";
    m.biorthogonality_tol = 1e-6;
    m.eigen_count = 7;
    m.notes.push_back(norm == SwansonNormalization::pairing
                          ? "N1 conj(N2) = e^{i theta}/sqrt(pi), the value for which <Psi_n, phi_m> = delta"
                          : "N1 conj(N2) = e^{-i theta}/sqrt(pi) as printed; <Psi_n, phi_n> then equals e^{-2i theta}");
    m.notes.push_back("factorized form wA = wB = e^{2i theta} x: BA = 2 cos(2 theta) e^{2i theta} H_theta - e^{2i theta}");
    return m;
}

// ---------------------------------------------------------------------------
// Black-Scholes

std::optional<double> black_scholes_pole(double r, double v0) {
    if (r == -1.0) return v0;
    if (r > -1.0) return std::log((r + 1.0) * v0) / (r + 1.0);
    return std::nullopt;
}

ModelRecord black_scholes_model(double r, double v0) {
    if (!(v0 > 0.0)) throw ModelError("black-scholes needs v0 > 0");
    ModelRecord m;
    m.name = "black-scholes";
    Expr v;
    Antiderivatives ad;
    if (r == -1.0) {
        v = c(v0) - X;
        ad.int_wA = -X - ln(X - c(v0));
        ad.int_wB = X - ln(X - c(v0));
    } else {
        const double s = r + 1.0;
        v = c(v0) * exp(c(-s) * X) - c(1.0 / s);
        const Expr inside = exp(c(s) * X) - c(v0 * s);
        ad.int_wA = c(r) * X - ln(inside);
        ad.int_wB = X - ln(inside);
    }
    m.pair = build_pair(c(r) + c(1.0) / v, c(1.0) + c(1.0) / v);
    if (auto x0 = black_scholes_pole(r, v0)) ad.singular_points.push_back(*x0);
    m.antiderivatives = ad;
    m.vacuum_normalization = Normalization::raw;
    m.notes.push_back("sigma^2 = 2; H1 = -d^2 + (1 - r) d + r");
    return m;
}

VacuumFlags bs_classification(double r) {
    if (r > 0.0) return {false, true, false, true};
    return {};
}

std::string VacuumFlags::str() const {
    const auto b = [](bool v) { return v ? 'T' : 'F'; };
    return std::string("(") + b(phi1) + "," + b(phi2) + "," + b(psi1) + "," + b(psi2) + ")";
}

BsClassificationRow bs_classify(double r, double v0, const Grid& g) {
    BsClassificationRow row;
    row.r = r;
    row.analytic = bs_classification(r);
    const ModelRecord m = black_scholes_model(r, v0);
    const Vacua vac = vacua(m.pair, g, Normalization::raw, m.antiderivatives);
    row.numeric = {vac.phi1.in_l2, vac.phi2.in_l2, vac.psi1.in_l2, vac.psi2.in_l2};
    row.agree = row.analytic == row.numeric;
    row.notes = vac.notes;
    return row;
}

// ---------------------------------------------------------------------------
// pseudo-bosonic

ModelRecord pseudo_bosonic_variant(double k, const Expr& s, const Expr& S, const std::string& label) {
    ModelRecord m;
    m.name = label;
    m.pair = build_pair(c(k) + s, X - s);
    m.antiderivatives = Antiderivatives{c(k) * X + S, c(0.5) * X * X - S, {}};
    m.energy1 = [](std::size_t n) { return cplx(double(n)); };
    m.energy2 = [](std::size_t n) { return cplx(double(n) + 1.0); };
    m.sector2_shifted = true;

    // N_phi N_psi = (2π e^{k²})^{-1/2}, split evenly
    const double N = std::pow(2.0 * pi * std::exp(k * k), -0.25);
    std::vector<Polynomial> polys;
    for (std::size_t n = 0; n <= 16; ++n) polys.push_back(pb_polynomial(n, k));
    const auto p = [polys, k](std::size_t n, double x) {
        return cplx(n < polys.size() ? polys[n](x) : pb_polynomial(n, k)(x));
    };
    m.phi1 = m.phi2 = scaled([p, N](std::size_t n, double x) { return N * p(n, x); },
                             [k, S](double x) { return -k * x - S(x); });
    m.psi1 = m.psi2 = scaled([p, N](std::size_t n, double x) { return N * p(n, x); },
                             [S](double x) { return -0.5 * x * x + std::conj(S(x)); });
    m.biorthogonality_tol = 1e-7;
    m.eigen_count = 11;
    return m;
}

ModelRecord pseudo_bosonic_variant(double k, const Expr& s, const std::string& label) {
    if (s.str() == exp(X).str()) return pseudo_bosonic_variant(k, s, exp(X), label);
    if (s.str() == sin(X).str()) return pseudo_bosonic_variant(k, s, -cos(X), label);
    throw ModelError("no antiderivative registered for s(x) = " + s.str());
}

ModelRecord pseudo_bosonic_model(double k) {
    ModelRecord m = pseudo_bosonic_variant(k, exp(X), exp(X), "pseudo-bosonic");
    m.notes.push_back("E_n = n for H1 and n + 1 for H2 = H1 + 1; sector-2 eigenfunctions coincide with sector 1");
    return m;
}

Report pb_identities(double k, std::size_t n_max, const Grid& g) {
    Report r("pseudo-bosonic identities");
    const auto pts = test_points(20, 5.0, 2024);

    double fact = 1.0;
    double rod = 0.0, top = 0.0, top_p = 0.0, herm = 0.0, printed = 0.0, printed_n1 = 0.0;
    bool monic_exact = true;
    for (std::size_t m = 0; m <= n_max; ++m) {
        if (m > 0) fact *= double(m);
        const Polynomial p = pb_polynomial(m, k);
        const Polynomial P = gaussian_derivative_factor(m, k);
        const double sign = m % 2 == 0 ? 1.0 : -1.0;
        for (double x : pts) {
            const double lhs = sign * std::sqrt(fact) * p(x);
            rod = std::max(rod, std::abs(lhs - P(x)) / std::max(P.magnitude(x), 1e-300));

            const double z = (x + k) / std::sqrt(2.0);
            const double H = hermite(int(m), z);
            const double derived = H / (std::pow(2.0, 0.5 * m) * std::sqrt(fact));
            const double as_printed = H / (std::pow(2.0, double(m)) * fact);
            const double scale = std::max(p.magnitude(x), 1e-300);
            herm = std::max(herm, std::abs(derived - p(x)) / scale);
            printed = std::max(printed, std::abs(as_printed - p(x)) / scale);
            if (m == 1) printed_n1 = std::max(printed_n1, std::abs(as_printed - p(x)) / scale);
        }
        // exact: the monic Q_m has d^m Q_m = m!
        const Polynomial Q = pb_monic(m, k);
        const Polynomial dQ = Q.derivative(m);
        if (dQ.degree() != 0 || dQ.coefficient(0) != fact) monic_exact = false;
        top = std::max(top, std::abs(p.derivative(m).coefficient(0) - std::sqrt(fact)) / std::sqrt(fact));
        top_p = std::max(top_p, std::abs(p.coefficient(m) - 1.0 / std::sqrt(fact)) * std::sqrt(fact));
    }
    r.add("(-1)^m sqrt(m!) p_m = e^{x^2/2+kx} d^m e^{-x^2/2-kx}", rod, 1e-9);
    r.add(Check{"d^n Q_n = n! exactly (monic coefficient arithmetic)", monic_exact ? 0.0 : 1.0, 0.0, monic_exact});
    r.add("d^n p_n = sqrt(n!)", top, 1e-12);
    r.add("leading coefficient of p_n = 1/sqrt(n!)", top_p, 1e-12);
    r.add("p_n = H_n((x+k)/sqrt2) / (2^{n/2} sqrt(n!))", herm, 1e-9);
    r.note("printed prefactor 1/(2^n n!) does not reproduce the recursion: relative deviation " +
           format_number(printed) + " over n <= " + std::to_string(n_max) + " (already " + format_number(printed_n1) +
           " at n = 1); the recursion-consistent prefactor is 2^{-n/2} (n!)^{-1/2}");

    // restricted resolution on finite spans: f = phi_1 + 2 phi_3, g = phi_3
    const ModelRecord m = pseudo_bosonic_model(k);
    std::vector<ScaledFunction> phi, psi;
    for (std::size_t n = 0; n <= 5; ++n) {
        phi.push_back(m.phi1(n, g));
        psi.push_back(m.psi1(n, g));
    }
    std::vector<cplx> fm(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) fm[j] = phi[1].mantissa()[j] + 2.0 * phi[3].mantissa()[j];
    const ScaledFunction fs(g, fm, {phi[1].log_scale().begin(), phi[1].log_scale().end()});
    const GridFunction f = fs.to_grid_function();
    const GridFunction gg = phi[3].to_grid_function();
    cplx sum{};
    for (std::size_t n = 0; n <= 5; ++n) sum += pairing(fs, psi[n]) * inner(phi[n].to_grid_function(), gg);
    const cplx direct = inner(f, gg);
    r.add("<f,g> = sum_k <f,psi_k><phi_k,g> on span{phi_0..phi_5}", std::abs(sum - direct) / std::abs(direct), 1e-8);
    return r;
}

}  // namespace susyq
