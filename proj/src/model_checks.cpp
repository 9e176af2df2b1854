#include "susyq/model_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "susyq/deform.hpp"
#include "susyq/gk.hpp"

namespace susyq {

namespace {

std::vector<double> singular_points(const ModelRecord& m) {
    return m.antiderivatives ? m.antiderivatives->singular_points : std::vector<double>{};
}

std::vector<ScaledFunction> family(const FamilyGenerator& gen, std::size_t count, const Grid& g) {
    std::vector<ScaledFunction> out;
    for (std::size_t n = 0; n < count; ++n) out.push_back(gen(n, g));
    return out;
}

bool all_representable(const std::vector<ScaledFunction>& fs) {
    return std::all_of(fs.begin(), fs.end(), [](const ScaledFunction& f) { return f.representable(); });
}

}  // namespace

// ---------------------------------------------------------------------------
// masked residuals

ResolvedView resolved_view(const ScaledFunction& f, double max_step) {
    const Grid& g = f.grid();
    const std::size_t n = g.size();
    std::vector<double> la(n), step(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) la[j] = f.log_abs(j);
    // the slope is taken from the exponential envelope so zeros of the mantissa do not register
    for (std::size_t j = 1; j + 1 < n; ++j)
        step[j] = std::abs(f.log_scale()[j + 1].real() - f.log_scale()[j - 1].real()) / 2;
    step[0] = step[1];
    step[n - 1] = step[n - 2];

    double ref = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
        if (step[j] < max_step && std::isfinite(la[j])) ref = std::max(ref, la[j]);
    if (!std::isfinite(ref)) ref = f.max_log_abs();

    // a point is usable when its finite-difference error, roughly (h κ)^4 |f|
    // with κ the local log-slope, is below e^{-14} relative to the reference
    ResolvedView v;
    v.f = GridFunction(g);
    std::vector<bool> usable(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double rel = la[j] - ref;
        if (rel < 700.0 && std::isfinite(la[j])) v.f[j] = f.mantissa()[j] * std::exp(f.log_scale()[j] - ref);
        usable[j] = !std::isfinite(la[j]) ||
                    (rel < 700.0 && (step[j] < max_step || rel + 4.0 * std::log(step[j]) < 4.0 * std::log(max_step)));
    }
    v.mask.assign(n, false);
    std::size_t count = 0;
    for (std::size_t j = 5; j + 5 < n; ++j) {
        bool fine = true;
        for (std::size_t i = j - 3; i <= j + 3 && fine; ++i) fine = usable[i];
        v.mask[j] = fine;
        count += fine;
    }
    v.resolved_fraction = double(count) / double(n - 10);
    return v;
}

double masked_norm(const GridFunction& f, const std::vector<bool>& mask) {
    double s = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j)
        if (mask[j]) s += std::norm(f[j]);
    return std::sqrt(s * f.grid().spacing());
}

double masked_residual(const GridFunction& a, const GridFunction& b, const std::vector<bool>& mask) {
    const double num = masked_norm(a - b, mask);
    const double den = masked_norm(b, mask);
    return den > 0.0 ? num / den : num;
}

std::vector<bool> away_mask(const Grid& g, const std::vector<double>& singular, double radius, std::size_t edge) {
    std::vector<bool> m(g.size(), false);
    for (std::size_t j = edge; j + edge < g.size(); ++j) {
        m[j] = true;
        for (double s : singular)
            if (std::abs(g.x(j) - s) < radius) m[j] = false;
    }
    return m;
}

std::vector<GridFunction> smooth_test_functions(const Grid& g, std::size_t count, unsigned seed,
                                                const std::vector<double>& singular) {
    std::mt19937_64 rng(seed);
    const double span = g.half_width() / 3.0;
    std::uniform_real_distribution<double> centre(-span, span), width(0.7, 1.5), tilt(-0.5, 0.5);
    std::vector<GridFunction> out;
    while (out.size() < count) {
        const double a = centre(rng), s = width(rng), b = tilt(rng), c = tilt(rng);
        if (std::any_of(singular.begin(), singular.end(), [&](double p) { return std::abs(p - a) < 4.0; })) continue;
        out.push_back(sample(
            [=](double x) {
                const double u = (x - a) / s;
                return std::exp(-0.5 * u * u) * cplx(1.0 + c * u, b * u);
            },
            g));
    }
    return out;
}

// ---------------------------------------------------------------------------
// factorization and vacua

Report factorization_check(const SampledPair& p, const std::vector<double>& singular, double tol) {
    Report r("factorization");
    const Grid& g = p.grid();
    const auto mask = away_mask(g, singular, 0.5);

    double e_v = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (!mask[j]) continue;
        const cplx lhs = p.V2[j] - p.V1[j], rhs = p.dwA[j] + p.dwB[j];
        const double scale = std::max({1.0, std::abs(p.V2[j]), std::abs(p.V1[j])});
        e_v = std::max(e_v, std::abs(lhs - rhs) / scale);
    }
    r.add("V2 - V1 = wA' + wB' (pointwise)", e_v, 1e-12);

    double e_ba = 0, e_ab = 0, e_comm = 0, e_adj = 0;
    const GridFunction dsum = p.dwA + p.dwB;
    const auto fs = smooth_test_functions(g, 5, 777, singular);
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const GridFunction& f = fs[i];
        const GridFunction Af = apply_A(p, f), Bf = apply_B(p, f);
        const GridFunction BAf = apply_B(p, Af), ABf = apply_A(p, Bf);
        e_ba = std::max(e_ba, masked_residual(BAf, apply_H1(p, f), mask));
        e_ab = std::max(e_ab, masked_residual(ABf, apply_H2(p, f), mask));
        e_comm = std::max(e_comm, masked_norm(ABf - BAf - dsum * f, mask) / masked_norm(f, mask));

        const GridFunction& h = fs[(i + 1) % fs.size()];
        const double scale = norm(h) * norm(f);
        e_adj = std::max(e_adj, std::abs(inner(apply_A_dag(p, h), f) - inner(h, Af)) / scale);
        e_adj = std::max(e_adj, std::abs(inner(apply_B_dag(p, h), f) - inner(h, Bf)) / scale);
    }
    r.add("B(A f) = H1 f", e_ba, tol);
    r.add("A(B f) = H2 f", e_ab, tol);
    r.add("[A,B] f = (wA' + wB') f", e_comm, tol);
    r.add("<A+ g, f> = <g, A f> and <B+ g, f> = <g, B f>", e_adj, 1e-8);
    if (!singular.empty()) r.note("grid points within 0.5 of a singular point are excluded");
    return r;
}

Report vacua_check(const SuperpotentialPair& p, const Grid& g, Normalization policy,
                   const std::optional<Antiderivatives>& closed_form, Vacua* out) {
    Report r("vacua");
    Vacua v = vacua(p, g, policy, closed_form);
    for (std::size_t i = 0; i < 4; ++i) {
        const Vacuum& w = v[i];
        if (w.finite_on_grid) r.add(w.name + " annihilation residual", w.residual, 1e-6);
        r.note(w.name + ": exponents (" + format_number(w.exponent_left) + ", " + format_number(w.exponent_right) +
               "), " + (w.in_l2 ? "in L2" : "not in L2"));
    }
    for (const auto& n : v.notes) r.note(n);

    const std::vector<double> singular = closed_form ? closed_form->singular_points : std::vector<double>{};
    const auto mask = away_mask(g, singular, 0.1);
    // conj(ψ0^(1)) φ0^(2) and conj(ψ0^(2)) φ0^(1) are constant
    const auto duality = [&](const ScaledFunction& psi, const ScaledFunction& phi) {
        std::vector<cplx> prod(g.size());
        std::size_t ref = g.size();
        for (std::size_t j = 0; j < g.size(); ++j) {
            prod[j] = std::conj(psi.mantissa()[j]) * phi.mantissa()[j] *
                      std::exp(std::conj(psi.log_scale()[j]) + phi.log_scale()[j]);
            if (mask[j] && (ref == g.size() || std::abs(g.x(j)) < std::abs(g.x(ref)))) ref = j;
        }
        double worst = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j)
            if (mask[j]) worst = std::max(worst, std::abs(prod[j] - prod[ref]) / std::abs(prod[ref]));
        return worst;
    };
    r.add("conj(psi0_1) phi0_2 constant", duality(v.psi1.f, v.phi2.f), 1e-8);
    r.add("conj(psi0_2) phi0_1 constant", duality(v.psi2.f, v.phi1.f), 1e-8);
    if (out) *out = std::move(v);
    return r;
}

// ---------------------------------------------------------------------------
// eigendata

Report eigen_check(const ModelRecord& m, const SampledPair& p, double tol) {
    Report r("eigenfunctions");
    const Grid& g = p.grid();
    double worst[4] = {0, 0, 0, 0};
    double min_fraction = 1.0;
    const auto residual = [&](const ScaledFunction& f, cplx E, auto&& H) {
        const ResolvedView v = resolved_view(f);
        min_fraction = std::min(min_fraction, v.resolved_fraction);
        return masked_norm(H(p, v.f) - E * v.f, v.mask) / masked_norm(v.f, v.mask);
    };
    for (std::size_t n = 0; n < m.eigen_count; ++n) {
        const cplx E1 = m.energy1(n), E2 = m.energy2(n);
        worst[0] = std::max(worst[0], residual(m.phi1(n, g), E1, apply_H1));
        worst[1] = std::max(worst[1], residual(m.psi1(n, g), std::conj(E1), apply_H1_dag));
        worst[2] = std::max(worst[2], residual(m.phi2(n, g), E2, apply_H2));
        worst[3] = std::max(worst[3], residual(m.psi2(n, g), std::conj(E2), apply_H2_dag));
    }
    const std::string upto = " (n <= " + std::to_string(m.eigen_count - 1) + ")";
    r.add("H1 phi1_n = E1_n phi1_n" + upto, worst[0], tol);
    r.add("H1+ psi1_n = conj(E1_n) psi1_n" + upto, worst[1], tol);
    r.add("H2 phi2_n = E2_n phi2_n" + upto, worst[2], tol);
    r.add("H2+ psi2_n = conj(E2_n) psi2_n" + upto, worst[3], tol);
    if (min_fraction < 1.0)
        r.note("residuals restricted to the resolved part of the grid (smallest fraction " +
               format_number(min_fraction) + "), where finite differences follow the exponential factor");

    if (m.extra_hamiltonian && m.gk_energy1) {
        double e = 0.0, e_dag = 0.0;
        const std::size_t count = 5;
        for (std::size_t n = 0; n < count; ++n) {
            const cplx E = m.gk_energy1(n);
            const GridFunction f = generate(m.phi1, n, g), h = generate(m.psi1, n, g);
            e = std::max(e, relative_residual(m.extra_hamiltonian(f), E * f));
            if (m.extra_hamiltonian_dag) e_dag = std::max(e_dag, relative_residual(m.extra_hamiltonian_dag(h), std::conj(E) * h));
        }
        r.add(m.extra_hamiltonian_name + " phi_n = E_n phi_n (n <= 4)", e, 1e-4);
        if (m.extra_hamiltonian_dag) r.add(m.extra_hamiltonian_name + "+ Psi_n = E_n Psi_n (n <= 4)", e_dag, 1e-4);
    }
    return r;
}

Report biorthogonality_check(const ModelRecord& m, const Grid& g, std::size_t count, double tol) {
    Report r("biorthogonality");
    const auto check = [&](const FamilyGenerator& phi_gen, const FamilyGenerator& psi_gen, const std::string& label) {
        const auto phi = family(phi_gen, count, g), psi = family(psi_gen, count, g);
        double worst = 0.0, edge = 0.0;
        for (std::size_t n = 0; n < count; ++n)
            for (std::size_t k = 0; k < count; ++k) {
                worst = std::max(worst, std::abs(pairing(psi[n], phi[k]) - (n == k ? 1.0 : 0.0)));
                edge = std::max(edge, pairing_edge_ratio(psi[n], phi[k]));
            }
        const std::string upto = " (n, m <= " + std::to_string(count - 1) + ")";
        r.add("|<psi" + label + "_n, phi" + label + "_m> - delta| " + upto, worst, tol);
        r.add("pairing products negligible at the grid edges (" + label + ")", edge, 1e-12);
    };
    check(m.phi1, m.psi1, "1");
    check(m.phi2, m.psi2, "2");
    return r;
}

Report intertwining_check(const ModelRecord& m, const SampledPair& p, double tol) {
    Report r("intertwining");
    const Grid& g = p.grid();
    const std::size_t count = m.eigen_count;
    const auto phi1 = family(m.phi1, count, g), phi2 = family(m.phi2, count, g);
    const auto psi1 = family(m.psi1, count, g), psi2 = family(m.psi2, count, g);
    const bool with_psi = all_representable(psi1) && all_representable(psi2);

    std::vector<EigenPair> s1, s2, d1, d2;
    for (std::size_t n = 0; n < count; ++n) {
        s1.push_back({m.energy1(n), phi1[n].to_grid_function()});
        s2.push_back({m.energy2(n), phi2[n].to_grid_function()});
        if (with_psi) {
            d1.push_back({std::conj(m.energy1(n)), psi1[n].to_grid_function()});
            d2.push_back({std::conj(m.energy2(n)), psi2[n].to_grid_function()});
        }
    }
    const IntertwineResult it = intertwine_check(p, s1, s2, tol, d1, d2);
    r.merge(it.report);
    for (const auto& row : it.rows)
        if (!row.skipped)
            r.note("n = " + std::to_string(row.n) + ": alpha = " + format_number(row.alpha.real()) +
                   (row.alpha.imag() != 0.0 ? " + " + format_number(row.alpha.imag()) + "i" : "") +
                   ", beta = " + format_number(row.beta.real()) +
                   (row.beta.imag() != 0.0 ? " + " + format_number(row.beta.imag()) + "i" : ""));

    std::vector<BlockVector> tv;
    const auto fs = smooth_test_functions(g, 4, 4242, singular_points(m));
    tv.push_back({fs[0], fs[1]});
    tv.push_back({fs[2], fs[3]});
    std::vector<Doublet> doublets;
    if (with_psi) {
        for (const auto& row : it.rows) {
            Doublet d;
            d.E = row.E;
            d.phi1 = s1[row.n].f;
            d.psi1 = d1[row.n].f;
            if (!row.skipped) {
                for (std::size_t k = 0; k < count; ++k)
                    if (std::abs(s2[k].E - row.E) <= 1e-8 * std::max(1.0, std::abs(row.E))) {
                        d.phi2 = s2[k].f;
                        d.psi2 = d2[k].f;
                    }
                d.alpha = row.alpha;
                d.beta = row.beta;
            }
            doublets.push_back(std::move(d));
        }
    } else {
        r.note("psi families overflow on the grid: superalgebra checked on test vectors only");
    }
    r.merge(superalgebra_check(p, tv, doublets, tol), "superalgebra");
    return r;
}

// ---------------------------------------------------------------------------
// GK states

Report gk_model_check(const ModelRecord& m, const SampledPair& p) {
    Report r("GK states (sector 1)");
    const Grid& g = p.grid();
    const Spectrum s = Spectrum::from_formula(m.gk_energy1 ? m.gk_energy1 : m.energy1, 2000);

    const auto phi_s = family(m.phi1, m.eigen_count, g), psi_s = family(m.psi1, m.eigen_count, g);
    std::vector<double> phi_norms, psi_norms;
    for (const auto& f : phi_s) phi_norms.push_back(norm(f));
    const bool psi_ok = all_representable(psi_s);
    if (psi_ok)
        for (const auto& f : psi_s) psi_norms.push_back(norm(f));
    else
        r.note("psi_n not square integrable on the grid: J_psi taken from r_psi = 1");
    const GKDomain dom = gk_domain(s, phi_norms, psi_norms);
    for (const auto& d : dom.diagnostics) r.note(d);
    r.note("J_min = " + format_number(dom.J_min));
    if (!(dom.J_min > 0.0)) {
        r.note("GK states not certified on this spectrum");
        return r;
    }
    const double J = std::min(1.0, 0.5 * dom.J_min), gamma = 0.3;
    const GKState phi = build_state(s, dom, Family::phi, 1, J, gamma);
    const GKState psi = build_state(s, dom, Family::psi, 1, J, gamma);

    const std::size_t N = std::max(phi.N, psi.N);
    std::vector<GridFunction> phi_b, psi_b;
    if (psi_ok) {
        for (std::size_t n = 0; n < N; ++n) {
            phi_b.push_back(generate(m.phi1, n, g));
            psi_b.push_back(generate(m.psi1, n, g));
        }
    }
    const PairNorm pn = psi_ok ? pair_norm(phi, psi, phi_b, psi_b) : pair_norm(phi, psi);
    r.add("pair norm (coefficients) = 1", std::abs(pn.coefficient - 1.0), 1e-12);
    if (pn.quadrature)
        r.add("pair norm (grid quadrature) = 1", std::abs(*pn.quadrature - 1.0), std::max(1e-7, m.biorthogonality_tol));

    const EvolveResult ev = evolve(phi, s, 0.7);
    const EvolveResult ev2 = evolve(evolve(phi, s, 0.3).state, s, 0.4);
    double comp = ev.mismatch;
    for (std::size_t n = 0; n < phi.N; ++n)
        comp = std::max(comp, std::abs(ev2.state.coefficients[n] - ev.state.coefficients[n]));
    r.add("evolution shifts gamma (composition law)", comp, 1e-12);
    r.add("lowering operator eigenvalue sqrt(J)", lowering_eigen_residual(s, phi), 1e-8);

    try {
        const auto H = [&](const GridFunction& f) { return apply_H1(p, f); };
        const ActionResult a = psi_ok ? action_identity(phi, psi, s, phi_b, psi_b, H) : action_identity(phi, psi, s);
        r.add("action identity (coefficients) = J", std::abs(a.coefficient - J) / J, 1e-8);
        if (a.quadrature) r.add("action identity (grid quadrature) = J", std::abs(*a.quadrature - J) / J, 1e-5);
    } catch (const GKError& e) {
        r.note(std::string("action identity not applicable: ") + e.what());
    }

    std::string diag;
    if (auto d = moment_density(s, &diag)) {
        r.merge(verify_moments(*d, s, 10, 1e-8), "moments");
        r.note("moment density " + d->tag);
    } else {
        r.note("moment problem: " + diag);
    }
    return r;
}

// ---------------------------------------------------------------------------
// model specific

Report bs_assembly_check(double r, double v0, const Grid& g) {
    Report rep("Black-Scholes assembly r = " + format_number(r));
    const ModelRecord m = black_scholes_model(r, v0);
    const auto x0 = black_scholes_pole(r, v0);
    const double eps = std::numeric_limits<double>::epsilon();
    double e_q = 0, e_v1 = 0, e_v2 = 0;
    for (double x : g.points()) {
        if (x0 && std::abs(x - *x0) < 0.1) continue;
        try {
            const cplx wA = m.pair.wA(x), wB = m.pair.wB(x);
            e_q = std::max(e_q, std::abs(wB - wA - (1.0 - r)) / (4 * eps * (std::abs(wA) + std::abs(wB) + 1.0)));
            e_v1 = std::max(e_v1, std::abs(m.pair.V1(x) - r) / std::max(1.0, std::abs(wA * wB)));
            if (r == -1.0) {
                const double ref = 2.0 / ((x - v0) * (x - v0)) - 1.0;
                e_v2 = std::max(e_v2, std::abs(m.pair.V2(x) - ref) / std::max(1.0, std::abs(ref)));
            }
        } catch (const PoleError&) {
        }
    }
    rep.add(Check{"wB - wA = 1 - r to rounding (units of 4 eps |w|)", e_q, 1.0, e_q <= 1.0});
    rep.add("wA wB - wA' = r away from x0", e_v1, 1e-9);
    if (r == -1.0) rep.add("V2 = 2/(x - v0)^2 - 1", e_v2, 1e-9);
    if (x0) rep.note("x0 = " + format_number(*x0));
    return rep;
}

Report generality_check(double k, const Grid& g) {
    Report r("pseudo-bosonic recursion with s(x) = sin x");
    const ModelRecord m = pseudo_bosonic_variant(k, sin(Expr::variable()), "pseudo-bosonic-sin");
    const SampledPair p(m.pair, g);
    Report e = eigen_check(m, p);
    r.merge(e);
    r.merge(biorthogonality_check(m, g, 9, 1e-7));
    return r;
}

// ---------------------------------------------------------------------------
// suites

Report verify_pair(const SuperpotentialPair& p, const Grid& g, const std::optional<Antiderivatives>& closed_form,
                   Normalization policy) {
    Report r("pair");
    r.merge(check_pair(p, test_points(50, 0.8 * g.half_width())), "pair");
    const SampledPair sp(p, g);
    const std::vector<double> singular = closed_form ? closed_form->singular_points : std::vector<double>{};
    r.merge(factorization_check(sp, singular), "factorization");
    r.merge(vacua_check(p, g, policy, closed_form), "vacua");
    return r;
}

Report verify_model(const ModelRecord& m, const Grid& g, const VerifyOptions& opt) {
    Report r("verify " + m.name);
    for (const auto& n : m.notes) r.note(n);
    r.merge(check_pair(m.pair, test_points(50, 0.8 * g.half_width())), "pair");
    const SampledPair sp(m.pair, g);
    r.merge(factorization_check(sp, singular_points(m)), "factorization");

    Vacua vac;
    r.merge(vacua_check(m.pair, g, m.vacuum_normalization, m.antiderivatives, &vac), "vacua");

    if (m.has_eigendata()) {
        r.merge(eigen_check(m, sp), "eigen");
        r.merge(biorthogonality_check(m, g, m.eigen_count, m.biorthogonality_tol), "biorthogonality");
        r.merge(intertwining_check(m, sp), "intertwining");
        if (opt.gk) r.merge(gk_model_check(m, sp), "gk");
    }

    if (m.deformation) {
        const Deformation d = make_deformation(m.deformation->first, m.deformation->second, g);
        r.note(d.certification);
        r.merge(deformed_potential_check(d, test_points(50, 0.8 * g.half_width())), "deformation");
        DeformedBasis b;
        for (std::size_t n = 0; n < m.eigen_count; ++n) {
            b.phi.push_back(generate(m.phi1, n, g));
            b.psi.push_back(generate(m.psi1, n, g));
        }
        r.merge(deformed_basis_check(d, b), "deformation");
        r.add("deformation: H1 = e^q h1 e^{-q}", sandwich_residual(d, smooth_test_functions(g, 3, 99)), 1e-5);
    }

    if (m.name == "black-scholes") {
        const double rr = m.parameters.at("r").real(), v0 = m.parameters.at("v0").real();
        r.merge(bs_assembly_check(rr, v0, g), "black-scholes");
        const VacuumFlags analytic = bs_classification(rr);
        const VacuumFlags numeric{vac.phi1.in_l2, vac.phi2.in_l2, vac.psi1.in_l2, vac.psi2.in_l2};
        r.add(Check{"black-scholes: classification " + numeric.str() + " matches case table " + analytic.str(),
                    analytic == numeric ? 0.0 : 1.0, 0.0, analytic == numeric});
    }
    if (m.name == "pseudo-bosonic") {
        const double k = m.parameters.at("k").real();
        r.merge(pb_identities(k, 12, g), "identities");
        r.merge(generality_check(k, g), "generality");
    }
    return r;
}

}  // namespace susyq
