#include "susyq/deform.hpp"

#include <algorithm>
#include <cmath>

namespace susyq {

Deformation make_deformation(const Expr& q, const Expr& w, const Grid& g) {
    Deformation d{q, w, g, INFINITY, -INFINITY, false, {}};
    const GridFunction qs = sample(q, g);
    std::size_t jmin = 0, jmax = 0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double r = qs[j].real();
        if (r < d.m) d.m = r, jmin = j;
        if (r > d.M) d.M = r, jmax = j;
    }
    if (!(d.m > 0.0))
        throw DeformError("Re q must stay positive on the grid; minimum " + format_number(d.m) + " at x = " +
                          format_number(g.x(jmin)));
    const auto near_edge = [&](std::size_t j) { return std::abs(g.x(j)) >= 0.95 * g.half_width(); };
    d.bound_at_edge = near_edge(jmin) || near_edge(jmax);
    d.certification = "bounds m = " + format_number(d.m) + ", M = " + format_number(d.M) + " certified on [" +
                      format_number(-g.half_width()) + ", " + format_number(g.half_width()) + "]";
    if (d.bound_at_edge) d.certification += "; an extremum is attained near the grid edge, the global bound is unverified";
    return d;
}

Deformation deformation_from_json(const nlohmann::json& j, const Grid& g) {
    const Bindings b = j.contains("bindings") ? bindings_from_json(j.at("bindings")) : Bindings{};
    return make_deformation(parse(j.at("q").get<std::string>(), b), parse(j.at("w").get<std::string>(), b), g);
}

SuperpotentialPair deformed_pair(const Deformation& d) {
    const Expr dq = differentiate(d.q);
    return build_pair(d.w - dq, d.w + dq);
}

Report deformed_potential_check(const Deformation& d, const std::vector<double>& points, double tol) {
    Report r("deformed potentials");
    const SuperpotentialPair p = deformed_pair(d);
    const Expr dw = differentiate(d.w);
    const Expr dq = differentiate(d.q);
    const Expr ddq = differentiate(dq);
    double e1 = 0, e2 = 0, a1 = 0, a2 = 0, eq = 0;
    for (double x : points) {
        const cplx w = d.w(x), w1 = dw(x), q1 = dq(x), q2 = ddq(x);
        const auto err = [](cplx got, cplx want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); };
        e1 = std::max(e1, err(p.V1(x), w * w - w1 - q1 * q1 + q2));
        e2 = std::max(e2, err(p.V2(x), w * w + w1 - q1 * q1 + q2));
        a1 = std::max(a1, err(p.V1_adj(x), w * w - w1 - std::conj(q1) * std::conj(q1) - std::conj(q2)));
        a2 = std::max(a2, err(p.V2_adj(x), w * w + w1 - std::conj(q1) * std::conj(q1) - std::conj(q2)));
        eq = std::max(eq, err(p.q1(x), 2.0 * q1));
    }
    r.add("V1 = w^2 - w' - q'^2 + q''", e1, tol);
    r.add("V2 = w^2 + w' - q'^2 + q''", e2, tol);
    r.add("adjV1 = w^2 - w' - conj(q')^2 - conj(q'')", a1, tol);
    r.add("adjV2 = w^2 + w' - conj(q')^2 - conj(q'')", a2, tol);
    r.add("q1 = 2q'", eq, tol);
    return r;
}

DeformedBasis deformed_basis(const Deformation& d, const std::vector<GridFunction>& base, double tol) {
    for (std::size_t n = 0; n < base.size(); ++n) {
        require_same_grid(d.grid, base[n].grid());
        for (std::size_t m = 0; m <= n; ++m) {
            const double err = std::abs(inner(base[n], base[m]) - (n == m ? 1.0 : 0.0));
            if (err > tol)
                throw DeformError("base functions are not orthonormal: <e_" + std::to_string(n) + ", e_" +
                                  std::to_string(m) + "> off by " + format_number(err));
        }
    }
    const GridFunction qs = sample(d.q, d.grid);
    GridFunction T(d.grid), Tinv_adj(d.grid);
    for (std::size_t j = 0; j < qs.size(); ++j) {
        T[j] = std::exp(qs[j]);
        Tinv_adj[j] = std::exp(-std::conj(qs[j]));
    }
    DeformedBasis b;
    for (const auto& e : base) {
        b.phi.push_back(T * e);
        b.psi.push_back(Tinv_adj * e);
    }
    return b;
}

Report deformed_basis_check(const Deformation& d, const DeformedBasis& b, double tol) {
    Report r("deformed basis");
    double worst = 0;
    for (std::size_t n = 0; n < b.psi.size(); ++n)
        for (std::size_t m = 0; m < b.phi.size(); ++m)
            worst = std::max(worst, std::abs(inner(b.psi[n], b.phi[m]) - (n == m ? 1.0 : 0.0)));
    r.add("<psi_n, phi_m> = delta", worst, tol);
    double over_phi = 0, over_psi = 0;
    for (const auto& f : b.phi) over_phi = std::max(over_phi, norm(f) - std::exp(d.M));
    for (const auto& f : b.psi) over_psi = std::max(over_psi, norm(f) - std::exp(-d.m));
    r.add(Check{"||phi_n|| <= e^M", over_phi, 0.0, over_phi <= 1e-12});
    r.add(Check{"||psi_n|| <= e^-m", over_psi, 0.0, over_psi <= 1e-12});
    r.note(d.certification);
    return r;
}

Report deformed_eigencheck(const Deformation& d, const DeformedSector& s1, const DeformedSector& s2, double tol) {
    Report r("deformed eigenproblem");
    const SampledPair p(deformed_pair(d), d.grid);
    const auto run = [&](const DeformedSector& s, auto H, auto Hdag, const std::string& label) {
        double e = 0, ed = 0;
        for (std::size_t n = 0; n < s.E.size(); ++n) {
            const auto& phi = s.basis.phi[n];
            const auto& psi = s.basis.psi[n];
            e = std::max(e, interior_norm(H(p, phi) - s.E[n] * phi) / norm(phi));
            ed = std::max(ed, interior_norm(Hdag(p, psi) - s.E[n] * psi) / norm(psi));
        }
        r.add("H" + label + " phi_n = E_n phi_n", e, tol);
        r.add("H" + label + "+ psi_n = E_n psi_n", ed, tol);
    };
    run(s1, apply_H1, apply_H1_dag, "1");
    if (!s2.E.empty()) run(s2, apply_H2, apply_H2_dag, "2");
    return r;
}

double sandwich_residual(const Deformation& d, const std::vector<GridFunction>& fs) {
    const SampledPair p(deformed_pair(d), d.grid);
    const GridFunction qs = sample(d.q, d.grid);
    const GridFunction base_V = sample(d.w * d.w - differentiate(d.w), d.grid);
    GridFunction T(d.grid), Tinv(d.grid);
    for (std::size_t j = 0; j < qs.size(); ++j) {
        T[j] = std::exp(qs[j]);
        Tinv[j] = std::exp(-qs[j]);
    }
    double worst = 0;
    for (const auto& f : fs) {
        const GridFunction g = Tinv * f;
        const GridFunction rhs = T * (base_V * g - derivative(g, 2));
        worst = std::max(worst, relative_residual(rhs, apply_H1(p, f)));
    }
    return worst;
}

}  // namespace susyq
