#include "susyq/susy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace susyq {

SuperpotentialPair build_pair(const Expr& wA, const Expr& wB) {
    SuperpotentialPair p;
    p.wA = wA;
    p.wB = wB;
    p.dwA = differentiate(wA);
    p.dwB = differentiate(wB);
    p.q1 = wB - wA;
    const Expr prod = wA * wB;
    p.V1 = prod - p.dwA;
    p.V2 = prod + p.dwB;
    p.V1_adj = conj(prod - p.dwB);
    p.V2_adj = conj(prod + p.dwA);
    return p;
}

SuperpotentialPair adjoint_pair(const SuperpotentialPair& p) { return build_pair(conj(p.wB), conj(p.wA)); }

std::vector<double> test_points(std::size_t count, double half_width, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-half_width, half_width);
    std::vector<double> xs(count);
    for (auto& x : xs) x = dist(rng);
    return xs;
}

namespace {

cplx central_diff(const Expr& e, double x) {
    const double h = 1e-4 * std::max(1.0, std::abs(x));
    return (-e(x + 2 * h) + 8.0 * e(x + h) - 8.0 * e(x - h) + e(x - 2 * h)) / (12.0 * h);
}

double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace

Report check_pair(const SuperpotentialPair& p, const std::vector<double>& points, double tol) {
    Report r("pair");
    double e_q1 = 0, e_v1 = 0, e_v2 = 0, e_diff = 0, e_a1 = 0, e_a2 = 0;
    std::size_t used = 0;
    for (double x : points) {
        try {
            const cplx a = p.wA(x), b = p.wB(x);
            const cplx da = central_diff(p.wA, x), db = central_diff(p.wB, x);
            const cplx v1 = p.V1(x), v2 = p.V2(x);
            e_q1 = std::max(e_q1, rel_err(p.q1(x), b - a));
            e_v1 = std::max(e_v1, rel_err(v1, a * b - da));
            e_v2 = std::max(e_v2, rel_err(v2, a * b + db));
            e_diff = std::max(e_diff, rel_err(v2 - v1, da + db));
            e_a1 = std::max(e_a1, rel_err(p.V1_adj(x), std::conj(a * b - db)));
            e_a2 = std::max(e_a2, rel_err(p.V2_adj(x), std::conj(a * b + da)));
            ++used;
        } catch (const ExprError&) {
            // pole or log(0) at this point; skipped
        }
    }
    if (used < points.size()) r.note(std::to_string(points.size() - used) + " test points skipped at singularities");
    r.add("q1 = wB - wA", e_q1, tol);
    r.add("V1 = wA wB - wA'", e_v1, tol);
    r.add("V2 = wA wB + wB'", e_v2, tol);
    r.add("V2 - V1 = wA' + wB'", e_diff, tol);
    r.add("adjV1 = conj(wA wB - wB')", e_a1, tol);
    r.add("adjV2 = conj(wA wB + wA')", e_a2, tol);
    return r;
}

SampledPair::SampledPair(const SuperpotentialPair& p, const Grid& g)
    : wA(sample(p.wA, g)),
      wB(sample(p.wB, g)),
      dwA(sample(p.dwA, g)),
      dwB(sample(p.dwB, g)),
      q1(sample(p.q1, g)),
      V1(sample(p.V1, g)),
      V2(sample(p.V2, g)),
      V1_adj(sample(p.V1_adj, g)),
      V2_adj(sample(p.V2_adj, g)),
      pair_(p),
      grid_(g) {}

GridFunction apply_A(const SampledPair& p, const GridFunction& f) {
    require_same_grid(p.grid(), f.grid());
    return derivative(f) + p.wA * f;
}

GridFunction apply_B(const SampledPair& p, const GridFunction& f) {
    require_same_grid(p.grid(), f.grid());
    return p.wB * f - derivative(f);
}

GridFunction apply_A_dag(const SampledPair& p, const GridFunction& f) {
    require_same_grid(p.grid(), f.grid());
    return conj(p.wA) * f - derivative(f);
}

GridFunction apply_B_dag(const SampledPair& p, const GridFunction& f) {
    require_same_grid(p.grid(), f.grid());
    return derivative(f) + conj(p.wB) * f;
}

namespace {

GridFunction second_order(const GridFunction& q, const GridFunction& V, const GridFunction& f) {
    return q * derivative(f) + V * f - derivative(f, 2);
}

}  // namespace

GridFunction apply_H1(const SampledPair& p, const GridFunction& f) {
    require_same_grid(p.grid(), f.grid());
    return second_order(p.q1, p.V1, f);
}

GridFunction apply_H2(const SampledPair& p, const GridFunction& f) {
    require_same_grid(p.grid(), f.grid());
    return second_order(p.q1, p.V2, f);
}

GridFunction apply_H1_dag(const SampledPair& p, const GridFunction& f) {
    require_same_grid(p.grid(), f.grid());
    return second_order(-1.0 * conj(p.q1), p.V1_adj, f);
}

GridFunction apply_H2_dag(const SampledPair& p, const GridFunction& f) {
    require_same_grid(p.grid(), f.grid());
    return second_order(-1.0 * conj(p.q1), p.V2_adj, f);
}

double relative_residual(const GridFunction& a, const GridFunction& b) {
    const double diff = interior_norm(a - b);
    const double scale = interior_norm(b);
    return scale > 0.0 ? diff / scale : diff;
}

// ---------------------------------------------------------------------------
// vacua

const Vacuum& Vacua::operator[](std::size_t i) const {
    switch (i) {
        case 0: return phi1;
        case 1: return phi2;
        case 2: return psi1;
        default: return psi2;
    }
}

namespace {

constexpr std::array<double, 5> gl_nodes = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                            0.9061798459386640};
constexpr std::array<double, 5> gl_weights = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                              0.4786286704993665, 0.2369268850561891};

cplx gauss5(const Expr& e, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx acc{};
    for (std::size_t k = 0; k < 5; ++k) acc += gl_weights[k] * e(c + h * gl_nodes[k]);
    return acc * h;
}

/// ∫_0^{x_j} e for every grid point.
std::vector<cplx> cumulative_integral(const Expr& e, const Grid& g) {
    const std::size_t n = g.size();
    std::vector<cplx> out(n);
    std::size_t j0 = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (std::abs(g.x(j)) < std::abs(g.x(j0))) j0 = j;
    out[j0] = g.x(j0) == 0.0 ? cplx{} : gauss5(e, 0.0, g.x(j0));
    for (std::size_t j = j0; j + 1 < n; ++j) out[j + 1] = out[j] + gauss5(e, g.x(j), g.x(j + 1));
    for (std::size_t j = j0; j > 0; --j) out[j - 1] = out[j] - gauss5(e, g.x(j - 1), g.x(j));
    return out;
}

std::vector<cplx> sampled_values(const Expr& e, const Grid& g) {
    auto f = sample(e, g);
    return {f.values().begin(), f.values().end()};
}

double fit_slope(const std::vector<double>& t, const std::vector<double>& y) {
    const double n = static_cast<double>(t.size());
    if (t.size() < 2) return 0.0;
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    const double den = n * stt - st * st;
    return den == 0.0 ? 0.0 : (n * sty - st * sy) / den;
}

/// log ‖f‖ without forming f.
double log_norm(const ScaledFunction& f) {
    const double top = f.max_log_abs();
    if (!std::isfinite(top)) return top;
    return top + std::log(norm(f.rescaled()));
}

bool near_any(double x, const std::vector<double>& pts, double radius) {
    return std::any_of(pts.begin(), pts.end(), [&](double p) { return std::abs(x - p) < radius; });
}

Vacuum make_vacuum(std::string name, const Grid& g, std::vector<cplx> log_f, const std::vector<cplx>& w, double sign,
                   const std::vector<double>& singular) {
    // f = exp(log_f) with f' = log_f' f; the annihilator reads sign·f' + w f.
    Vacuum v;
    v.name = std::move(name);
    const GridFunction L(g, log_f);
    const GridFunction dL = derivative(L);
    v.f = ScaledFunction(g, std::vector<cplx>(g.size(), cplx{1.0}), std::move(log_f));
    v.finite_on_grid = v.f.representable();

    constexpr std::size_t drop = 5;
    constexpr double exclusion = 0.5;
    double top = -INFINITY;
    for (std::size_t j = drop; j + drop < g.size(); ++j)
        if (!near_any(g.x(j), singular, exclusion)) top = std::max(top, v.f.log_abs(j));
    double num = 0.0, den = 0.0;
    for (std::size_t j = drop; j + drop < g.size(); ++j) {
        if (near_any(g.x(j), singular, exclusion)) continue;
        const double mag = std::exp(v.f.log_abs(j) - top);
        num += std::norm(mag * (sign * dL[j] + w[j]));
        den += mag * mag;
    }
    v.residual = den > 0.0 ? std::sqrt(num / den) : INFINITY;

    const auto [left, right] = asymptotic_exponents(v.f);
    v.exponent_left = left;
    v.exponent_right = right;
    v.in_l2 = left < -l2_exponent_margin && right < -l2_exponent_margin;

    for (double s : singular) {
        if (s <= g.x(0) || s >= g.x(g.size() - 1)) continue;
        const auto idx = [&](double x) {
            return static_cast<std::size_t>(std::llround((x + g.half_width()) / g.spacing()));
        };
        const std::size_t js = idx(s);
        const double at = v.f.log_abs(js);
        const double away = std::max(v.f.log_abs(idx(std::max(g.x(0), s - 0.5))),
                                     v.f.log_abs(idx(std::min(g.x(g.size() - 1), s + 0.5))));
        if (at > away + 2.0) v.interior_singularity = true;
    }
    return v;
}

void scale_unit(Vacuum& v) {
    const double ln = log_norm(v.f);
    if (std::isfinite(ln)) v.f *= std::exp(-ln);
}

void scale_pair(Vacuum& phi, Vacuum& psi, std::vector<std::string>& notes) {
    if (phi.in_l2) scale_unit(phi);
    const double edge = pairing_edge_ratio(psi.f, phi.f);
    const cplx P = pairing(psi.f, phi.f);
    if (!std::isfinite(P.real()) || !std::isfinite(P.imag()) || std::abs(P) == 0.0 || edge > 1e-12) {
        notes.push_back("pair normalization of " + psi.name + " with " + phi.name +
                        " skipped: pairing not resolved on the grid");
        return;
    }
    psi.f *= 1.0 / std::conj(P);
}

}  // namespace

std::pair<double, double> asymptotic_exponents(const ScaledFunction& f, double fraction) {
    const Grid& g = f.grid();
    const double cut = (1.0 - fraction) * g.half_width();
    std::vector<double> tl, yl, tr, yr;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.x(j);
        const double y = f.log_abs(j);
        if (!std::isfinite(y)) continue;
        if (x <= -cut) {
            tl.push_back(-x);
            yl.push_back(y);
        } else if (x >= cut) {
            tr.push_back(x);
            yr.push_back(y);
        }
    }
    return {fit_slope(tl, yl), fit_slope(tr, yr)};
}

Vacua vacua(const SuperpotentialPair& p, const Grid& g, Normalization policy,
            const std::optional<Antiderivatives>& closed_form) {
    std::vector<cplx> LA, LB;
    std::vector<double> singular;
    if (closed_form) {
        LA = sampled_values(closed_form->int_wA, g);
        LB = sampled_values(closed_form->int_wB, g);
        singular = closed_form->singular_points;
    } else {
        LA = cumulative_integral(p.wA, g);
        LB = cumulative_integral(p.wB, g);
    }
    const auto wA = sampled_values(p.wA, g);
    const auto wB = sampled_values(p.wB, g);
    std::vector<cplx> cwA(wA.size()), cwB(wB.size());
    std::transform(wA.begin(), wA.end(), cwA.begin(), [](cplx v) { return std::conj(v); });
    std::transform(wB.begin(), wB.end(), cwB.begin(), [](cplx v) { return std::conj(v); });

    std::vector<cplx> l_phi1(g.size()), l_phi2(g.size()), l_psi1(g.size()), l_psi2(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        l_phi1[j] = -LA[j];
        l_phi2[j] = LB[j];
        l_psi1[j] = -std::conj(LB[j]);
        l_psi2[j] = std::conj(LA[j]);
    }

    Vacua out;
    // A φ = φ' + wA φ;  B φ = -φ' + wB φ;  B† ψ = ψ' + conj(wB) ψ;  A† ψ = -ψ' + conj(wA) ψ.
    out.phi1 = make_vacuum("phi0_1", g, std::move(l_phi1), wA, 1.0, singular);
    out.phi2 = make_vacuum("phi0_2", g, std::move(l_phi2), wB, -1.0, singular);
    out.psi1 = make_vacuum("psi0_1", g, std::move(l_psi1), cwB, 1.0, singular);
    out.psi2 = make_vacuum("psi0_2", g, std::move(l_psi2), cwA, -1.0, singular);

    for (const Vacuum* v : {&out.phi1, &out.phi2, &out.psi1, &out.psi2}) {
        if (!v->finite_on_grid) out.notes.push_back(v->name + " overflows on the grid: not L1loc-representable");
        if (v->interior_singularity)
            out.notes.push_back(v->name + " is singular inside the grid; the L2 flag reflects the tails only");
    }

    switch (policy) {
        case Normalization::raw: break;
        case Normalization::unit_l2:
            for (Vacuum* v : {&out.phi1, &out.phi2, &out.psi1, &out.psi2})
                if (v->in_l2 && !v->interior_singularity) scale_unit(*v);
            break;
        case Normalization::pair:
            scale_pair(out.phi1, out.psi1, out.notes);
            scale_pair(out.phi2, out.psi2, out.notes);
            break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// intertwining

IntertwineResult intertwine_check(const SampledPair& p, const std::vector<EigenPair>& sector1,
                                  const std::vector<EigenPair>& sector2, double tol,
                                  const std::vector<EigenPair>& psi1, const std::vector<EigenPair>& psi2) {
    IntertwineResult res;
    res.report = Report("intertwining");
    const auto match = [](const std::vector<EigenPair>& list, cplx E) -> const EigenPair* {
        for (const auto& e : list)
            if (std::abs(e.E - E) <= 1e-8 * std::max(1.0, std::abs(E))) return &e;
        return nullptr;
    };

    double worst_alpha = 0, worst_beta = 0, worst_prod = 0, worst_dual = 0;
    bool any_missing = false;
    for (std::size_t n = 0; n < sector1.size(); ++n) {
        IntertwineRow row;
        row.n = n;
        row.E = sector1[n].E;
        if (std::abs(row.E) < 1e-12) {
            row.skipped = true;
            row.alpha_residual = relative_residual(apply_A(p, sector1[n].f), GridFunction(p.grid()));
            res.rows.push_back(row);
            continue;
        }
        const EigenPair* partner = match(sector2, row.E);
        if (!partner) {
            any_missing = true;
            res.report.note("no sector-2 partner for E = " + format_number(row.E.real()) + " (n = " +
                            std::to_string(n) + ")");
            continue;
        }
        const GridFunction& f1 = sector1[n].f;
        const GridFunction& f2 = partner->f;
        const GridFunction Af1 = apply_A(p, f1);
        const GridFunction Bf2 = apply_B(p, f2);
        row.alpha = inner(f2, Af1) / inner(f2, f2);
        row.beta = inner(f1, Bf2) / inner(f1, f1);
        row.alpha_residual = relative_residual(row.alpha * f2, Af1);
        row.beta_residual = relative_residual(row.beta * f1, Bf2);
        row.product_error = std::abs(row.alpha * row.beta - row.E);

        const EigenPair* d1 = n < psi1.size() ? &psi1[n] : nullptr;
        const EigenPair* d2 = match(psi2, std::conj(row.E));
        if (d1 && d2) {
            const double r1 = relative_residual(std::conj(row.beta) * d2->f, apply_B_dag(p, d1->f));
            const double r2 = relative_residual(std::conj(row.alpha) * d1->f, apply_A_dag(p, d2->f));
            row.dual_residual = std::max(r1, r2);
        }
        worst_alpha = std::max(worst_alpha, row.alpha_residual);
        worst_beta = std::max(worst_beta, row.beta_residual);
        worst_prod = std::max(worst_prod, row.product_error);
        worst_dual = std::max(worst_dual, row.dual_residual);
        res.rows.push_back(row);
    }
    res.report.add("A phi1_n proportional to phi2_n", worst_alpha, tol);
    res.report.add("B phi2_n proportional to phi1_n", worst_beta, tol);
    res.report.add("alpha_n beta_n = E_n", worst_prod, tol);
    if (!psi1.empty() && !psi2.empty()) res.report.add("dual relations on psi families", worst_dual, tol);
    if (any_missing) res.report.add(Check{"every excited level has a partner", 1.0, 0.0, false});
    return res;
}

// ---------------------------------------------------------------------------
// superalgebra

BlockOp::BlockOp(Entry a11, Entry a12, Entry a21, Entry a22) {
    e_[0][0] = std::move(a11);
    e_[0][1] = std::move(a12);
    e_[1][0] = std::move(a21);
    e_[1][1] = std::move(a22);
}

bool BlockOp::structurally_zero() const { return !has(0, 0) && !has(0, 1) && !has(1, 0) && !has(1, 1); }

BlockVector BlockOp::operator()(const BlockVector& v) const {
    const Grid& g = v.upper.grid();
    const GridFunction* in[2] = {&v.upper, &v.lower};
    BlockVector out{GridFunction(g), GridFunction(g)};
    GridFunction* res[2] = {&out.upper, &out.lower};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (e_[i][j]) *res[i] += e_[i][j](*in[j]);
    return out;
}

BlockOp operator*(const BlockOp& x, const BlockOp& y) {
    BlockOp z;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            BlockOp::Entry acc;
            for (int k = 0; k < 2; ++k) {
                if (!x.e_[i][k] || !y.e_[k][j]) continue;
                BlockOp::Entry term = [a = x.e_[i][k], b = y.e_[k][j]](const GridFunction& f) { return a(b(f)); };
                if (!acc)
                    acc = std::move(term);
                else
                    acc = [a = std::move(acc), b = std::move(term)](const GridFunction& f) { return a(f) + b(f); };
            }
            z.e_[i][j] = std::move(acc);
        }
    return z;
}

BlockOp operator+(const BlockOp& x, const BlockOp& y) {
    BlockOp z;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            if (x.e_[i][j] && y.e_[i][j])
                z.e_[i][j] = [a = x.e_[i][j], b = y.e_[i][j]](const GridFunction& f) { return a(f) + b(f); };
            else
                z.e_[i][j] = x.e_[i][j] ? x.e_[i][j] : y.e_[i][j];
        }
    return z;
}

BlockOp operator-(const BlockOp& x, const BlockOp& y) {
    BlockOp z;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            if (x.e_[i][j] && y.e_[i][j])
                z.e_[i][j] = [a = x.e_[i][j], b = y.e_[i][j]](const GridFunction& f) { return a(f) - b(f); };
            else if (x.e_[i][j])
                z.e_[i][j] = x.e_[i][j];
            else if (y.e_[i][j])
                z.e_[i][j] = [b = y.e_[i][j]](const GridFunction& f) { return -1.0 * b(f); };
        }
    return z;
}

SuperalgebraOps superalgebra_ops(const SampledPair& p) {
    const SampledPair* sp = &p;
    auto op = [sp](GridFunction (*fn)(const SampledPair&, const GridFunction&)) {
        return BlockOp::Entry([sp, fn](const GridFunction& f) { return fn(*sp, f); });
    };
    SuperalgebraOps o;
    o.H = BlockOp(op(apply_H1), {}, {}, op(apply_H2));
    o.H_dag = BlockOp(op(apply_H1_dag), {}, {}, op(apply_H2_dag));
    o.QA = BlockOp({}, {}, op(apply_A), {});
    o.QB = BlockOp({}, op(apply_B), {}, {});
    o.QA_dag = BlockOp({}, op(apply_A_dag), {}, {});
    o.QB_dag = BlockOp({}, {}, op(apply_B_dag), {});
    return o;
}

namespace {

double block_norm(const BlockVector& v) {
    return std::hypot(interior_norm(v.upper), interior_norm(v.lower));
}

BlockVector block_diff(const BlockVector& a, const BlockVector& b) { return {a.upper - b.upper, a.lower - b.lower}; }

BlockVector block_scale(cplx s, const BlockVector& v) { return {s * v.upper, s * v.lower}; }

double rel_block(const BlockVector& got, const BlockVector& want, double floor) {
    return block_norm(block_diff(got, want)) / std::max(block_norm(want), floor);
}

}  // namespace

Report superalgebra_check(const SampledPair& p, const std::vector<BlockVector>& test_vectors,
                          const std::vector<Doublet>& doublets, double tol) {
    Report r("superalgebra");
    const SuperalgebraOps o = superalgebra_ops(p);

    const BlockOp QA2 = o.QA * o.QA;
    const BlockOp QB2 = o.QB * o.QB;
    r.add(Check{"QA^2 = 0 (structural)", QA2.structurally_zero() ? 0.0 : 1.0, 0.0, QA2.structurally_zero()});
    r.add(Check{"QB^2 = 0 (structural)", QB2.structurally_zero() ? 0.0 : 1.0, 0.0, QB2.structurally_zero()});

    const BlockOp anti = o.QA * o.QB + o.QB * o.QA;
    const BlockOp anti_dag = o.QA_dag * o.QB_dag + o.QB_dag * o.QA_dag;
    const BlockOp comm_A = o.H * o.QA - o.QA * o.H;
    const BlockOp comm_B = o.H * o.QB - o.QB * o.H;

    double e_anti = 0, e_anti_dag = 0, e_cA = 0, e_cB = 0;
    for (const auto& v : test_vectors) {
        const double vn = block_norm(v);
        e_anti = std::max(e_anti, rel_block(anti(v), o.H(v), vn));
        e_anti_dag = std::max(e_anti_dag, rel_block(anti_dag(v), o.H_dag(v), vn));
        const double sA = std::max({block_norm((o.H * o.QA)(v)), block_norm((o.QA * o.H)(v)), vn});
        const double sB = std::max({block_norm((o.H * o.QB)(v)), block_norm((o.QB * o.H)(v)), vn});
        e_cA = std::max(e_cA, block_norm(comm_A(v)) / sA);
        e_cB = std::max(e_cB, block_norm(comm_B(v)) / sB);
    }
    if (!test_vectors.empty()) {
        r.add("{QA,QB} v = H v", e_anti, tol);
        r.add("{QA+,QB+} v = H+ v", e_anti_dag, tol);
        r.add("[H,QA] v = 0", e_cA, tol);
        r.add("[H,QB] v = 0", e_cB, tol);
    }

    double e_eig = 0, e_eig_dag = 0, e_map = 0, e_map_dag = 0, e_annihilate = 0;
    for (const auto& d : doublets) {
        const Grid& g = d.phi1.grid();
        const GridFunction zero(g);
        const BlockVector phip{d.phi1, zero}, psip{d.psi1, zero};
        const double floor = block_norm(phip);
        e_eig = std::max(e_eig, rel_block(o.H(phip), block_scale(d.E, phip), floor));
        e_eig_dag = std::max(e_eig_dag, rel_block(o.H_dag(psip), block_scale(std::conj(d.E), psip), block_norm(psip)));
        // structural annihilations Q_B φ̃+ = 0 and Q_A† ψ̃+ = 0
        e_annihilate = std::max({e_annihilate, block_norm(o.QB(phip)), block_norm(o.QA_dag(psip))});
        if (d.phi2.size() == 0) {
            // E = 0: no partner, Q_A φ̃+ vanishes
            e_map = std::max(e_map, block_norm(o.QA(phip)) / floor);
            continue;
        }
        const BlockVector phim{zero, d.phi2}, psim{zero, d.psi2};
        e_eig = std::max(e_eig, rel_block(o.H(phim), block_scale(d.E, phim), block_norm(phim)));
        e_eig_dag = std::max(e_eig_dag, rel_block(o.H_dag(psim), block_scale(std::conj(d.E), psim), block_norm(psim)));
        e_map = std::max(e_map, rel_block(o.QA(phip), block_scale(d.alpha, phim), 0.0));
        e_map = std::max(e_map, rel_block(o.QB(phim), block_scale(d.beta, phip), 0.0));
        e_map_dag = std::max(e_map_dag, rel_block(o.QA_dag(psim), block_scale(std::conj(d.alpha), psip), 0.0));
        e_map_dag = std::max(e_map_dag, rel_block(o.QB_dag(psip), block_scale(std::conj(d.beta), psim), 0.0));
        e_annihilate = std::max({e_annihilate, block_norm(o.QA(phim)), block_norm(o.QB_dag(psim))});
    }
    if (!doublets.empty()) {
        r.add("H phi~ = E phi~", e_eig, tol);
        r.add("H+ psi~ = conj(E) psi~", e_eig_dag, tol);
        r.add("QA phi~+ = alpha phi~-, QB phi~- = beta phi~+", e_map, tol);
        r.add("QA+ psi~- = conj(alpha) psi~+, QB+ psi~+ = conj(beta) psi~-", e_map_dag, tol);
        r.add(Check{"structural annihilations", e_annihilate, 0.0, e_annihilate == 0.0});
    }
    return r;
}

}  // namespace susyq
