#include "susyq/gk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

namespace susyq {

GKDomainError::GKDomainError(double J, double J_min)
    : GKError("J = " + format_number(J) + " is outside the certified domain [0, " + format_number(J_min) + ")"),
      J_(J),
      J_min_(J_min) {}

// ---------------------------------------------------------------------------
// Spectrum

Spectrum::Spectrum(std::vector<cplx> E) : E_(std::move(E)) {
    if (E_.empty()) throw GKError("empty spectrum");
    log_rho_.assign(E_.size(), 0.0);
    theta_.assign(E_.size(), 0.0);
    for (std::size_t n = 1; n < E_.size(); ++n) {
        const double a = std::abs(E_[n]);
        if (a == 0.0) throw GKError("E_" + std::to_string(n) + " = 0 makes rho_n vanish");
        log_rho_[n] = log_rho_[n - 1] + std::log(a);
        theta_[n] = theta_[n - 1] + std::arg(E_[n]);
    }

    for (std::size_t n = 0; n < E_.size() && simple_; ++n)
        for (std::size_t m = n + 1; m < E_.size(); ++m)
            if (std::abs(E_[n] - E_[m]) <= 1e-12 * std::max(1.0, std::abs(E_[n]))) {
                simple_ = false;
                diagnostics_.push_back("degenerate eigenvalue E_" + std::to_string(n) + " = E_" + std::to_string(m));
                break;
            }

    const std::size_t N = E_.size();
    const double last = std::abs(E_[N - 1]);
    if (N < 12) {
        R_ = last;
        R_stable_ = false;
        diagnostics_.push_back("spectrum too short for a reliable estimate of R");
        return;
    }
    const double half = std::abs(E_[(N - 1) / 2]);
    if (last > 1.01 * half) {
        R_ = INFINITY;
        diagnostics_.push_back("|E_n| keeps growing: R taken as infinite");
        return;
    }
    R_ = last;
    double lo = INFINITY, hi = 0.0;
    for (std::size_t n = N - 10; n < N; ++n) {
        lo = std::min(lo, std::abs(E_[n]));
        hi = std::max(hi, std::abs(E_[n]));
    }
    R_stable_ = hi - lo <= 1e-6 * hi;
    if (!R_stable_) diagnostics_.push_back("R estimate not yet stable over the last 10 eigenvalues");
}

Spectrum Spectrum::from_formula(const std::function<cplx(std::size_t)>& E, std::size_t count) {
    std::vector<cplx> v(count);
    for (std::size_t n = 0; n < count; ++n) v[n] = E(n);
    return Spectrum(std::move(v));
}

cplx Spectrum::sqrt_rho(std::size_t n) const {
    return std::polar(std::exp(0.5 * log_rho_.at(n)), 0.5 * theta_.at(n));
}

bool Spectrum::real() const {
    return std::all_of(E_.begin(), E_.end(), [](cplx e) { return e.imag() == 0.0; });
}

SeriesResult inverse_K_squared(const Spectrum& s, double J, double tol) {
    if (J < 0.0) throw GKError("J must be non-negative");
    if (J == 0.0) return {1.0, 1, 0.0};
    const double lJ = std::log(J);
    const auto term = [&](std::size_t n) { return std::exp(static_cast<double>(n) * lJ - s.log_abs_rho(n)); };
    double partial = 0.0;
    return sum_series(
        [&](std::size_t n) {
            const double t = term(n);
            partial += t;
            return cplx{t};
        },
        [&](std::size_t n) -> double {
            if (n + 1 >= s.size()) return INFINITY;
            const double q = J / std::abs(s.E(n + 1));
            if (q >= 1.0) return INFINITY;
            return term(n) * q / (1.0 - q) / std::max(1.0, partial);
        },
        tol, s.size() - 1);
}

double normalization_K(const Spectrum& s, double J) {
    if (J >= s.R()) throw GKDomainError(J, s.R());
    return 1.0 / std::sqrt(inverse_K_squared(s, J).value.real());
}

// ---------------------------------------------------------------------------
// domain

void GKDomain::require(double J) const {
    if (!(J >= 0.0) || !(J < J_min)) throw GKDomainError(J, J_min);
}

namespace {

void fit_growth(const std::vector<double>& norms, double& A, double& r) {
    A = 1.0;
    r = 1.0;
    if (norms.empty()) return;
    if (norms.size() >= 2) {
        double sn = 0, sy = 0, snn = 0, sny = 0;
        const double k = static_cast<double>(norms.size());
        for (std::size_t n = 0; n < norms.size(); ++n) {
            const double y = std::log(norms[n]);
            sn += n;
            sy += y;
            snn += static_cast<double>(n * n);
            sny += n * y;
        }
        const double den = k * snn - sn * sn;
        r = std::exp((k * sny - sn * sy) / den);
    }
    A = 0.0;
    for (std::size_t n = 0; n < norms.size(); ++n) A = std::max(A, norms[n] / std::pow(r, static_cast<double>(n)));
}

}  // namespace

GKDomain gk_domain(const Spectrum& s, const std::vector<double>& phi_norms, const std::vector<double>& psi_norms) {
    GKDomain d;
    d.R = s.R();
    fit_growth(phi_norms, d.A_phi, d.r_phi);
    fit_growth(psi_norms, d.A_psi, d.r_psi);
    d.J_phi = d.M_phi * d.M_phi * d.R / d.r_phi;
    d.J_psi = d.M_psi * d.M_psi * d.R / d.r_psi;
    d.J_min = std::min({d.R, d.J_phi, d.J_psi});

    const std::size_t N = s.size();
    const std::size_t from = N > 11 ? N - 11 : 0;
    for (std::size_t n = from; n + 1 < N; ++n) {
        const double dE = std::abs(s.E(n).imag() - s.E(n + 1).imag());
        if (dE > 1e-8 * std::max(1.0, std::abs(s.E(n)))) d.delta_E_ok = false;
    }
    if (!d.delta_E_ok) {
        d.J_min = 0.0;
        d.diagnostics.push_back("imaginary parts of E_n do not settle (delta E != 0): states not certified");
    }
    for (const auto& msg : s.diagnostics()) d.diagnostics.push_back(msg);
    return d;
}

// ---------------------------------------------------------------------------
// states

std::string to_string(Family f) { return f == Family::phi ? "phi" : "psi"; }

nlohmann::json GKState::to_json() const {
    nlohmann::json j;
    j["family"] = to_string(family);
    j["sector"] = sector;
    j["J"] = J;
    j["gamma"] = gamma;
    j["N"] = N;
    j["K"] = K;
    auto& c = j["coefficients"] = nlohmann::json::array();
    for (const auto& v : coefficients) c.push_back({v.real(), v.imag()});
    j["tail"] = tail;
    return j;
}

namespace {

cplx coefficient(const Spectrum& s, Family f, double lJ, double gamma, std::size_t n, double logK) {
    const cplx E = f == Family::phi ? s.E(n) : std::conj(s.E(n));
    const cplx expo =
        cplx{logK + 0.5 * static_cast<double>(n) * lJ - 0.5 * s.log_abs_rho(n), -0.5 * s.theta(n)} - cplx{0, 1} * E * gamma;
    return std::exp(expo);
}

}  // namespace

std::vector<cplx> gk_coefficients(const Spectrum& s, Family f, double J, double gamma, std::size_t N, double K) {
    if (N > s.size()) throw GKError("spectrum shorter than the requested truncation");
    std::vector<cplx> c(N);
    if (N == 0) return c;
    if (J == 0.0) {
        const cplx E0 = f == Family::phi ? s.E(0) : std::conj(s.E(0));
        c[0] = K * std::exp(-cplx{0, 1} * E0 * gamma);
        return c;
    }
    const double lJ = std::log(J), lK = std::log(K);
    for (std::size_t n = 0; n < N; ++n) c[n] = coefficient(s, f, lJ, gamma, n, lK);
    return c;
}

GKState build_state(const Spectrum& s, const GKDomain& dom, Family f, int sector, double J, double gamma, double tol) {
    dom.require(J);
    GKState st;
    st.family = f;
    st.sector = sector;
    st.J = J;
    st.gamma = gamma;
    st.K = normalization_K(s, J);
    const double A = f == Family::phi ? dom.A_phi : dom.A_psi;
    const double r = f == Family::phi ? dom.r_phi : dom.r_psi;
    if (J == 0.0) {
        st.N = 1;
        st.coefficients = gk_coefficients(s, f, J, gamma, 1, st.K);
        return st;
    }
    const double lJ = std::log(J), lK = std::log(st.K);
    for (std::size_t n = 0; n + 2 < s.size(); ++n) {
        // bound on Σ_{k>n} |c_k| A r^k by a geometric series from k = n+1
        const double next = std::abs(coefficient(s, f, lJ, gamma, n + 1, lK)) * A * std::pow(r, double(n + 1));
        const double growth = std::exp(std::abs(s.E(n + 2).imag() - s.E(n + 1).imag()) * std::abs(gamma));
        const double q = r * std::sqrt(J / std::abs(s.E(n + 2))) * growth;
        if (q < 1.0) {
            const double bound = next / (1.0 - q);
            if (bound < tol) {
                st.N = n + 1;
                st.tail = bound;
                st.coefficients = gk_coefficients(s, f, J, gamma, st.N, st.K);
                return st;
            }
        }
    }
    throw GKError("spectrum too short to reach the truncation tolerance at J = " + format_number(J));
}

GridFunction realize(const GKState& state, const std::vector<GridFunction>& basis) {
    if (basis.size() < state.N)
        throw GKError("basis too short: state needs " + std::to_string(state.N) + " functions, have " +
                      std::to_string(basis.size()));
    GridFunction out(basis.front().grid());
    for (std::size_t n = 0; n < state.N; ++n) out += state.coefficients[n] * basis[n];
    return out;
}

namespace {

void require_partners(const GKState& phi, const GKState& psi) {
    if (phi.family != Family::phi || psi.family != Family::psi) throw GKError("expected a phi state and a psi state");
    if (phi.J != psi.J || phi.gamma != psi.gamma || phi.sector != psi.sector)
        throw GKError("pair parameters differ (J, gamma or sector)");
}

}  // namespace

PairNorm pair_norm(const GKState& phi, const GKState& psi) {
    require_partners(phi, psi);
    PairNorm p;
    const std::size_t N = std::min(phi.N, psi.N);
    for (std::size_t n = 0; n < N; ++n) p.coefficient += std::conj(psi.coefficients[n]) * phi.coefficients[n];
    return p;
}

PairNorm pair_norm(const GKState& phi, const GKState& psi, const std::vector<GridFunction>& phi_basis,
                   const std::vector<GridFunction>& psi_basis) {
    PairNorm p = pair_norm(phi, psi);
    p.quadrature = inner(realize(psi, psi_basis), realize(phi, phi_basis));
    return p;
}

// ---------------------------------------------------------------------------
// moments

std::optional<MomentDensity> moment_density(const Spectrum& s, std::string* diagnostic, double rel_tol) {
    // |ρ_n| = c^n Γ(n+s+1)/Γ(s+1)  <=>  |E_n| = c (n + s) for n >= 1
    const auto fail = [&](const std::string& msg) -> std::optional<MomentDensity> {
        if (diagnostic) *diagnostic = "moment problem unsolved: " + msg;
        return std::nullopt;
    };
    if (s.size() < 3) return fail("spectrum too short to match a pattern");
    const double c = std::abs(s.E(2)) - std::abs(s.E(1));
    if (!(c > 0.0)) return fail("|E_n| is not linear in n; no closed-form density registered");
    const double shift = std::abs(s.E(1)) / c - 1.0;
    if (!(shift > -1.0)) return fail("linear pattern with shift <= -1");
    for (std::size_t n = 1; n < s.size(); ++n) {
        const double want = c * (static_cast<double>(n) + shift);
        if (std::abs(std::abs(s.E(n)) - want) > rel_tol * want)
            return fail("|E_" + std::to_string(n) + "| departs from c (n + s); no closed-form density registered");
    }
    MomentDensity d;
    d.c = c;
    const double lnorm = (shift + 1.0) * std::log(c) + std::lgamma(shift + 1.0);
    if (std::abs(shift) < 1e-12) {
        d.tag = "c^n n!";
        d.rho = [c](double J) { return std::exp(-J / c) / c; };
    } else {
        d.tag = "c^n Gamma(n+s+1)/Gamma(s+1), s = " + format_number(shift);
        d.rho = [c, shift, lnorm](double J) {
            if (J <= 0.0) return shift == 0.0 ? 1.0 / c : 0.0;
            return std::exp(shift * std::log(J) - J / c - lnorm);
        };
    }
    if (diagnostic) diagnostic->clear();
    return d;
}

Report verify_moments(const MomentDensity& d, const Spectrum& s, std::size_t n_max, double rel_tol, double upper) {
    Report r("moments");
    double worst = 0.0;
    for (std::size_t n = 0; n <= n_max && n < s.size(); ++n) {
        const double target = std::exp(s.log_abs_rho(n));
        const auto f = [&](double J) { return std::pow(J, static_cast<double>(n)) * d.rho(J); };
        double value;
        if (std::isinf(upper))
            value = integrate_halfline(f, 1e-3 * rel_tol * target).value;
        else
            value = integrate_adaptive(f, 0.0, upper, 1e-3 * rel_tol * target);
        worst = std::max(worst, std::abs(value - target) / target);
    }
    r.add("moments of " + d.tag + " reproduce |rho_n|", worst, rel_tol);
    if (!std::isinf(upper))
        r.note("finite upper limit " + format_number(upper) + ": closed-form densities are exact only on [0, inf)");
    return r;
}

// ---------------------------------------------------------------------------
// resolution of the identity

ResolutionTrace resolution_estimate(const GridFunction& f, const GridFunction& g,
                                    const std::vector<GridFunction>& phi_basis,
                                    const std::vector<GridFunction>& psi_basis, const Spectrum& s,
                                    const MomentDensity& density,
                                    const std::vector<std::tuple<double, double, std::size_t>>& schedule) {
    ResolutionTrace trace;
    if (!s.multiplicity_one())
        trace.flags.push_back("degenerate spectrum: the resolution of the identity requires simple eigenvalues");

    std::size_t N_max = 0;
    for (const auto& [G, Jm, N] : schedule) N_max = std::max(N_max, N);
    if (phi_basis.size() < N_max || psi_basis.size() < N_max || s.size() < N_max)
        throw GKError("bases or spectrum shorter than the requested truncation");

    std::vector<cplx> a(N_max), b(N_max);
    for (std::size_t n = 0; n < N_max; ++n) {
        a[n] = inner(f, phi_basis[n]);
        b[n] = inner(psi_basis[n], g);
    }
    const cplx target = inner(f, g);

    std::map<double, std::vector<cplx>> gamma_cache;
    std::map<double, std::vector<double>> j_cache;
    const auto gamma_avg = [&](double Gamma) -> const std::vector<cplx>& {
        auto it = gamma_cache.find(Gamma);
        if (it != gamma_cache.end()) return it->second;
        std::vector<cplx> A(N_max * N_max);
        for (std::size_t n = 0; n < N_max; ++n)
            for (std::size_t m = 0; m < N_max; ++m) {
                const cplx w = s.E(m) - s.E(n);  // e^{-iE_nγ} e^{iE_mγ} = e^{i w γ}
                if (std::abs(w) == 0.0) {
                    A[n * N_max + m] = 1.0;
                    continue;
                }
                const double per_period = 64.0;
                const auto intervals = static_cast<std::size_t>(
                    std::max(4096.0, std::ceil(Gamma * std::abs(w.real()) * per_period / M_PI)));
                A[n * N_max + m] = gamma_average([w](double gm) { return std::exp(cplx{0, 1} * w * gm); }, Gamma,
                                                 intervals);
            }
        return gamma_cache.emplace(Gamma, std::move(A)).first->second;
    };
    const auto j_moments = [&](double J_max) -> const std::vector<double>& {
        auto it = j_cache.find(J_max);
        if (it != j_cache.end()) return it->second;
        std::vector<double> I(2 * N_max);
        for (std::size_t k = 0; k + 1 < 2 * N_max; ++k) {
            const double p = 0.5 * static_cast<double>(k);
            const double scale = std::exp(0.5 * (s.log_abs_rho(k / 2) + s.log_abs_rho((k + 1) / 2)));
            I[k] = integrate_adaptive([&](double J) { return std::pow(J, p) * density.rho(J); }, 0.0, J_max,
                                      1e-12 * scale);
        }
        return j_cache.emplace(J_max, std::move(I)).first->second;
    };

    for (const auto& [Gamma, J_max, N] : schedule) {
        const auto& A = gamma_avg(Gamma);
        const auto& I = j_moments(J_max);
        cplx sum{};
        for (std::size_t n = 0; n < N; ++n)
            for (std::size_t m = 0; m < N; ++m) {
                const cplx denom_phase = std::polar(1.0, 0.5 * (s.theta(n) - s.theta(m)));
                const double denom_mag = std::exp(0.5 * (s.log_abs_rho(n) + s.log_abs_rho(m)));
                sum += a[n] * b[m] * A[n * N_max + m] * I[n + m] / (denom_mag * denom_phase);
            }
        trace.points.push_back({Gamma, J_max, N, sum, target, std::abs(sum - target)});
    }
    return trace;
}

void write_trace_csv(std::ostream& os, const ResolutionTrace& t) {
    os << "Gamma,J_max,N,estimate_re,estimate_im,target_re,target_im,error\n";
    for (const auto& p : t.points)
        os << format_number(p.Gamma) << ',' << format_number(p.J_max) << ',' << p.N << ','
           << format_number(p.estimate.real()) << ',' << format_number(p.estimate.imag()) << ','
           << format_number(p.target.real()) << ',' << format_number(p.target.imag()) << ','
           << format_number(p.error) << '\n';
}

void write_K_curve_csv(std::ostream& os, const Spectrum& s, double J_max, std::size_t samples) {
    os << "J,K\n";
    if (samples < 2) samples = 2;
    for (std::size_t i = 0; i < samples; ++i) {
        const double J = J_max * static_cast<double>(i) / static_cast<double>(samples - 1);
        if (J >= s.R()) break;
        os << format_number(J) << ',' << format_number(normalization_K(s, J)) << '\n';
    }
}

// ---------------------------------------------------------------------------
// dynamics and ladder

EvolveResult evolve(const GKState& state, const Spectrum& s, double t) {
    EvolveResult r;
    r.state = state;
    r.state.gamma = state.gamma + t;
    r.state.coefficients = gk_coefficients(s, state.family, state.J, r.state.gamma, state.N, state.K);
    for (std::size_t n = 0; n < state.N; ++n) {
        const cplx E = state.family == Family::phi ? s.E(n) : std::conj(s.E(n));
        const cplx spectral = state.coefficients[n] * std::exp(-cplx{0, 1} * E * t);
        r.mismatch = std::max(r.mismatch, std::abs(spectral - r.state.coefficients[n]));
    }
    return r;
}

namespace {

void require_action_spectrum(const Spectrum& s, std::size_t N) {
    if (std::abs(s.E(0)) > 1e-14) throw GKError("action identity needs E_0 = 0");
    for (std::size_t n = 1; n < N && n < s.size(); ++n)
        if (s.E(n).imag() != 0.0 || !(s.E(n).real() > 0.0))
            throw GKError("action identity needs E_n > 0 for n > 0 (fails at n = " + std::to_string(n) + ")");
}

}  // namespace

ActionResult action_identity(const GKState& phi, const GKState& psi, const Spectrum& s) {
    require_partners(phi, psi);
    const std::size_t N = std::min(phi.N, psi.N);
    require_action_spectrum(s, N);
    ActionResult r;
    for (std::size_t n = 0; n < N; ++n) r.coefficient += std::conj(psi.coefficients[n]) * s.E(n) * phi.coefficients[n];
    return r;
}

ActionResult action_identity(const GKState& phi, const GKState& psi, const Spectrum& s,
                             const std::vector<GridFunction>& phi_basis, const std::vector<GridFunction>& psi_basis,
                             const std::function<GridFunction(const GridFunction&)>& H) {
    ActionResult r = action_identity(phi, psi, s);
    r.quadrature = inner(realize(psi, psi_basis), H(realize(phi, phi_basis)));
    return r;
}

std::vector<cplx> CMatrix::apply(const std::vector<cplx>& v) const {
    if (v.size() != n_) throw GKError("matrix/vector size mismatch");
    std::vector<cplx> out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
    if (o.n_ != n_) throw GKError("matrix size mismatch");
    CMatrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const cplx a = (*this)(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < n_; ++j) r(i, j) += a * o(k, j);
        }
    return r;
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
}

CMatrix lowering_action(const Spectrum& s, double gamma, Family f, std::size_t N) {
    if (N > s.size()) throw GKError("spectrum shorter than the requested truncation");
    CMatrix a(N);
    for (std::size_t n = 1; n < N; ++n) {
        const cplx En = f == Family::phi ? s.E(n) : std::conj(s.E(n));
        const cplx Em = f == Family::phi ? s.E(n - 1) : std::conj(s.E(n - 1));
        a(n - 1, n) = std::sqrt(s.E(n)) * std::exp(cplx{0, 1} * (En - Em) * gamma);
    }
    return a;
}

double lowering_eigen_residual(const Spectrum& s, const GKState& state) {
    const CMatrix a = lowering_action(s, state.gamma, state.family, state.N);
    const auto v = a.apply(state.coefficients);
    const double sJ = std::sqrt(state.J);
    double worst = 0.0;
    for (std::size_t n = 0; n < state.N; ++n) worst = std::max(worst, std::abs(v[n] - sJ * state.coefficients[n]));
    return worst;
}

// ---------------------------------------------------------------------------
// special maps

Report pb_special_maps(const Spectrum& s, const SpecialMapsInput& in, double tol) {
    Report r("special maps");
    const std::size_t N = in.N;
    if (in.alpha.size() < N || in.beta.size() < N || s.size() < N)
        throw GKError("intertwining coefficients shorter than the truncation");
    const auto close = [](cplx a, cplx b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
    bool case1 = true, case2 = true;
    for (std::size_t n = 1; n < N; ++n) {
        case1 = case1 && close(in.alpha[n], s.E(n)) && close(in.beta[n], 1.0);
        case2 = case2 && close(in.alpha[n], 1.0) && close(in.beta[n], s.E(n));
    }
    if (!case1 && !case2) throw GKError("coefficient case mismatch: need alpha_n = E_n, beta_n = 1 or the reverse");
    r.note(case1 ? "case alpha_n = E_n, beta_n = 1" : "case alpha_n = 1, beta_n = E_n");
    if (std::abs(s.E(0)) == 0.0)
        r.note("E_0 = 0: the n = 0 term of i d/dgamma vanishes, the A-image check is degenerate there");

    const double K = normalization_K(s, in.J);
    const auto coeffs = [&](double g) { return gk_coefficients(s, Family::phi, in.J, g, N, K); };
    const double h = 1e-3;
    const auto c = coeffs(in.gamma);
    const auto cp2 = coeffs(in.gamma + 2 * h), cp1 = coeffs(in.gamma + h);
    const auto cm1 = coeffs(in.gamma - h), cm2 = coeffs(in.gamma - 2 * h);
    std::vector<cplx> idc(N);  // i d/dγ c_n by central difference
    double phase_err = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
        idc[n] = cplx{0, 1} * (-cp2[n] + 8.0 * cp1[n] - 8.0 * cm1[n] + cm2[n]) / (12.0 * h);
        phase_err = std::max(phase_err, std::abs(idc[n] - s.E(n) * c[n]));
    }
    r.add("i d/dgamma c_n = E_n c_n", phase_err, 1e-10);

    // coefficient images: A maps φ1 coefficients to α_n c_n in the φ2 basis,
    // B maps φ2 coefficients to β_n c_n in the φ1 basis.
    double eA = 0.0, eB = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
        const cplx A_img = in.alpha[n] * c[n];
        const cplx B_img = in.beta[n] * c[n];
        eA = std::max(eA, std::abs(A_img - (case1 ? idc[n] : c[n])));
        eB = std::max(eB, std::abs(B_img - (case1 ? c[n] : idc[n])));
    }
    r.add(case1 ? "A phi1(J,g) = i d/dg phi2(J,g) [coefficients]" : "A phi1(J,g) = phi2(J,g) [coefficients]", eA,
          tol);
    r.add(case1 ? "B phi2(J,g) = phi1(J,g) [coefficients]" : "B phi2(J,g) = i d/dg phi1(J,g) [coefficients]", eB,
          tol);

    if (in.pair && in.phi1 && in.phi2) {
        if (in.phi1->size() < N || in.phi2->size() < N) throw GKError("bases shorter than the truncation");
        const Grid& g = in.phi1->front().grid();
        GridFunction s1(g), s2(g), d1(g), d2(g);
        for (std::size_t n = 0; n < N; ++n) {
            s1 += c[n] * (*in.phi1)[n];
            s2 += c[n] * (*in.phi2)[n];
            d1 += idc[n] * (*in.phi1)[n];
            d2 += idc[n] * (*in.phi2)[n];
        }
        const GridFunction As1 = apply_A(*in.pair, s1);
        const GridFunction Bs2 = apply_B(*in.pair, s2);
        r.add("A phi1(J,g) on the grid", relative_residual(As1, case1 ? d2 : s2), tol);
        r.add("B phi2(J,g) on the grid", relative_residual(Bs2, case1 ? s1 : d1), tol);
    }
    return r;
}

}  // namespace susyq
