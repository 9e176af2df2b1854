#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "susyq/numerics.hpp"
#include "susyq/report.hpp"
#include "susyq/susy.hpp"

namespace susyq {

class GKError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested J is outside [0, J_min).
class GKDomainError : public GKError {
public:
    GKDomainError(double J, double J_min);
    double J() const noexcept { return J_; }
    double J_min() const noexcept { return J_min_; }

private:
    double J_, J_min_;
};

/// Eigenvalues E_0, E_1, ... with ρ_0 = 1, ρ_n = E_1···E_n kept as log|ρ_n|
/// and the accumulated argument θ_n = Σ arg E_k, so √ρ_n = |ρ_n|^{1/2} e^{iθ_n/2}.
class Spectrum {
public:
    /// Throws GKError when some E_n (n >= 1) vanishes.
    explicit Spectrum(std::vector<cplx> E);
    static Spectrum from_formula(const std::function<cplx(std::size_t)>& E, std::size_t count = 2000);

    std::size_t size() const noexcept { return E_.size(); }
    cplx E(std::size_t n) const { return E_.at(n); }
    const std::vector<cplx>& energies() const noexcept { return E_; }
    double log_abs_rho(std::size_t n) const { return log_rho_.at(n); }
    double theta(std::size_t n) const { return theta_.at(n); }
    /// √ρ_n; may overflow for large n, prefer log_abs_rho/theta.
    cplx sqrt_rho(std::size_t n) const;

    /// lim |E_n| estimated from the tail, infinity when |E_n| keeps growing.
    double R() const noexcept { return R_; }
    bool R_stable() const noexcept { return R_stable_; }
    bool multiplicity_one() const noexcept { return simple_; }
    bool real() const;
    std::vector<std::string> diagnostics() const { return diagnostics_; }

private:
    std::vector<cplx> E_;
    std::vector<double> log_rho_, theta_;
    double R_ = 0.0;
    bool R_stable_ = true;
    bool simple_ = true;
    std::vector<std::string> diagnostics_;
};

/// Σ_n J^n / |ρ_n| summed until the ratio-test tail bound drops below tol.
[[nodiscard]] SeriesResult inverse_K_squared(const Spectrum& s, double J, double tol = 1e-16);

/// (Σ J^n / |ρ_n|)^{-1/2}. Throws GKDomainError when J >= R.
[[nodiscard]] double normalization_K(const Spectrum& s, double J);

/// Growth bounds ‖v_n‖ <= A r^n M_n with M_n = 1, and the resulting domain.
struct GKDomain {
    double R = 0.0;
    double A_phi = 1.0, r_phi = 1.0, A_psi = 1.0, r_psi = 1.0;
    double M_phi = 1.0, M_psi = 1.0;  // lim M_n / M_{n+1}
    double J_phi = INFINITY, J_psi = INFINITY, J_min = INFINITY;
    bool delta_E_ok = true;
    std::vector<std::string> diagnostics;

    void require(double J) const;
};

/// Fits the growth constants from measured norms (either list may be empty,
/// in which case A = r = 1 is assumed) and checks δE = 0 on the spectrum tail.
[[nodiscard]] GKDomain gk_domain(const Spectrum& s, const std::vector<double>& phi_norms = {},
                                 const std::vector<double>& psi_norms = {});

enum class Family { phi, psi };

std::string to_string(Family f);

struct GKState {
    Family family = Family::phi;
    int sector = 1;
    double J = 0.0;
    double gamma = 0.0;
    std::size_t N = 0;  // number of retained terms
    std::vector<cplx> coefficients;
    double tail = 0.0;
    double K = 1.0;

    nlohmann::json to_json() const;
};

/// c_n = K J^{n/2} e^{-iE_nγ} / √ρ_n (φ) or with conj(E_n) in the phase (ψ), n < N.
[[nodiscard]] std::vector<cplx> gk_coefficients(const Spectrum& s, Family f, double J, double gamma, std::size_t N,
                                                double K);

/// Truncates where the bound on Σ_{n>=N} |c_n| A r^n drops below tol.
[[nodiscard]] GKState build_state(const Spectrum& s, const GKDomain& dom, Family f, int sector, double J, double gamma,
                                  double tol = 1e-12);

/// Σ c_n v_n. Throws GKError when the basis is shorter than state.N.
[[nodiscard]] GridFunction realize(const GKState& state, const std::vector<GridFunction>& basis);

struct PairNorm {
    cplx coefficient{};             // Σ conj(d_n) c_n using biorthogonality
    std::optional<cplx> quadrature;  // <ψ(J,γ), φ(J,γ)> on the grid
};

[[nodiscard]] PairNorm pair_norm(const GKState& phi, const GKState& psi);
[[nodiscard]] PairNorm pair_norm(const GKState& phi, const GKState& psi, const std::vector<GridFunction>& phi_basis,
                                 const std::vector<GridFunction>& psi_basis);

// ---------------------------------------------------------------------------
// moment problem and resolution of the identity

struct MomentDensity {
    std::string tag;  // e.g. "c^n n!"
    double c = 1.0;
    std::function<double(double)> rho;
};

/// Registry lookup on |ρ_n|. Returns nullopt and fills diagnostic when no
/// closed form is known.
[[nodiscard]] std::optional<MomentDensity> moment_density(const Spectrum& s, std::string* diagnostic = nullptr,
                                                          double rel_tol = 1e-10);

/// ∫_0^{upper} J^n ρ(J) dJ against |ρ_n| for n <= n_max (upper = ∞ by default).
[[nodiscard]] Report verify_moments(const MomentDensity& d, const Spectrum& s, std::size_t n_max = 10,
                                    double rel_tol = 1e-8, double upper = INFINITY);

struct ResolutionPoint {
    double Gamma = 0.0;
    double J_max = 0.0;
    std::size_t N = 0;
    cplx estimate{};
    cplx target{};
    double error = 0.0;  // |estimate - target|
};

struct ResolutionTrace {
    std::vector<ResolutionPoint> points;
    std::vector<std::string> flags;
};

/// ∫ dν(J,γ) <f, φ(J,γ)><ψ(J,γ), g> over [0, J_max] × [-Γ, Γ] truncated at N
/// terms, for each requested (Γ, J_max, N). dν = K^{-2} ρ(J) dJ (γ-average).
[[nodiscard]] ResolutionTrace resolution_estimate(const GridFunction& f, const GridFunction& g,
                                                  const std::vector<GridFunction>& phi_basis,
                                                  const std::vector<GridFunction>& psi_basis, const Spectrum& s,
                                                  const MomentDensity& density,
                                                  const std::vector<std::tuple<double, double, std::size_t>>& schedule);

void write_trace_csv(std::ostream& os, const ResolutionTrace& t);
/// J, K(J) rows over [0, J_max] at `samples` points.
void write_K_curve_csv(std::ostream& os, const Spectrum& s, double J_max, std::size_t samples);

// ---------------------------------------------------------------------------
// dynamics, action identity, lowering operators

struct EvolveResult {
    GKState state;         // γ -> γ + t
    double mismatch = 0.0;  // max |c_n(γ+t) - c_n(γ) e^{-iE_n t}|
};

[[nodiscard]] EvolveResult evolve(const GKState& state, const Spectrum& s, double t);

struct ActionResult {
    cplx coefficient{};
    std::optional<cplx> quadrature;
};

/// <ψ(J,γ), H φ(J,γ)>. Throws GKError unless E_0 = 0 and E_n > 0 for n > 0.
[[nodiscard]] ActionResult action_identity(const GKState& phi, const GKState& psi, const Spectrum& s);
[[nodiscard]] ActionResult action_identity(const GKState& phi, const GKState& psi, const Spectrum& s,
                                           const std::vector<GridFunction>& phi_basis,
                                           const std::vector<GridFunction>& psi_basis,
                                           const std::function<GridFunction(const GridFunction&)>& H);

/// Dense square complex matrix, row-major.
class CMatrix {
public:
    explicit CMatrix(std::size_t n = 0) : n_(n), a_(n * n) {}
    std::size_t size() const noexcept { return n_; }
    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    cplx operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    std::vector<cplx> apply(const std::vector<cplx>& v) const;
    CMatrix operator*(const CMatrix& o) const;
    double max_abs() const;

private:
    std::size_t n_;
    std::vector<cplx> a_;
};

/// (a)_{n-1,n} = √E_n e^{i(E_n - E_{n-1})γ}; the ψ family uses conjugated
/// energies in the phase only.
[[nodiscard]] CMatrix lowering_action(const Spectrum& s, double gamma, Family f, std::size_t N);

/// max_n |(a c)_n - √J c_n| on the truncated coefficient vector.
[[nodiscard]] double lowering_eigen_residual(const Spectrum& s, const GKState& state);

/// Checks the special intertwining maps (α_n = E_n, β_n = 1 or the reverse)
/// at the coefficient level, and on the grid when bases and a pair are given.
struct SpecialMapsInput {
    std::vector<cplx> alpha, beta;  // indexed like the spectrum
    double J = 1.0, gamma = 0.0;
    std::size_t N = 20;
    const SampledPair* pair = nullptr;
    const std::vector<GridFunction>* phi1 = nullptr;
    const std::vector<GridFunction>* phi2 = nullptr;
};

[[nodiscard]] Report pb_special_maps(const Spectrum& s, const SpecialMapsInput& in, double tol = 1e-8);

}  // namespace susyq
