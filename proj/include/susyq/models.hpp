#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "susyq/expr.hpp"
#include "susyq/numerics.hpp"
#include "susyq/polynomial.hpp"
#include "susyq/report.hpp"
#include "susyq/susy.hpp"

namespace susyq {

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelParameter {
    std::string name;
    std::string description;
    cplx default_value;
    bool complex_allowed = false;
};

/// Eigenfunction generator for one family, indexed from 0 within its sector.
using FamilyGenerator = std::function<ScaledFunction(std::size_t n, const Grid& g)>;

/// One worked example: superpotentials, spectra and eigenfunction generators.
/// Sector 2 is indexed naturally from 0 (its lowest eigenvalue first);
/// intertwining partners are matched by energy, not by index.
struct ModelRecord {
    std::string name;
    Bindings parameters;
    SuperpotentialPair pair;
    std::optional<Antiderivatives> antiderivatives;
    Normalization vacuum_normalization = Normalization::unit_l2;

    std::function<cplx(std::size_t)> energy1, energy2;  // empty when no eigendata
    FamilyGenerator phi1, psi1, phi2, psi2;
    /// Spectrum used for GK states of sector 1 when it differs from energy1
    /// (Swanson: the eigenvalues of H_θ rather than of the factorized BA).
    std::function<cplx(std::size_t)> gk_energy1;
    /// Sector-2 GK states need an explicitly shifted spectrum.
    bool sector2_shifted = false;

    /// Extra applier for a model Hamiltonian outside the factorized pair.
    std::function<GridFunction(const GridFunction&)> extra_hamiltonian, extra_hamiltonian_dag;
    std::string extra_hamiltonian_name;

    /// (q, w) when the pair comes from a bounded deformation of w.
    std::optional<std::pair<Expr, Expr>> deformation;

    /// Pairing tolerance for the biorthogonality matrix.
    double biorthogonality_tol = 1e-8;
    std::size_t eigen_count = 9;  // n = 0..8 checked by default
    std::vector<std::string> notes;

    bool has_eigendata() const { return static_cast<bool>(energy1); }
};

[[nodiscard]] std::vector<std::string> model_names();
[[nodiscard]] std::vector<ModelParameter> model_parameters(const std::string& name);
/// {name, parameters: [{name, description, default, complex}]}
[[nodiscard]] nlohmann::json model_schema(const std::string& name);

/// Throws ModelError for unknown names, unknown parameters or invalid values.
[[nodiscard]] ModelRecord make_model(const std::string& name, const Bindings& bindings = {});

[[nodiscard]] ModelRecord harmonic_model();
/// q = a tanh(x) + c + i b sin(x) applied to w = x.
[[nodiscard]] ModelRecord deformed_harmonic_model(double a = 0.5, double c = 0.6, double b = 0.3);

enum class SwansonNormalization { pairing, as_printed };
/// θ in (-π/4, π/4) \ {0}. pairing: N1 conj(N2) = e^{iθ}/√π, which makes
/// <Ψ_n, φ_m> = δ; as_printed: N1 conj(N2) = e^{-iθ}/√π.
[[nodiscard]] ModelRecord swanson_model(double theta, SwansonNormalization norm = SwansonNormalization::pairing);
/// (-e^{-2iθ} f'' + e^{2iθ} x² f) / (2 cos 2θ)
[[nodiscard]] GridFunction apply_swanson_hamiltonian(double theta, const GridFunction& f);

[[nodiscard]] ModelRecord black_scholes_model(double r, double v0);
/// log((r+1) v0)/(r+1) for r > -1, v0 for r = -1, none for r < -1.
[[nodiscard]] std::optional<double> black_scholes_pole(double r, double v0);

/// wA = k + s(x), wB = x - s(x); s = e^x gives the standard pseudo-bosonic pair.
[[nodiscard]] ModelRecord pseudo_bosonic_model(double k);
/// s must be e^x or sin(x), whose antiderivatives are registered.
[[nodiscard]] ModelRecord pseudo_bosonic_variant(double k, const Expr& s, const std::string& label);
/// Same with an explicit antiderivative S' = s.
[[nodiscard]] ModelRecord pseudo_bosonic_variant(double k, const Expr& s, const Expr& S, const std::string& label);

/// Samples one family member as an ordinary GridFunction (throws on overflow).
[[nodiscard]] GridFunction generate(const FamilyGenerator& gen, std::size_t n, const Grid& g);

// ---------------------------------------------------------------------------
// Black-Scholes classification

struct VacuumFlags {
    bool phi1 = false, phi2 = false, psi1 = false, psi2 = false;
    bool operator==(const VacuumFlags&) const = default;
    std::string str() const;
};

/// The analytic case table: r > 0 -> (F, T, F, T), otherwise all F.
[[nodiscard]] VacuumFlags bs_classification(double r);

struct BsClassificationRow {
    double r = 0.0;
    VacuumFlags analytic, numeric;
    bool agree = false;
    std::vector<std::string> notes;  // interior singularities and the like
};

/// Analytic table next to the asymptotic-exponent classifier on g.
[[nodiscard]] BsClassificationRow bs_classify(double r, double v0, const Grid& g);

// ---------------------------------------------------------------------------
// pseudo-bosonic identities

/// Rodrigues-type formula, d^n p_n = sqrt(n!), the Hermite closed form with
/// both prefactors, and the restricted resolution of the identity.
[[nodiscard]] Report pb_identities(double k, std::size_t n_max, const Grid& g);

}  // namespace susyq
