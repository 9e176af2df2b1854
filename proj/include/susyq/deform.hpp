#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "susyq/expr.hpp"
#include "susyq/numerics.hpp"
#include "susyq/report.hpp"
#include "susyq/susy.hpp"

namespace susyq {

class DeformError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Multiplication operator T = e^{q(x)} applied to the Hermitian SUSY model
/// built from the real superpotential w. The bounds m <= Re q <= M are
/// certified on the grid only.
struct Deformation {
    Expr q, w;
    Grid grid;
    double m = 0.0, M = 0.0;
    bool bound_at_edge = false;  // an extremum sits in the outer 5% of the grid
    std::string certification;   // human-readable statement of the certified region
};

/// Scans Re q on g. Throws DeformError when min Re q <= 0.
[[nodiscard]] Deformation make_deformation(const Expr& q, const Expr& w, const Grid& g);

/// {q, w, bindings}
[[nodiscard]] Deformation deformation_from_json(const nlohmann::json& j, const Grid& g);

/// wA = w - q', wB = w + q'.
[[nodiscard]] SuperpotentialPair deformed_pair(const Deformation& d);

/// Checks the closed forms of V1, V2, 𝒱1, 𝒱2 in terms of w and q at the points.
[[nodiscard]] Report deformed_potential_check(const Deformation& d, const std::vector<double>& points, double tol = 1e-9);

struct DeformedBasis {
    std::vector<GridFunction> phi;  // e^q e_n
    std::vector<GridFunction> psi;  // e^{-conj q} e_n
};

/// Throws DeformError when the base functions are not orthonormal to tol.
[[nodiscard]] DeformedBasis deformed_basis(const Deformation& d, const std::vector<GridFunction>& base,
                                           double tol = 1e-8);

/// Pairing matrix against δ and the norm bounds ‖φ_n‖ <= e^M, ‖ψ_n‖ <= e^{-m}.
[[nodiscard]] Report deformed_basis_check(const Deformation& d, const DeformedBasis& b, double tol = 1e-8);

/// One sector: eigenvalues from the base Hermitian model with their deformed
/// eigenfunctions.
struct DeformedSector {
    std::vector<double> E;
    DeformedBasis basis;
};

/// ‖H_j φ_n - E_n φ_n‖/‖φ_n‖ and ‖H_j† ψ_n - E_n ψ_n‖/‖ψ_n‖ for both sectors.
[[nodiscard]] Report deformed_eigencheck(const Deformation& d, const DeformedSector& sector1,
                                         const DeformedSector& sector2, double tol = 1e-5);

/// max over fs of ‖H1 f - e^q h1(e^{-q} f)‖ / ‖H1 f‖ with h1 = -d² + w² - w'.
[[nodiscard]] double sandwich_residual(const Deformation& d, const std::vector<GridFunction>& fs);

}  // namespace susyq
