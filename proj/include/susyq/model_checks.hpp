#pragma once

#include <optional>
#include <vector>

#include "susyq/models.hpp"
#include "susyq/numerics.hpp"
#include "susyq/report.hpp"
#include "susyq/susy.hpp"

namespace susyq {

/// A ScaledFunction rescaled to the part of the grid where finite
/// differences resolve it: mask marks points whose stencils see only
/// resolved or negligible values.
struct ResolvedView {
    GridFunction f;
    std::vector<bool> mask;
    double resolved_fraction = 1.0;
};

[[nodiscard]] ResolvedView resolved_view(const ScaledFunction& f, double max_step = 0.01);

/// ‖a - b‖ / ‖b‖ over masked points (trapezoid weights), or ‖a - b‖ when b vanishes there.
[[nodiscard]] double masked_residual(const GridFunction& a, const GridFunction& b, const std::vector<bool>& mask);
[[nodiscard]] double masked_norm(const GridFunction& f, const std::vector<bool>& mask);

/// Interior points farther than `radius` from every singular point.
[[nodiscard]] std::vector<bool> away_mask(const Grid& g, const std::vector<double>& singular, double radius,
                                          std::size_t edge = 5);

/// Smooth complex Gaussian-type functions whose centres keep a distance of
/// at least 4 from the singular points.
[[nodiscard]] std::vector<GridFunction> smooth_test_functions(const Grid& g, std::size_t count, unsigned seed,
                                                              const std::vector<double>& singular = {});

/// V2 - V1 = wA' + wB', BA = H1, AB = H2, [A,B] = wA' + wB', adjoint pairings.
[[nodiscard]] Report factorization_check(const SampledPair& p, const std::vector<double>& singular, double tol = 1e-5);

/// Annihilation residuals, L2 classification and the vacuum duality.
[[nodiscard]] Report vacua_check(const SuperpotentialPair& p, const Grid& g, Normalization policy,
                                 const std::optional<Antiderivatives>& closed_form, Vacua* out = nullptr);

/// Sector eigen-residuals for n < m.eigen_count (tol 1e-5) plus the extra Hamiltonian.
[[nodiscard]] Report eigen_check(const ModelRecord& m, const SampledPair& p, double tol = 1e-5);

/// max |<ψ_n, φ_m> - δ_nm| for n, m < count with the product edge ratio.
[[nodiscard]] Report biorthogonality_check(const ModelRecord& m, const Grid& g, std::size_t count, double tol);

/// Intertwining coefficients and, when ψ families are representable, the superalgebra.
[[nodiscard]] Report intertwining_check(const ModelRecord& m, const SampledPair& p, double tol = 1e-5);

/// Pair norm, evolution, lowering operator, action identity and moments for sector 1.
[[nodiscard]] Report gk_model_check(const ModelRecord& m, const SampledPair& p);

/// wB - wA = 1 - r, V1 = r away from the pole and, at r = -1, V2 = 2/(x - v0)^2 - 1.
[[nodiscard]] Report bs_assembly_check(double r, double v0, const Grid& g);

/// The pseudo-bosonic recursion with s(x) = sin x in place of e^x.
[[nodiscard]] Report generality_check(double k, const Grid& g);

/// Everything applicable to a bare pair (no eigendata).
[[nodiscard]] Report verify_pair(const SuperpotentialPair& p, const Grid& g,
                                 const std::optional<Antiderivatives>& closed_form = std::nullopt,
                                 Normalization policy = Normalization::unit_l2);

struct VerifyOptions {
    bool gk = true;
};

/// Full suite for one registered model. Throws PoleOnGridError when the pair
/// cannot be sampled on g.
[[nodiscard]] Report verify_model(const ModelRecord& m, const Grid& g, const VerifyOptions& opt = {});

}  // namespace susyq
