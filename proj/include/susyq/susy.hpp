#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "susyq/expr.hpp"
#include "susyq/numerics.hpp"
#include "susyq/report.hpp"

namespace susyq {

/// A = d/dx + wA and B = -d/dx + wB together with the potentials of
/// H1 = BA = -d² + q1 d + V1, H2 = AB = -d² + q1 d + V2 and of the adjoints
/// H1† = -d² - conj(q1) d + 𝒱1, H2† = -d² - conj(q1) d + 𝒱2.
struct SuperpotentialPair {
    Expr wA, wB;
    Expr dwA, dwB;
    Expr q1;
    Expr V1, V2;
    Expr V1_adj, V2_adj;  // 𝒱1, 𝒱2
};

[[nodiscard]] SuperpotentialPair build_pair(const Expr& wA, const Expr& wB);

/// The pair (conj wB, conj wA): its H1, H2 are H1†, H2† of p.
[[nodiscard]] SuperpotentialPair adjoint_pair(const SuperpotentialPair& p);

/// Checks the defining relations at `points` (poles skipped) using central
/// differences of wA, wB rather than the stored symbolic derivatives.
[[nodiscard]] Report check_pair(const SuperpotentialPair& p, const std::vector<double>& points, double tol = 1e-6);

/// Deterministic pseudo-random points in [-half_width, half_width].
[[nodiscard]] std::vector<double> test_points(std::size_t count, double half_width, unsigned seed = 12345);

/// A pair with every field sampled on one grid. Throws PoleOnGridError.
class SampledPair {
public:
    SampledPair(const SuperpotentialPair& p, const Grid& g);

    const Grid& grid() const noexcept { return grid_; }
    const SuperpotentialPair& symbolic() const noexcept { return pair_; }

    GridFunction wA, wB, dwA, dwB, q1, V1, V2, V1_adj, V2_adj;

private:
    SuperpotentialPair pair_;
    Grid grid_;
};

[[nodiscard]] GridFunction apply_A(const SampledPair& p, const GridFunction& f);
[[nodiscard]] GridFunction apply_B(const SampledPair& p, const GridFunction& f);
[[nodiscard]] GridFunction apply_A_dag(const SampledPair& p, const GridFunction& f);
[[nodiscard]] GridFunction apply_B_dag(const SampledPair& p, const GridFunction& f);

/// Second-order appliers built from the closed-form potentials.
[[nodiscard]] GridFunction apply_H1(const SampledPair& p, const GridFunction& f);
[[nodiscard]] GridFunction apply_H2(const SampledPair& p, const GridFunction& f);
[[nodiscard]] GridFunction apply_H1_dag(const SampledPair& p, const GridFunction& f);
[[nodiscard]] GridFunction apply_H2_dag(const SampledPair& p, const GridFunction& f);

/// ‖a - b‖ / ‖b‖ over the grid interior (5 points dropped per edge);
/// falls back to the absolute difference when b vanishes.
[[nodiscard]] double relative_residual(const GridFunction& a, const GridFunction& b);

// ---------------------------------------------------------------------------
// vacua

enum class Normalization { unit_l2, pair, raw };

/// Closed-form ∫wA, ∫wB (any constant), used instead of cumulative quadrature
/// when the superpotentials have poles between 0 and the grid edges.
struct Antiderivatives {
    Expr int_wA, int_wB;
    std::vector<double> singular_points;
};

struct Vacuum {
    std::string name;
    ScaledFunction f;
    double exponent_left = 0.0;   // slope of log|f| in the outward direction, x -> -∞
    double exponent_right = 0.0;  // x -> +∞
    bool in_l2 = false;
    bool finite_on_grid = true;   // every value representable as a double
    bool interior_singularity = false;
    double residual = 0.0;        // relative annihilation residual
};

struct Vacua {
    Vacuum phi1, phi2, psi1, psi2;  // killed by A, B, B†, A†
    std::vector<std::string> notes;

    const Vacuum& operator[](std::size_t i) const;
};

inline constexpr double l2_exponent_margin = 0.05;

[[nodiscard]] Vacua vacua(const SuperpotentialPair& p, const Grid& g, Normalization policy = Normalization::unit_l2,
                          const std::optional<Antiderivatives>& closed_form = std::nullopt);

/// Least-squares slopes of log|f| over the outer fraction of the grid, each
/// measured in the outward direction.
[[nodiscard]] std::pair<double, double> asymptotic_exponents(const ScaledFunction& f, double fraction = 0.2);

// ---------------------------------------------------------------------------
// intertwining and superalgebra

struct EigenPair {
    cplx E;
    GridFunction f;
};

struct IntertwineRow {
    std::size_t n = 0;
    cplx E{};
    cplx alpha{}, beta{};
    double alpha_residual = 0.0;  // ‖Aφ1 - αφ2‖ / ‖Aφ1‖
    double beta_residual = 0.0;
    double product_error = 0.0;   // |αβ - E|
    double dual_residual = 0.0;   // dual relations on the ψ families, 0 when not supplied
    bool skipped = false;         // E = 0, no partner required
};

struct IntertwineResult {
    std::vector<IntertwineRow> rows;
    Report report;
};

/// Pairs sector-1 and sector-2 eigenfunctions by energy, extracts α, β and
/// checks αβ = E. psi1/psi2 (may be empty) add B†ψ1 = conj(β)ψ2 and
/// A†ψ2 = conj(α)ψ1.
[[nodiscard]] IntertwineResult intertwine_check(const SampledPair& p, const std::vector<EigenPair>& sector1,
                                                const std::vector<EigenPair>& sector2, double tol,
                                                const std::vector<EigenPair>& psi1 = {},
                                                const std::vector<EigenPair>& psi2 = {});

/// Two-component vector (upper = sector 1, lower = sector 2).
struct BlockVector {
    GridFunction upper, lower;
};

/// 2x2 operator matrix whose absent entries are structural zeros.
class BlockOp {
public:
    using Entry = std::function<GridFunction(const GridFunction&)>;

    BlockOp() = default;
    BlockOp(Entry a11, Entry a12, Entry a21, Entry a22);

    bool structurally_zero() const;
    bool has(int i, int j) const { return static_cast<bool>(e_[i][j]); }
    BlockVector operator()(const BlockVector& v) const;

    friend BlockOp operator*(const BlockOp& x, const BlockOp& y);
    friend BlockOp operator+(const BlockOp& x, const BlockOp& y);
    friend BlockOp operator-(const BlockOp& x, const BlockOp& y);

private:
    Entry e_[2][2];
};

struct SuperalgebraOps {
    BlockOp H, H_dag, QA, QB, QA_dag, QB_dag;
};

[[nodiscard]] SuperalgebraOps superalgebra_ops(const SampledPair& p);

/// One eigen-doublet: φ̃±, ψ̃± built from the sector eigenfunctions with the
/// extracted intertwining coefficients.
struct Doublet {
    cplx E{};
    GridFunction phi1, phi2, psi1, psi2;
    cplx alpha{}, beta{};
};

[[nodiscard]] Report superalgebra_check(const SampledPair& p, const std::vector<BlockVector>& test_vectors,
                                        const std::vector<Doublet>& doublets, double tol);

}  // namespace susyq
