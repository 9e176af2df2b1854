#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "susyq/expr.hpp"

namespace susyq {

class NumericsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A sampled expression hit a pole (or ln 0) exactly at a grid point.
class PoleOnGridError : public NumericsError {
public:
    PoleOnGridError(double x, std::size_t index);
    double x() const noexcept { return x_; }
    std::size_t index() const noexcept { return index_; }

private:
    double x_;
    std::size_t index_;
};

class GridMismatchError : public NumericsError {
public:
    GridMismatchError();
};

class ConvergenceError : public NumericsError {
public:
    using NumericsError::NumericsError;
};

/// Uniform grid x_j = -L + j h on [-L, L], h = 2L / (N - 1).
class Grid {
public:
    static constexpr double default_half_width = 12.0;
    static constexpr std::size_t default_count = 4097;

    Grid(double half_width = default_half_width, std::size_t count = default_count);

    double half_width() const noexcept { return half_width_; }
    std::size_t size() const noexcept { return count_; }
    double spacing() const noexcept { return spacing_; }
    double x(std::size_t j) const noexcept { return -half_width_ + static_cast<double>(j) * spacing_; }
    std::vector<double> points() const;

    /// Composite Simpson weights (3/8 rule on the last three intervals when
    /// the interval count is odd).
    const std::vector<double>& weights() const;

    bool operator==(const Grid& other) const noexcept {
        return half_width_ == other.half_width_ && count_ == other.count_;
    }

private:
    double half_width_;
    std::size_t count_;
    double spacing_;
    std::shared_ptr<const std::vector<double>> weights_;
};

class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(Grid grid);
    GridFunction(Grid grid, std::vector<cplx> values);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    cplx operator[](std::size_t j) const { return values_[j]; }
    cplx& operator[](std::size_t j) { return values_[j]; }
    std::span<const cplx> values() const noexcept { return values_; }
    std::span<cplx> values() noexcept { return values_; }

    bool all_finite() const;

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator-=(const GridFunction& o);
    GridFunction& operator*=(cplx s);
    /// Pointwise product.
    GridFunction& operator*=(const GridFunction& o);

    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(GridFunction a, cplx s) { return a *= s; }
    friend GridFunction operator*(cplx s, GridFunction a) { return a *= s; }
    friend GridFunction operator*(GridFunction a, const GridFunction& b) { return a *= b; }

private:
    Grid grid_;
    std::vector<cplx> values_;
};

void require_same_grid(const Grid& a, const Grid& b);

GridFunction sample(const Expr& e, const Grid& g);
GridFunction sample(const std::function<cplx(double)>& f, const Grid& g);
GridFunction conj(GridFunction f);

/// 4th-order central differences in the interior, 4th-order one-sided
/// stencils at the two points nearest each edge. order is 1 or 2.
GridFunction derivative(const GridFunction& f, int order = 1);

/// ∫ conj(f) g dx, conjugate-linear in the first slot.
cplx inner(const GridFunction& f, const GridFunction& g);
double norm(const GridFunction& f);

/// Discrete L2 norm over interior points only (drop points per edge),
/// trapezoid weights. Used for residuals where one-sided stencils are noisy.
double interior_norm(const GridFunction& f, std::size_t drop = 5);

/// Function stored as mantissa(x) * exp(log_scale(x)) so that factors like
/// exp(e^x) can be carried on a grid without overflow.
class ScaledFunction {
public:
    ScaledFunction() = default;
    ScaledFunction(Grid grid, std::vector<cplx> mantissa, std::vector<cplx> log_scale);
    explicit ScaledFunction(const GridFunction& f);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const cplx> mantissa() const noexcept { return mantissa_; }
    std::span<const cplx> log_scale() const noexcept { return log_scale_; }

    cplx value(std::size_t j) const;
    double log_abs(std::size_t j) const;  // log|value|, -inf at zeros
    double max_log_abs() const;

    /// True when every value is a finite double.
    bool representable() const;
    /// Throws NumericsError when not representable().
    GridFunction to_grid_function() const;
    /// f / max|f|, always representable.
    GridFunction rescaled() const;

    ScaledFunction& operator*=(cplx s);
    /// Multiplies the mantissa pointwise.
    ScaledFunction with_mantissa(std::vector<cplx> mantissa) const;

private:
    Grid grid_;
    std::vector<cplx> mantissa_;
    std::vector<cplx> log_scale_;
};

/// ∫ conj(f) g dx with the exponents combined before exponentiation, so the
/// product may be integrable even when f or g alone overflows.
cplx pairing(const ScaledFunction& f, const ScaledFunction& g);
/// Largest |conj(f) g| among the two points at each grid edge, relative to
/// the maximum of the product. Small values mean the truncation is adequate.
double pairing_edge_ratio(const ScaledFunction& f, const ScaledFunction& g);
double norm(const ScaledFunction& f);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double upper_limit = 0.0;
    int panels = 0;
};

/// ∫_0^∞ f with panel doubling [0,1], [1,2], [2,4], ... each panel by
/// adaptive Simpson, stopping once a panel contributes less than tol.
QuadratureResult integrate_halfline(const std::function<double(double)>& f, double tol, int max_doublings = 60);

/// Adaptive Simpson on [a, b] to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol, int max_depth = 50);

/// (1 / 2Γ) ∫_{-Γ}^{Γ} f dγ by composite Simpson with the given interval count (rounded up to even).
cplx gamma_average(const std::function<cplx(double)>& f, double Gamma, std::size_t intervals = 4096);

struct SeriesResult {
    cplx value{};
    std::size_t terms = 0;  // number of terms summed
    double tail = 0.0;      // bound on the neglected remainder
};

/// Sums coeff(0) + coeff(1) + ... until tail_bound(n) < tol, where
/// tail_bound(n) bounds |Σ_{k>n} coeff(k)|.
SeriesResult sum_series(const std::function<cplx(std::size_t)>& coeff,
                        const std::function<double(std::size_t)>& tail_bound, double tol,
                        std::size_t max_terms = 100000);

/// Writes "# {"L":..,"N":..}" then "x,re,im" rows at 17 significant digits.
void write_csv(std::ostream& os, const GridFunction& f);
GridFunction read_csv(std::istream& is);

std::string format_number(double v);

}  // namespace susyq
