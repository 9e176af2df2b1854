#pragma once

#include <cstddef>
#include <vector>

#include "susyq/expr.hpp"

namespace susyq {

/// Physicists' Hermite polynomial by H_{n+1} = 2x H_n - 2n H_{n-1}.
[[nodiscard]] double hermite(int n, double x);
[[nodiscard]] cplx hermite(int n, cplx z);

/// H_n(z) / sqrt(2^n n!) by the normalized recurrence (no overflow for large n).
[[nodiscard]] cplx hermite_scaled(int n, cplx z);

/// Orthonormal Hermite function H_n(x) e^{-x²/2} / sqrt(2^n n! √π).
[[nodiscard]] double hermite_function(int n, double x);

/// Dense real polynomial, coefficients in ascending powers.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coefficients);
    static Polynomial monomial(std::size_t power, double c = 1.0);

    std::size_t degree() const noexcept;  // 0 for the zero polynomial
    double coefficient(std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }
    const std::vector<double>& coefficients() const noexcept { return c_; }

    double operator()(double x) const;
    /// Σ |c_i| |x|^i, the natural scale for rounding errors in operator().
    double magnitude(double x) const;

    Polynomial derivative(std::size_t order = 1) const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double s, const Polynomial& a);

private:
    void trim();
    std::vector<double> c_;
};

/// Q_0 = 1, Q_n = Q_{n-1}(x + k) - Q_{n-1}'. Monic with exactly representable
/// coefficients for integer k and moderate n.
[[nodiscard]] Polynomial pb_monic(std::size_t n, double k);

/// p_n = Q_n / sqrt(n!), i.e. p_n = (p_{n-1}(x + k) - p_{n-1}') / sqrt(n).
[[nodiscard]] Polynomial pb_polynomial(std::size_t n, double k);

/// P_0 = 1, P_{m+1} = P_m' - (x + k) P_m, so that
/// d^m/dx^m e^{-x²/2-kx} = P_m(x) e^{-x²/2-kx}.
[[nodiscard]] Polynomial gaussian_derivative_factor(std::size_t m, double k);

}  // namespace susyq
