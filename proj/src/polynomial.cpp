#include "susyq/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace susyq {

double hermite(int n, double x) { return hermite(n, cplx{x}).real(); }

cplx hermite(int n, cplx z) {
    if (n < 0) return 0.0;
    cplx prev = 1.0;
    if (n == 0) return prev;
    cplx cur = 2.0 * z;
    for (int k = 1; k < n; ++k) {
        const cplx next = 2.0 * z * cur - 2.0 * static_cast<double>(k) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

cplx hermite_scaled(int n, cplx z) {
    if (n < 0) return 0.0;
    cplx prev = 1.0;
    if (n == 0) return prev;
    cplx cur = std::sqrt(2.0) * z;
    for (int k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const cplx next = std::sqrt(2.0 / (kk + 1.0)) * z * cur - std::sqrt(kk / (kk + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double hermite_function(int n, double x) {
    const double w = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
    return hermite_scaled(n, cplx{x}).real() * w;
}

Polynomial::Polynomial(std::vector<double> coefficients) : c_(std::move(coefficients)) { trim(); }

Polynomial Polynomial::monomial(std::size_t power, double c) {
    std::vector<double> v(power + 1, 0.0);
    v[power] = c;
    return Polynomial(std::move(v));
}

void Polynomial::trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

std::size_t Polynomial::degree() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

double Polynomial::magnitude(double x) const {
    double acc = 0.0;
    const double ax = std::abs(x);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * ax + std::abs(c_[i]);
    return acc;
}

Polynomial Polynomial::derivative(std::size_t order) const {
    std::vector<double> c = c_;
    for (std::size_t o = 0; o < order; ++o) {
        if (c.empty()) break;
        std::vector<double> d(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
        c = std::move(d);
    }
    return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
}

Polynomial operator*(double s, const Polynomial& a) {
    std::vector<double> c = a.c_;
    for (auto& v : c) v *= s;
    return Polynomial(std::move(c));
}

Polynomial pb_monic(std::size_t n, double k) {
    const Polynomial shift({k, 1.0});
    Polynomial q({1.0});
    for (std::size_t i = 1; i <= n; ++i) q = q * shift - q.derivative();
    return q;
}

Polynomial pb_polynomial(std::size_t n, double k) {
    const Polynomial shift({k, 1.0});
    Polynomial p({1.0});
    for (std::size_t i = 1; i <= n; ++i) p = (1.0 / std::sqrt(static_cast<double>(i))) * (p * shift - p.derivative());
    return p;
}

Polynomial gaussian_derivative_factor(std::size_t m, double k) {
    const Polynomial u({k, 1.0});
    Polynomial P({1.0});
    for (std::size_t i = 0; i < m; ++i) P = P.derivative() - u * P;
    return P;
}

}  // namespace susyq
