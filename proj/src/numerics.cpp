#include "susyq/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace susyq {

PoleOnGridError::PoleOnGridError(double x, std::size_t index)
    : NumericsError("pole on grid at x = " + format_number(x) + " (index " + std::to_string(index) + ")"),
      x_(x),
      index_(index) {}

GridMismatchError::GridMismatchError() : NumericsError("grid functions live on different grids") {}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Grid

namespace {

std::vector<double> simpson_weights(std::size_t n_points, double h) {
    std::vector<double> w(n_points, 0.0);
    const std::size_t intervals = n_points - 1;
    const std::size_t simpson_intervals = intervals % 2 == 0 ? intervals : intervals - 3;
    for (std::size_t j = 0; j + 2 <= simpson_intervals; j += 2) {
        w[j] += h / 3.0;
        w[j + 1] += 4.0 * h / 3.0;
        w[j + 2] += h / 3.0;
    }
    if (simpson_intervals != intervals) {
        const std::size_t j = simpson_intervals;
        w[j] += 3.0 * h / 8.0;
        w[j + 1] += 9.0 * h / 8.0;
        w[j + 2] += 9.0 * h / 8.0;
        w[j + 3] += 3.0 * h / 8.0;
    }
    return w;
}

}  // namespace

Grid::Grid(double half_width, std::size_t count) : half_width_(half_width), count_(count) {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) throw NumericsError("grid half-width must be positive");
    if (count < 16) throw NumericsError("grid needs at least 16 points");
    spacing_ = 2.0 * half_width / static_cast<double>(count - 1);
    weights_ = std::make_shared<const std::vector<double>>(simpson_weights(count, spacing_));
}

std::vector<double> Grid::points() const {
    std::vector<double> xs(count_);
    for (std::size_t j = 0; j < count_; ++j) xs[j] = x(j);
    return xs;
}

const std::vector<double>& Grid::weights() const { return *weights_; }

void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw GridMismatchError();
}

// ---------------------------------------------------------------------------
// GridFunction

GridFunction::GridFunction(Grid grid) : grid_(grid), values_(grid.size()) {}

GridFunction::GridFunction(Grid grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw NumericsError("value count does not match grid size");
}

bool GridFunction::all_finite() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= o.values_[j];
    return *this;
}

GridFunction& GridFunction::operator*=(cplx s) {
    for (auto& v : values_) v *= s;
    return *this;
}

GridFunction& GridFunction::operator*=(const GridFunction& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] *= o.values_[j];
    return *this;
}

GridFunction sample(const Expr& e, const Grid& g) {
    std::vector<cplx> v(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.x(j);
        try {
            v[j] = e(x);
        } catch (const PoleError&) {
            throw PoleOnGridError(x, j);
        } catch (const DomainError&) {
            throw PoleOnGridError(x, j);
        }
    }
    return GridFunction(g, std::move(v));
}

GridFunction sample(const std::function<cplx(double)>& f, const Grid& g) {
    std::vector<cplx> v(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) v[j] = f(g.x(j));
    return GridFunction(g, std::move(v));
}

GridFunction conj(GridFunction f) {
    for (auto& v : f.values()) v = std::conj(v);
    return f;
}

GridFunction derivative(const GridFunction& f, int order) {
    if (order != 1 && order != 2) throw NumericsError("derivative order must be 1 or 2");
    const std::size_t n = f.size();
    if (n < 6) throw NumericsError("derivative needs at least 6 points");
    const double h = f.grid().spacing();
    auto v = f.values();
    GridFunction out(f.grid());
    auto d = out.values();

    if (order == 1) {
        const double s = 1.0 / (12.0 * h);
        for (std::size_t j = 2; j + 2 < n; ++j) d[j] = (v[j - 2] - 8.0 * v[j - 1] + 8.0 * v[j + 1] - v[j + 2]) * s;
        d[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) * s;
        d[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) * s;
        d[n - 1] = -(-25.0 * v[n - 1] + 48.0 * v[n - 2] - 36.0 * v[n - 3] + 16.0 * v[n - 4] - 3.0 * v[n - 5]) * s;
        d[n - 2] = -(-3.0 * v[n - 1] - 10.0 * v[n - 2] + 18.0 * v[n - 3] - 6.0 * v[n - 4] + v[n - 5]) * s;
    } else {
        const double s = 1.0 / (12.0 * h * h);
        for (std::size_t j = 2; j + 2 < n; ++j)
            d[j] = (-v[j - 2] + 16.0 * v[j - 1] - 30.0 * v[j] + 16.0 * v[j + 1] - v[j + 2]) * s;
        d[0] = (45.0 * v[0] - 154.0 * v[1] + 214.0 * v[2] - 156.0 * v[3] + 61.0 * v[4] - 10.0 * v[5]) * s;
        d[1] = (10.0 * v[0] - 15.0 * v[1] - 4.0 * v[2] + 14.0 * v[3] - 6.0 * v[4] + v[5]) * s;
        d[n - 1] = (45.0 * v[n - 1] - 154.0 * v[n - 2] + 214.0 * v[n - 3] - 156.0 * v[n - 4] + 61.0 * v[n - 5] -
                    10.0 * v[n - 6]) * s;
        d[n - 2] = (10.0 * v[n - 1] - 15.0 * v[n - 2] - 4.0 * v[n - 3] + 14.0 * v[n - 4] - 6.0 * v[n - 5] + v[n - 6]) * s;
    }
    return out;
}

cplx inner(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f.grid(), g.grid());
    const auto& w = f.grid().weights();
    cplx acc{};
    for (std::size_t j = 0; j < f.size(); ++j) acc += w[j] * std::conj(f[j]) * g[j];
    return acc;
}

double norm(const GridFunction& f) { return std::sqrt(std::max(0.0, inner(f, f).real())); }

double interior_norm(const GridFunction& f, std::size_t drop) {
    const double h = f.grid().spacing();
    double acc = 0.0;
    for (std::size_t j = drop; j + drop < f.size(); ++j) acc += std::norm(f[j]);
    return std::sqrt(acc * h);
}

// ---------------------------------------------------------------------------
// ScaledFunction

ScaledFunction::ScaledFunction(Grid grid, std::vector<cplx> mantissa, std::vector<cplx> log_scale)
    : grid_(grid), mantissa_(std::move(mantissa)), log_scale_(std::move(log_scale)) {
    if (mantissa_.size() != grid_.size() || log_scale_.size() != grid_.size())
        throw NumericsError("scaled function size does not match grid");
}

ScaledFunction::ScaledFunction(const GridFunction& f)
    : grid_(f.grid()), mantissa_(f.values().begin(), f.values().end()), log_scale_(f.size(), cplx{}) {}

cplx ScaledFunction::value(std::size_t j) const { return mantissa_[j] * std::exp(log_scale_[j]); }

double ScaledFunction::log_abs(std::size_t j) const {
    const double m = std::abs(mantissa_[j]);
    if (m == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(m) + log_scale_[j].real();
}

double ScaledFunction::max_log_abs() const {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < mantissa_.size(); ++j) {
        const double l = log_abs(j);
        if (!std::isnan(l)) best = std::max(best, l);
    }
    return best;
}

bool ScaledFunction::representable() const {
    for (std::size_t j = 0; j < mantissa_.size(); ++j) {
        const cplx v = value(j);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

GridFunction ScaledFunction::to_grid_function() const {
    std::vector<cplx> v(mantissa_.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = value(j);
        if (!std::isfinite(v[j].real()) || !std::isfinite(v[j].imag()))
            throw NumericsError("function overflows at x = " + format_number(grid_.x(j)));
    }
    return GridFunction(grid_, std::move(v));
}

GridFunction ScaledFunction::rescaled() const {
    const double top = max_log_abs();
    std::vector<cplx> v(mantissa_.size());
    if (!std::isfinite(top)) return GridFunction(grid_, std::move(v));
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = mantissa_[j] * std::exp(log_scale_[j] - top);
    return GridFunction(grid_, std::move(v));
}

ScaledFunction& ScaledFunction::operator*=(cplx s) {
    if (s == 0.0) {
        std::fill(mantissa_.begin(), mantissa_.end(), cplx{});
        return *this;
    }
    const cplx l = std::log(s);
    for (auto& v : log_scale_) v += l;
    return *this;
}

ScaledFunction ScaledFunction::with_mantissa(std::vector<cplx> mantissa) const {
    if (mantissa.size() != mantissa_.size()) throw NumericsError("mantissa size mismatch");
    for (std::size_t j = 0; j < mantissa.size(); ++j) mantissa[j] *= mantissa_[j];
    return ScaledFunction(grid_, std::move(mantissa), log_scale_);
}

cplx pairing(const ScaledFunction& f, const ScaledFunction& g) {
    require_same_grid(f.grid(), g.grid());
    const auto& w = f.grid().weights();
    auto fm = f.mantissa();
    auto fl = f.log_scale();
    auto gm = g.mantissa();
    auto gl = g.log_scale();
    cplx acc{};
    for (std::size_t j = 0; j < w.size(); ++j) {
        const cplx m = std::conj(fm[j]) * gm[j];
        if (m == 0.0) continue;
        acc += w[j] * m * std::exp(std::conj(fl[j]) + gl[j]);
    }
    return acc;
}

double pairing_edge_ratio(const ScaledFunction& f, const ScaledFunction& g) {
    require_same_grid(f.grid(), g.grid());
    const std::size_t n = f.grid().size();
    std::vector<double> logs(n);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        logs[j] = f.log_abs(j) + g.log_abs(j);
        if (!std::isnan(logs[j])) top = std::max(top, logs[j]);
    }
    if (!std::isfinite(top)) return 0.0;
    double edge = -std::numeric_limits<double>::infinity();
    for (std::size_t j : {std::size_t{0}, std::size_t{1}, n - 2, n - 1}) edge = std::max(edge, logs[j]);
    return std::exp(edge - top);
}

double norm(const ScaledFunction& f) {
    const double top = f.max_log_abs();
    if (!std::isfinite(top)) return top > 0 ? top : 0.0;
    return norm(f.rescaled()) * std::exp(top);
}

// ---------------------------------------------------------------------------
// quadrature

namespace {

double adaptive_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                     double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
    // Start from a few sub-panels so that narrowly peaked integrands are seen.
    constexpr int seeds = 8;
    const double step = (b - a) / seeds;
    double total = 0.0;
    for (int k = 0; k < seeds; ++k) {
        const double lo = a + k * step;
        const double hi = lo + step;
        const double flo = f(lo);
        const double fmid = f(0.5 * (lo + hi));
        const double fhi = f(hi);
        const double whole = step / 6.0 * (flo + 4.0 * fmid + fhi);
        total += adaptive_step(f, lo, hi, flo, fmid, fhi, whole, tol / seeds, max_depth);
    }
    return total;
}

QuadratureResult integrate_halfline(const std::function<double(double)>& f, double tol, int max_doublings) {
    if (!(tol > 0.0)) throw NumericsError("integrate_halfline needs a positive tolerance");
    QuadratureResult r;
    const double panel_tol = tol / 64.0;
    double a = 0.0;
    double b = 1.0;
    for (int k = 0; k <= max_doublings; ++k) {
        const double part = integrate_adaptive(f, a, b, panel_tol);
        r.value += part;
        r.panels = k + 1;
        r.upper_limit = b;
        const bool decaying = std::abs(f(b)) <= std::abs(f(a)) || k == 0;
        if (k > 0 && std::abs(part) < panel_tol && decaying && std::abs(f(b)) * b < panel_tol) {
            r.error_estimate = std::abs(part) + panel_tol * r.panels;
            return r;
        }
        a = b;
        b *= 2.0;
    }
    throw ConvergenceError("integrate_halfline: no convergence after " + std::to_string(max_doublings) + " doublings");
}

cplx gamma_average(const std::function<cplx(double)>& f, double Gamma, std::size_t intervals) {
    if (!(Gamma > 0.0)) throw NumericsError("gamma_average needs Γ > 0");
    if (intervals < 2) intervals = 2;
    if (intervals % 2 != 0) ++intervals;
    const double h = 2.0 * Gamma / static_cast<double>(intervals);
    cplx acc = f(-Gamma) + f(Gamma);
    for (std::size_t j = 1; j < intervals; ++j) {
        const double g = -Gamma + static_cast<double>(j) * h;
        acc += (j % 2 == 1 ? 4.0 : 2.0) * f(g);
    }
    return acc * (h / 3.0) / (2.0 * Gamma);
}

SeriesResult sum_series(const std::function<cplx(std::size_t)>& coeff,
                        const std::function<double(std::size_t)>& tail_bound, double tol, std::size_t max_terms) {
    SeriesResult r;
    for (std::size_t n = 0; n < max_terms; ++n) {
        r.value += coeff(n);
        r.terms = n + 1;
        r.tail = tail_bound(n);
        if (r.tail < tol) return r;
    }
    throw ConvergenceError("sum_series: tail bound " + format_number(r.tail) + " still above tolerance after " +
                           std::to_string(max_terms) + " terms");
}

// ---------------------------------------------------------------------------
// CSV

void write_csv(std::ostream& os, const GridFunction& f) {
    nlohmann::json meta = {{"L", f.grid().half_width()}, {"N", f.grid().size()}};
    os << "# " << meta.dump() << "\n";
    os << "x,re,im\n";
    for (std::size_t j = 0; j < f.size(); ++j)
        os << format_number(f.grid().x(j)) << ',' << format_number(f[j].real()) << ',' << format_number(f[j].imag())
           << '\n';
}

GridFunction read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw NumericsError("missing CSV metadata header");
    const auto meta = nlohmann::json::parse(line.substr(2));
    const Grid grid(meta.at("L").get<double>(), meta.at("N").get<std::size_t>());
    if (!std::getline(is, line) || line != "x,re,im") throw NumericsError("unexpected CSV column header");
    std::vector<cplx> values;
    values.reserve(grid.size());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string xs, re, im;
        std::getline(row, xs, ',');
        std::getline(row, re, ',');
        std::getline(row, im, ',');
        values.emplace_back(std::stod(re), std::stod(im));
    }
    return GridFunction(grid, std::move(values));
}

}  // namespace susyq
