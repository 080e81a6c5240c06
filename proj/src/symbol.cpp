#include "cnode/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cnode {

namespace {

// Extreme of a separable convex coordinate term x^2 over [a, b].
double sq_min_on(double a, double b) {
    double x = std::clamp(0.0, a, b);
    return x * x;
}
double sq_max_on(double a, double b) {
    return std::max(a * a, b * b);
}

int lower_cell(const std::vector<double>& axis, double x) {
    // index i with axis[i] <= x < axis[i+1], clamped to [0, n-2]
    auto it = std::upper_bound(axis.begin(), axis.end(), x);
    int i = static_cast<int>(it - axis.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(axis.size()) - 2);
}

} // namespace

WeylSymbolModel WeylSymbolModel::gaussian(double gamma, double spread, double noise_psd) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw InvalidInputError("gamma must be positive and finite");
    if (!(spread >= 1.0) || !std::isfinite(spread))
        throw InvalidInputError("spread factor must satisfy r >= 1");
    if (!(noise_psd > 0.0) || !std::isfinite(noise_psd))
        throw InvalidInputError("noise PSD must be positive and finite");
    WeylSymbolModel m;
    m.kind_ = Kind::Gaussian;
    m.gamma_ = gamma;
    m.spread_ = spread;
    m.noise_psd_ = noise_psd;
    m.peak_symbol_ = 1.0;
    return m;
}

WeylSymbolModel WeylSymbolModel::tabulated(std::vector<double> t_axis,
                                           std::vector<double> omega_axis,
                                           std::vector<std::vector<double>> values,
                                           double spread, double noise_psd) {
    if (!(spread >= 1.0) || !std::isfinite(spread))
        throw InvalidInputError("spread factor must satisfy r >= 1");
    if (!(noise_psd > 0.0) || !std::isfinite(noise_psd))
        throw InvalidInputError("noise PSD must be positive and finite");
    if (t_axis.size() < 2 || omega_axis.size() < 2)
        throw InvalidInputError("tabulated symbol needs at least a 2x2 grid");
    if (!std::is_sorted(t_axis.begin(), t_axis.end()) ||
        std::adjacent_find(t_axis.begin(), t_axis.end()) != t_axis.end())
        throw InvalidInputError("t axis must be strictly increasing");
    if (!std::is_sorted(omega_axis.begin(), omega_axis.end()) ||
        std::adjacent_find(omega_axis.begin(), omega_axis.end()) != omega_axis.end())
        throw InvalidInputError("omega axis must be strictly increasing");
    if (values.size() != t_axis.size())
        throw InvalidInputError("value grid rows must match the t axis length");

    double peak = 0.0;
    for (const auto& row : values) {
        if (row.size() != omega_axis.size())
            throw InvalidInputError("value grid columns must match the omega axis length");
        for (double v : row) {
            if (!std::isfinite(v) || v < 0.0)
                throw InvalidInputError("symbol values must be finite and non-negative");
            peak = std::max(peak, v);
        }
    }
    if (!(peak > 0.0))
        throw InvalidInputError("symbol is identically zero");

    // Rapid-decrease surrogate: the grid must capture the symbol support.
    double boundary = 0.0;
    size_t nt = t_axis.size(), nw = omega_axis.size();
    for (size_t j = 0; j < nw; ++j)
        boundary = std::max({boundary, values.front()[j], values.back()[j]});
    for (size_t i = 0; i < nt; ++i)
        boundary = std::max({boundary, values[i].front(), values[i].back()});
    if (boundary > 1e-12 * peak)
        throw InvalidInputError("symbol does not decay to <= 1e-12 of its peak at the grid boundary");

    WeylSymbolModel m;
    m.kind_ = Kind::Tabulated;
    m.spread_ = spread;
    m.noise_psd_ = noise_psd;
    m.t_axis_ = std::move(t_axis);
    m.omega_axis_ = std::move(omega_axis);
    m.values_ = std::move(values);
    m.peak_symbol_ = peak;
    size_t pt = m.t_axis_.size() - 1, pw = m.omega_axis_.size() - 1;
    m.patch_min_.resize(pt * pw);
    m.patch_max_.resize(pt * pw);
    for (size_t i = 0; i < pt; ++i)
        for (size_t j = 0; j < pw; ++j) {
            double a = m.values_[i][j], b = m.values_[i][j + 1];
            double c = m.values_[i + 1][j], d = m.values_[i + 1][j + 1];
            m.patch_min_[i * pw + j] = std::min(std::min(a, b), std::min(c, d));
            m.patch_max_[i * pw + j] = std::max(std::max(a, b), std::max(c, d));
        }
    return m;
}

double WeylSymbolModel::gamma() const {
    if (kind_ != Kind::Gaussian)
        throw InvalidInputError("gamma is defined for Gaussian symbols only");
    return gamma_;
}

WeylSymbolModel WeylSymbolModel::with_spread(double r) const {
    WeylSymbolModel m = *this;
    if (!(r >= 1.0) || !std::isfinite(r))
        throw InvalidInputError("spread factor must satisfy r >= 1");
    m.spread_ = r;
    return m;
}

double WeylSymbolModel::gauss_q(double t, double omega) const {
    double a = t / gamma_;
    double b = gamma_ * omega;
    return a * a + b * b;
}

double WeylSymbolModel::interp_unspread(double t, double omega) const {
    if (t < t_axis_.front() || t > t_axis_.back() ||
        omega < omega_axis_.front() || omega > omega_axis_.back())
        return 0.0;
    int i = lower_cell(t_axis_, t);
    int j = lower_cell(omega_axis_, omega);
    double tx = (t - t_axis_[i]) / (t_axis_[i + 1] - t_axis_[i]);
    double wy = (omega - omega_axis_[j]) / (omega_axis_[j + 1] - omega_axis_[j]);
    double v00 = values_[i][j], v01 = values_[i][j + 1];
    double v10 = values_[i + 1][j], v11 = values_[i + 1][j + 1];
    return (1 - tx) * ((1 - wy) * v00 + wy * v01) + tx * ((1 - wy) * v10 + wy * v11);
}

double WeylSymbolModel::symbol(double t, double omega) const {
    if (kind_ == Kind::Gaussian)
        return std::exp(-gauss_q(t, omega) / (2.0 * spread_ * spread_));
    return interp_unspread(t / spread_, omega / spread_);
}

double WeylSymbolModel::squared(double t, double omega) const {
    double p = symbol(t, omega);
    return p * p;
}

double WeylSymbolModel::peak_squared() const {
    return peak_symbol_ * peak_symbol_;
}

PlaneBox WeylSymbolModel::superlevel_box(double level, double pad) const {
    if (kind_ == Kind::Tabulated) {
        return PlaneBox{t_axis_.front() * spread_, t_axis_.back() * spread_,
                        omega_axis_.front() * spread_, omega_axis_.back() * spread_};
    }
    if (!(level > 0.0) || level >= peak_squared())
        return PlaneBox{}; // empty: the super-level set is at most a point
    // u = exp(-q/r^2) >= level  <=>  q <= r^2 ln(1/level)
    double qmax = spread_ * spread_ * std::log(1.0 / level);
    double t_half = gamma_ * std::sqrt(qmax) * pad;
    double w_half = std::sqrt(qmax) / gamma_ * pad;
    return PlaneBox{-t_half, t_half, -w_half, w_half};
}

std::pair<double, double> WeylSymbolModel::symbol_range_unspread(double t0, double t1,
                                                                 double w0, double w1) const {
    // Exact extrema of the bilinear interpolant over [t0,t1]x[w0,w1]:
    // per patch overlap, extrema sit at the overlap rectangle corners.
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool outside = t0 < t_axis_.front() || t1 > t_axis_.back() ||
                   w0 < omega_axis_.front() || w1 > omega_axis_.back();
    double ct0 = std::max(t0, t_axis_.front());
    double ct1 = std::min(t1, t_axis_.back());
    double cw0 = std::max(w0, omega_axis_.front());
    double cw1 = std::min(w1, omega_axis_.back());
    if (ct0 > ct1 || cw0 > cw1)
        return {0.0, 0.0}; // fully outside the grid
    int i0 = lower_cell(t_axis_, ct0), i1 = lower_cell(t_axis_, ct1);
    int j0 = lower_cell(omega_axis_, cw0), j1 = lower_cell(omega_axis_, cw1);
    const size_t pw = omega_axis_.size() - 1;
    for (int i = i0; i <= i1; ++i) {
        double a0 = std::max(ct0, t_axis_[i]);
        double a1 = std::min(ct1, t_axis_[i + 1]);
        bool t_covers = a0 == t_axis_[i] && a1 == t_axis_[i + 1];
        for (int j = j0; j <= j1; ++j) {
            double b0 = std::max(cw0, omega_axis_[j]);
            double b1 = std::min(cw1, omega_axis_[j + 1]);
            if (t_covers && b0 == omega_axis_[j] && b1 == omega_axis_[j + 1]) {
                // fully covered patch: precomputed corner extrema are exact
                lo = std::min(lo, patch_min_[static_cast<size_t>(i) * pw + static_cast<size_t>(j)]);
                hi = std::max(hi, patch_max_[static_cast<size_t>(i) * pw + static_cast<size_t>(j)]);
                continue;
            }
            for (double a : {a0, a1})
                for (double b : {b0, b1}) {
                    double v = interp_unspread(a, b);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
        }
    }
    if (outside)
        lo = 0.0;
    return {lo, hi};
}

std::pair<double, double> WeylSymbolModel::squared_range(const PlaneBox& cell) const {
    if (kind_ == Kind::Gaussian) {
        double r2 = spread_ * spread_;
        double q_min = sq_min_on(cell.t_lo / gamma_, cell.t_hi / gamma_) +
                       sq_min_on(gamma_ * cell.w_lo, gamma_ * cell.w_hi);
        double q_max = sq_max_on(cell.t_lo / gamma_, cell.t_hi / gamma_) +
                       sq_max_on(gamma_ * cell.w_lo, gamma_ * cell.w_hi);
        return {std::exp(-q_max / r2), std::exp(-q_min / r2)};
    }
    auto [plo, phi] = symbol_range_unspread(cell.t_lo / spread_, cell.t_hi / spread_,
                                            cell.w_lo / spread_, cell.w_hi / spread_);
    return {plo * plo, phi * phi};
}

std::array<double, 2> WeylSymbolModel::squared_gradient(double t, double omega) const {
    if (kind_ == Kind::Gaussian) {
        double r2 = spread_ * spread_;
        double u = squared(t, omega);
        return {-2.0 * t / (gamma_ * gamma_ * r2) * u, -2.0 * gamma_ * gamma_ * omega / r2 * u};
    }
    double ht = 0.25 * (t_axis_[1] - t_axis_[0]) * spread_;
    double hw = 0.25 * (omega_axis_[1] - omega_axis_[0]) * spread_;
    return {(squared(t + ht, omega) - squared(t - ht, omega)) / (2.0 * ht),
            (squared(t, omega + hw) - squared(t, omega - hw)) / (2.0 * hw)};
}

double WeylSymbolModel::flat_level_fraction(double level, double band) const {
    if (kind_ == Kind::Gaussian)
        return 0.0;
    size_t flat = 0, total = 0;
    for (size_t i = 0; i + 1 < t_axis_.size(); ++i)
        for (size_t j = 0; j + 1 < omega_axis_.size(); ++j) {
            double umin = std::numeric_limits<double>::infinity(), umax = 0.0;
            for (auto [a, b] : {std::pair{i, j}, {i, j + 1}, {i + 1, j}, {i + 1, j + 1}}) {
                double u = values_[a][b] * values_[a][b];
                umin = std::min(umin, u);
                umax = std::max(umax, u);
            }
            ++total;
            if (umax - umin <= 2.0 * band && std::abs(0.5 * (umin + umax) - level) <= band)
                ++flat;
        }
    return total ? static_cast<double>(flat) / static_cast<double>(total) : 0.0;
}

bool WeylSymbolModel::omega_symmetric(double rel_tol) const {
    if (kind_ == Kind::Gaussian)
        return true;
    size_t nw = omega_axis_.size();
    for (size_t j = 0; j < nw; ++j)
        if (std::abs(omega_axis_[j] + omega_axis_[nw - 1 - j]) >
            rel_tol * std::max(1.0, std::abs(omega_axis_.back())))
            return false;
    for (const auto& row : values_)
        for (size_t j = 0; j < nw; ++j)
            if (std::abs(row[j] - row[nw - 1 - j]) > rel_tol * peak_symbol_)
                return false;
    return true;
}

} // namespace cnode
