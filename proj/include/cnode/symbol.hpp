#pragma once

#include <array>
#include <utility>
#include <vector>

#include "cnode/errors.hpp"

namespace cnode {

// Axis-aligned rectangle [t_lo, t_hi] x [w_lo, w_hi] on the (t, omega) plane.
struct PlaneBox {
    double t_lo = 0.0, t_hi = 0.0, w_lo = 0.0, w_hi = 0.0;
    double width() const { return t_hi - t_lo; }
    double height() const { return w_hi - w_lo; }
    double area() const { return width() * height(); }
    bool empty() const { return !(t_hi > t_lo) || !(w_hi > w_lo); }
};

// Weyl symbol of the LTV filter, either the closed-form bivariate Gaussian
//   p(t, omega) = exp(-(t^2/gamma^2 + gamma^2 omega^2) / 2)
// or a non-negative tabulated grid evaluated by bilinear interpolation
// (zero outside the grid extent). The spread factor r >= 1 replaces
// p(t, omega) by p(t/r, omega/r); noise_psd is the two-sided PSD N0/2.
//
// The level-set quadrature engine consumes the squared symbol u = |p_r|^2
// through squared()/squared_range(); squared_range reports the exact
// minimum and maximum of u over a rectangle (the Gaussian exponent is
// separable-convex, the bilinear interpolant attains extrema at corners of
// cell/patch overlaps), which makes inside/outside/straddle classification
// of quadrature cells exact.
class WeylSymbolModel {
  public:
    static WeylSymbolModel gaussian(double gamma, double spread = 1.0, double noise_psd = 1.0);
    static WeylSymbolModel tabulated(std::vector<double> t_axis,
                                     std::vector<double> omega_axis,
                                     std::vector<std::vector<double>> values,
                                     double spread = 1.0, double noise_psd = 1.0);

    bool is_gaussian() const { return kind_ == Kind::Gaussian; }
    double gamma() const;
    double spread() const { return spread_; }
    double noise_psd() const { return noise_psd_; }
    WeylSymbolModel with_spread(double r) const;

    const std::vector<double>& t_axis() const { return t_axis_; }
    const std::vector<double>& omega_axis() const { return omega_axis_; }
    const std::vector<std::vector<double>>& values() const { return values_; }

    // p_r(t, omega)
    double symbol(double t, double omega) const;
    // u(t, omega) = |p_r(t, omega)|^2
    double squared(double t, double omega) const;
    // M = sup u
    double peak_squared() const;
    // Rectangle guaranteed to contain {u >= level}; for the Gaussian this is
    // the bounding box of the exact super-level ellipse scaled by pad, for
    // tabulated symbols the (spread) grid extent. Empty when level >= M.
    PlaneBox superlevel_box(double level, double pad) const;
    // Exact [min, max] of u over the cell.
    std::pair<double, double> squared_range(const PlaneBox& cell) const;
    // Gradient of u, used to pick the better-conditioned root direction.
    std::array<double, 2> squared_gradient(double t, double omega) const;

    // Share of grid patches that are flat to within +-band around u = level;
    // heuristic surrogate for the zero-area-level-set hypothesis. Always 0
    // for the Gaussian kind.
    double flat_level_fraction(double level, double band) const;

    // True when the tabulated grid is symmetric in omega (required for a
    // real discretized kernel). Gaussian symbols always qualify.
    bool omega_symmetric(double rel_tol = 1e-9) const;

  private:
    enum class Kind { Gaussian, Tabulated };
    WeylSymbolModel() = default;

    // Gaussian: value and separable exponent q(t,w) = (t/gamma)^2 + (gamma w)^2
    // so that u = exp(-q/r^2).
    double gauss_q(double t, double omega) const;

    // Tabulated: bilinear interpolation of p on the unspread grid.
    double interp_unspread(double t, double omega) const;
    std::pair<double, double> symbol_range_unspread(double t0, double t1,
                                                    double w0, double w1) const;

    Kind kind_ = Kind::Gaussian;
    double gamma_ = 1.0;
    double spread_ = 1.0;
    double noise_psd_ = 1.0;
    std::vector<double> t_axis_, omega_axis_;
    std::vector<std::vector<double>> values_; // values_[i][j] = p(t_i, omega_j)
    double peak_symbol_ = 1.0;                // max p over the grid
    // per-patch extrema of the interpolant (= corner node extrema), row-major
    // (nt-1) x (nw-1); avoids interpolation calls for fully covered patches
    std::vector<double> patch_min_, patch_max_;
};

} // namespace cnode
