#pragma once

#include "cnode/quadrature.hpp"
#include "cnode/symbol.hpp"

namespace cnode {

// N_r(t,ω) = θ²/(2π |p_r(t,ω)|²); +infinity where the symbol vanishes.
double cup_function(const WeylSymbolModel& model, double t, double omega);

// Water level ν with ∬ (ν - N_r)⁺ dt dω = budget, by bisection on ν.
double solve_water_level(const WeylSymbolModel& model, double budget,
                         const QuadratureConfig& quad);

// Č(r,snr) = (1/4π) ∬_{|p_r|² ≥ 1/snr} ln(snr |p_r|²) dt dω; 0 for snr ≤ 1/M.
double capacity_integral(const WeylSymbolModel& model, double snr,
                         const QuadratureConfig& quad);

// Ǩ(r,snr) = (1/2π) · area{|p_r|² ≥ 1/snr}.
double count_integral(const WeylSymbolModel& model, double snr,
                      const QuadratureConfig& quad);

// node(r,snr) = Ǩ(r,snr)/snr.
double node_integral(const WeylSymbolModel& model, double snr,
                     const QuadratureConfig& quad);

// mmse(r,snr) = (1/2π) ∬ snr⁻¹ (1 - (snr|p_r|²)⁻¹)⁺ dt dω.
double mmse_integral(const WeylSymbolModel& model, double snr,
                     const QuadratureConfig& quad);

// r→∞ limits of node/r² and mmse/r²; the integrals scale exactly as r², so
// these equal the spread-1 evaluations.
struct AveragedLimits {
    double node_bar = 0.0;
    double mmse_bar = 0.0;
};
AveragedLimits averaged_limits(const WeylSymbolModel& model, double snr,
                               const QuadratureConfig& quad);

// J(s) = ∬_{u ≥ 1/s} ln(s·u) with u = |p_r|²: central difference of J
// against the identity J'(s) = s⁻¹ ∬_{u ≥ 1/s} 1.
struct LogDerivativeCheck {
    double numeric = 0.0;
    double analytic = 0.0;
};
LogDerivativeCheck log_integral_derivative_check(const WeylSymbolModel& model, double snr, double h,
                                    const QuadratureConfig& quad);

struct ContinuousReport {
    double capacity = 0.0;
    double count = 0.0;
    double node = 0.0;
    double mmse = 0.0;
    double water_level = 0.0; // ν = snr·θ²/(2π)
    double snr = 0.0;
};
ContinuousReport continuous_report(const WeylSymbolModel& model, double snr,
                                   const QuadratureConfig& quad);

// Closed forms for the Gaussian symbol (γ-independent).
double gaussian_capacity_closed_form(double snr, double spread);
double gaussian_count_closed_form(double snr, double spread);
double gaussian_node_closed_form(double snr, double spread);
double gaussian_mmse_closed_form(double snr, double spread);

} // namespace cnode
