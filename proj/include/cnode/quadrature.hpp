#pragma once

#include <functional>

#include "cnode/symbol.hpp"

namespace cnode {

struct QuadratureConfig {
    double tolerance = 1e-8;        // target relative error
    double truncation_radius = 0.0; // 0 = automatic (super-level bbox / grid extent)
    int max_refinement = 26;        // quadtree depth cap
};

void validate(const QuadratureConfig& cfg);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0; // absolute, from the embedded cell estimates
    long cells = 0;              // accepted quadtree cells
    long evaluations = 0;        // integrand/symbol evaluations
    bool converged = true;
};

// Computes  I = ∬_{u(t,ω) ≥ level} f(u(t,ω)) dt dω  for u = |p_r|², with
// adaptive tensor-product refinement over the truncated plane. Cells that
// straddle the level curve u = level are subdivided; at acceptance they are
// resolved by 1-D root finding along the better-conditioned axis so that
// the jump sits exactly at a sub-interval endpoint. Interior cells use a
// 9x9 Gauss-Legendre rule with a one-level embedded error estimate.
QuadratureResult superlevel_integral(const WeylSymbolModel& model, double level,
                                     const std::function<double(double)>& f,
                                     const QuadratureConfig& cfg);

} // namespace cnode
