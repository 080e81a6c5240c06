#pragma once

#include <string>
#include <vector>

#include "cnode/ltv.hpp"
#include "cnode/spectral.hpp"
#include "cnode/weyl.hpp"

namespace cnode {

// Aligned sweep columns; the CSV/JSON output unit. flags carries a per-row
// marker ("", "infeasible", "jump", "boundary").
struct SweepTable {
    std::string axis_name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> flags;
};

// Inclusive "lo:hi:step" grid (or the single value "v").
std::vector<double> expand_range(const std::string& text);

// Per-snr capacity/node/mmse/fisher columns plus the central-difference
// derivative check (relative step h_rel, clipped to stay feasible).
// Infeasible rows are emitted flagged, not dropped.
SweepTable vgc_sweep(const SpectralChannel& spec, const std::vector<double>& snr_values,
                     bool values_in_db, double h_rel = 1e-6);

// Single-row waterfilling report for a budget-driven workflow.
SweepTable vgc_budget_row(const SpectralChannel& spec, double budget);

// Per-snr continuous-channel columns; with closed_form, adds the Gaussian
// analytic columns and the relative quadrature errors.
SweepTable ltv_sweep(const WeylSymbolModel& model, const std::vector<double>& snr_values,
                     bool values_in_db, const QuadratureConfig& quad, bool closed_form);

SweepTable szego_table(const std::vector<SzegoRow>& study);

} // namespace cnode
