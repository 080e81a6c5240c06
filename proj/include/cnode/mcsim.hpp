#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cnode/spectral.hpp"

namespace cnode {

enum class InputMode {
    capacity_achieving, // a_k ~ N(0, (σ² - ν_k²)⁺) on the active subchannels
    fixed_coefficients, // deterministic coefficient vector
};

struct SimConfig {
    long trials = 0;
    std::uint64_t seed = 0;
    double snr = 0.0;
    InputMode input_mode = InputMode::capacity_achieving;
    std::vector<double> fixed_coefficients;
    // When set, receives the matched-filter error vector of every trial in
    // trial order (forces serial block execution); used for raw CSV dumps.
    std::function<void(const double* errors, int L)> sample_sink;
};

struct SimReport {
    std::vector<double> empirical_error_variances; // per matched-filter output
    double empirical_mmse = 0.0;
    double empirical_mmse_stderr = 0.0;
    double analytic_mmse = 0.0;
    double empirical_node_proxy = 0.0; // K · (mean error variance) / σ²
    long trials = 0;
    int active_count = 0;
    double snr = 0.0;
    double noise_variance = 0.0;
    // Sufficient statistics of the error vector for the whiteness test.
    std::vector<double> error_mean;  // length L
    std::vector<double> error_cross; // L x L row-major, mean of e_i e_j
};

// Draws y = Hx + n per trial, detects b̂_k = <y, g_k> through the matched
// filter bank from the SVD H = G Δ Fᵀ, and compares the error statistics
// and the empirical MMSE with their analytic values. Trials run in fixed
// blocks with per-block RNG streams (splitmix64-seeded mt19937_64, Box-Muller
// normals), so parallel and serial execution produce identical reports.
SimReport simulate_matched_filter(const ChannelSpec& channel, const SimConfig& config);

struct WhitenessResult {
    double max_offdiag_corr = 0.0;
    double threshold = 0.0; // 4/sqrt(trials)
};

// Maximum absolute off-diagonal correlation among the matched-filter errors;
// requires at least 10^4 trials.
WhitenessResult error_whiteness_test(const SimReport& report);

} // namespace cnode
