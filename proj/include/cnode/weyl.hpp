#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cnode/quadrature.hpp"
#include "cnode/symbol.hpp"

namespace cnode {

// Nyström discretization of the LTV operator P_r on a uniform midpoint grid:
// kernel_matrix(i,j) = h_r(t_i, t_j) · dt, so the matrix acts as the operator.
struct DiscretizedOperator {
    Eigen::MatrixXd kernel_matrix;
    std::vector<double> t_grid;
    double dt = 0.0;
    double spread = 1.0;
};

struct EigenSpectrum {
    std::vector<double> eigenvalues; // λ_k of (P_r*P_r), sorted non-increasing, ≥ 0
    double spread = 1.0;
    int n_points = 0;
    double dt = 0.0;
};

// Samples h_r(t,t') = (1/2π) ∫ p_r((t+t')/2, ω) e^{iω(t-t')} dω on the grid.
// Gaussian symbols use the closed-form ω-integral; tabulated symbols (which
// must be even in ω for a real kernel) a cosine-transform quadrature.
// extent is the half-width of the time window.
DiscretizedOperator build_kernel(const WeylSymbolModel& model, int n_points, double extent);

// Top eigenvalues of K^T K (squared singular values of the discretized
// operator), i.e. the spectrum of the discretized P_r*P_r.
EigenSpectrum eigen_spectrum(const DiscretizedOperator& op, int top_k);

// K(r,snr) = #{k : λ_k > 1/snr}, strict, max ∅ = 0.
int eigen_count(const EigenSpectrum& spectrum, double snr);

struct SzegoRow {
    double r = 1.0;
    double count_discrete = 0.0; // K(r,snr) from the eigenvalues
    double count_integral = 0.0; // Ǩ(r,snr) from the phase-plane integral
    double gap_normalized = 0.0; // |K - Ǩ| / r²
    int n_points = 0;
    double extent = 0.0;
};

struct GridOverride {
    int n_points = 0;    // 0 = automatic
    double extent = 0.0; // 0 = automatic
};

// Automatic grid sizing: extent covers the spread symbol's time support
// (< 1e-12 of peak at the edge), dt resolves the kernel's off-diagonal
// width, n capped at 4096.
GridOverride auto_grid(const WeylSymbolModel& model, double r);

// For each spread r: discretize, count eigenvalues above 1/snr, compare with
// the phase-plane counting integral, and tabulate the normalized gap. When
// spectra is non-null it receives the per-r eigenvalue arrays.
std::vector<SzegoRow> szego_convergence_study(const WeylSymbolModel& model, double snr,
                                              const std::vector<double>& r_values,
                                              const QuadratureConfig& quad,
                                              const GridOverride& grid = {},
                                              std::vector<EigenSpectrum>* spectra = nullptr);

} // namespace cnode
