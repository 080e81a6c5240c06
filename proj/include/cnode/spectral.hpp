#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cnode/errors.hpp"

namespace cnode {

// Raw channel model y = Hx + n with i.i.d. N(0, theta^2) noise components.
struct ChannelSpec {
    Eigen::MatrixXd matrix;       // real L x L channel gains
    double noise_variance = 1.0;  // theta^2 > 0

    ChannelSpec(Eigen::MatrixXd m, double theta2);
    int dim() const { return static_cast<int>(matrix.rows()); }
};

// Canonical spectral form: eigenvalues of H^T H (counting multiplicity,
// sorted non-increasing) plus the noise variance. All capacity/NODE/MMSE
// formulas consume this.
class SpectralChannel {
  public:
    SpectralChannel(std::vector<double> eigenvalues, double noise_variance);

    const std::vector<double>& eigenvalues() const { return eig_; }
    double noise_variance() const { return theta2_; }
    int dim() const { return static_cast<int>(eig_.size()); }

    // nu_k^2 = theta^2 / lambda_k; +infinity when lambda_k == 0.
    double noise_profile(int k) const;

    // lambda_0^{-1}, the smallest feasible snr (+infinity for a dead channel).
    double min_feasible_snr() const;

    // K(snr) = #{k : lambda_k > 1/snr}. Strict inequality: a subchannel
    // exactly at threshold counts as inactive.
    int active_count(double snr) const;

  private:
    std::vector<double> eig_;
    double theta2_;
};

struct WaterfillSolution {
    double water_level = 0.0;    // sigma^2
    int active_count = 0;        // K
    std::vector<double> powers;  // (sigma^2 - nu_k^2)^+
    double snr = 0.0;            // sigma^2 / theta^2
};

struct MmseReport {
    double mmse = 0.0;
    double node = 0.0;
    double fisher_term = 0.0;
    double snr = 0.0;
};

struct DerivativeCheck {
    double analytic = 0.0;  // node(snr) / 2
    double numeric = 0.0;   // central difference of the capacity
    bool jump_adjacent = false;
};

// Eigenvalues of H^T H, sorted non-increasing, tiny negative round-off
// clamped to zero.
SpectralChannel spectrum(const ChannelSpec& channel);

// Unique water level sigma^2 with sum_k (sigma^2 - nu_k^2)^+ = budget,
// found by monotone bisection on [nu_0^2, nu_0^2 + budget].
WaterfillSolution waterfill(const SpectralChannel& spec, double budget);

// C(snr) = 1/2 sum_{k<K} ln(snr * lambda_k). Throws InfeasibleSnrError
// below lambda_0^{-1}; zero at the boundary.
double capacity_from_snr(const SpectralChannel& spec, double snr);

// node(snr) = K(snr)/snr for feasible snr, 0 otherwise.
double node(const SpectralChannel& spec, double snr);

// MMSE of estimating HX under the capacity-achieving input, together with
// the Fisher-information term that closes the gap to the NODE:
//   node = mmse + fisher_term.
// Infeasible snr yields an all-zero report.
MmseReport mmse(const SpectralChannel& spec, double snr);

// Central-difference check of dC/dsnr against node(snr)/2; jump_adjacent
// marks stencils spanning a change of the active-set size.
DerivativeCheck capacity_derivative_check(const SpectralChannel& spec, double snr, double h);

// Mutual information for independent Gaussian inputs with the given
// per-subchannel powers: 1/2 sum_k ln(1 + p_k lambda_k / theta^2).
double gaussian_mutual_information(const SpectralChannel& spec,
                                   const std::vector<double>& input_powers);

} // namespace cnode
