// Independent reference implementations used to freeze expected values.
// Everything here is deliberately written along a different algorithmic
// route than the library code it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

// Exact waterfilling via the sorted-prefix method: with nu_0^2 <= ... <=
// nu_{L-1}^2, try K = 1..L active subchannels; the candidate level is
// sigma^2 = (S + sum_{k<K} nu_k^2)/K, valid when nu_{K-1}^2 < sigma^2 <=
// nu_K^2 (nu_L^2 = +inf).
inline double waterfill_prefix_exact(const std::vector<double>& eigenvalues, double theta2,
                                     double budget) {
    const size_t L = eigenvalues.size();
    std::vector<double> nu2(L);
    for (size_t k = 0; k < L; ++k)
        nu2[k] = eigenvalues[k] > 0.0 ? theta2 / eigenvalues[k]
                                      : std::numeric_limits<double>::infinity();
    std::sort(nu2.begin(), nu2.end());
    double prefix = 0.0;
    for (size_t K = 1; K <= L; ++K) {
        if (!std::isfinite(nu2[K - 1]))
            break;
        prefix += nu2[K - 1];
        double sigma2 = (budget + prefix) / static_cast<double>(K);
        double next = K < L ? nu2[K] : std::numeric_limits<double>::infinity();
        if (sigma2 > nu2[K - 1] && sigma2 <= next)
            return sigma2;
    }
    throw std::logic_error("prefix waterfill oracle found no consistent level");
}

// Gaussian-symbol closed forms from the polar reduction x = t/(gamma r),
// y = gamma omega / r, u = exp(-(x^2+y^2)): dt domega = r^2 dx dy.
inline double gauss_count(double snr, double r) {
    return snr > 1.0 ? 0.5 * r * r * std::log(snr) : 0.0;
}
inline double gauss_capacity(double snr, double r) {
    if (snr <= 1.0)
        return 0.0;
    double l = std::log(snr);
    return r * r * l * l / 8.0;
}
inline double gauss_node(double snr, double r) {
    return gauss_count(snr, r) / snr;
}
inline double gauss_mmse(double snr, double r) {
    if (snr <= 1.0)
        return 0.0;
    return 0.5 * r * r * (std::log(snr) / snr - (1.0 - 1.0 / snr) / snr);
}

// Radial reduction of the water-level condition for the Gaussian symbol:
// S(nu) = pi nu r^2 (ln(2 pi nu/theta^2) - 1) + r^2 theta^2 / 2 for
// nu >= theta^2/(2 pi), with S(theta^2/(2 pi)) = 0.
inline double gauss_budget_of_water_level(double nu, double r, double theta2) {
    const double pi = 3.14159265358979323846;
    double l = std::log(2.0 * pi * nu / theta2);
    return pi * nu * r * r * (l - 1.0) + r * r * theta2 / 2.0;
}

// Spectrum of the Gaussian-symbol Weyl operator via Mehler's formula: the
// symbol exp(-rho^2/(2 r^2)) quantizes to cosh(beta/2) e^{-beta H_osc} with
// tanh(beta/2) = 1/(2 r^2), so
//   mu_k = (1-x^2)^{-1/2} ((1-x)/(1+x))^{k+1/2},  x = 1/(2 r^2),
// and the eigenvalues of P_r* P_r are lambda_k = mu_k^2 (gamma-independent).
inline double mehler_eigenvalue(int k, double r) {
    double x = 1.0 / (2.0 * r * r);
    double ratio = (1.0 - x) / (1.0 + x);
    return 1.0 / (1.0 - x * x) * std::pow(ratio, 2 * k + 1);
}

inline int mehler_count(double snr, double r) {
    int k = 0;
    while (mehler_eigenvalue(k, r) > 1.0 / snr)
        ++k;
    return k;
}

} // namespace oracle
