#include "cnode/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cnode {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
} // namespace

ChannelSpec::ChannelSpec(Eigen::MatrixXd m, double theta2)
    : matrix(std::move(m)), noise_variance(theta2) {
    if (matrix.rows() == 0 || matrix.rows() != matrix.cols())
        throw InvalidInputError("channel matrix must be square with L >= 1");
    if (!matrix.allFinite())
        throw InvalidInputError("channel matrix has non-finite entries");
    if (!(noise_variance > 0.0) || !std::isfinite(noise_variance))
        throw InvalidInputError("noise variance must be positive and finite");
}

SpectralChannel::SpectralChannel(std::vector<double> eigenvalues, double noise_variance)
    : eig_(std::move(eigenvalues)), theta2_(noise_variance) {
    if (eig_.empty())
        throw InvalidInputError("spectrum must contain at least one eigenvalue");
    if (!(theta2_ > 0.0) || !std::isfinite(theta2_))
        throw InvalidInputError("noise variance must be positive and finite");
    double peak = 0.0;
    for (double v : eig_) {
        if (!std::isfinite(v))
            throw InvalidInputError("eigenvalues must be finite");
        peak = std::max(peak, std::abs(v));
    }
    for (double& v : eig_) {
        if (v < 0.0) {
            if (v < -64.0 * kEps * std::max(peak, 1.0))
                throw InvalidInputError("eigenvalues must be non-negative");
            v = 0.0; // round-off from a symmetric eigensolver
        }
    }
    std::sort(eig_.begin(), eig_.end(), std::greater<double>());
}

double SpectralChannel::noise_profile(int k) const {
    double lam = eig_.at(static_cast<size_t>(k));
    return lam > 0.0 ? theta2_ / lam : kInf;
}

double SpectralChannel::min_feasible_snr() const {
    return eig_[0] > 0.0 ? 1.0 / eig_[0] : kInf;
}

int SpectralChannel::active_count(double snr) const {
    if (!(snr > 0.0))
        return 0;
    double threshold = 1.0 / snr;
    int k = 0;
    while (k < dim() && eig_[static_cast<size_t>(k)] > threshold)
        ++k;
    return k;
}

SpectralChannel spectrum(const ChannelSpec& channel) {
    Eigen::MatrixXd gram = channel.matrix.transpose() * channel.matrix;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericError("symmetric eigensolver failed on H^T H");
    const auto& ev = solver.eigenvalues(); // ascending
    std::vector<double> lam(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        lam[static_cast<size_t>(i)] = ev(ev.size() - 1 - i);
    return SpectralChannel(std::move(lam), channel.noise_variance);
}

WaterfillSolution waterfill(const SpectralChannel& spec, double budget) {
    if (!(budget > 0.0) || !std::isfinite(budget))
        throw InvalidInputError("energy budget must be positive");
    if (!(spec.eigenvalues()[0] > 0.0))
        throw NoSignalPathError("all eigenvalues are zero; no signal path");

    const int L = spec.dim();
    auto excess = [&](double sigma2) {
        double s = 0.0;
        for (int k = 0; k < L; ++k) {
            double nu2 = spec.noise_profile(k);
            if (nu2 < sigma2)
                s += sigma2 - nu2;
            else
                break; // nu_k^2 non-decreasing in k
        }
        return s;
    };

    // excess() is continuous, non-decreasing, 0 at nu_0^2 and >= budget at
    // nu_0^2 + budget, so bisection brackets the unique water level.
    double lo = spec.noise_profile(0);
    double hi = lo + budget;
    double sigma2 = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        sigma2 = 0.5 * (lo + hi);
        double r = excess(sigma2) - budget;
        if (std::abs(r) <= 1e-12 * budget)
            break;
        (r < 0.0 ? lo : hi) = sigma2;
        if (hi - lo <= kEps * hi) {
            sigma2 = 0.5 * (lo + hi);
            break;
        }
    }

    WaterfillSolution sol;
    sol.water_level = sigma2;
    sol.powers.resize(static_cast<size_t>(L), 0.0);
    for (int k = 0; k < L; ++k) {
        double nu2 = spec.noise_profile(k);
        if (nu2 < sigma2) {
            sol.powers[static_cast<size_t>(k)] = sigma2 - nu2;
            sol.active_count = k + 1;
        }
    }
    sol.snr = sigma2 / spec.noise_variance();
    return sol;
}

double capacity_from_snr(const SpectralChannel& spec, double snr) {
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw InvalidInputError("snr must be positive and finite");
    if (snr < spec.min_feasible_snr())
        throw InfeasibleSnrError("snr below lambda_0^{-1}, the smallest feasible snr");
    const int K = spec.active_count(snr);
    double c = 0.0;
    for (int k = 0; k < K; ++k)
        c += std::log(snr * spec.eigenvalues()[static_cast<size_t>(k)]);
    return 0.5 * c;
}

double node(const SpectralChannel& spec, double snr) {
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw InvalidInputError("snr must be positive and finite");
    if (snr < spec.min_feasible_snr())
        return 0.0;
    return spec.active_count(snr) / snr;
}

MmseReport mmse(const SpectralChannel& spec, double snr) {
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw InvalidInputError("snr must be positive and finite");
    MmseReport rep;
    rep.snr = snr;
    if (snr < spec.min_feasible_snr())
        return rep;
    const int K = spec.active_count(snr);
    const double inv = 1.0 / snr;
    double m = 0.0, fisher_sum = 0.0;
    for (int k = 0; k < K; ++k) {
        double t = inv / spec.eigenvalues()[static_cast<size_t>(k)];
        m += inv * (1.0 - t);
        fisher_sum += t;
    }
    rep.mmse = m;
    rep.fisher_term = fisher_sum * inv;
    rep.node = K * inv;
    return rep;
}

DerivativeCheck capacity_derivative_check(const SpectralChannel& spec, double snr, double h) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw InvalidInputError("derivative step must be positive");
    if (!(snr > 0.0) || snr < spec.min_feasible_snr())
        throw InfeasibleSnrError("snr below lambda_0^{-1}");
    if (snr - h < spec.min_feasible_snr())
        throw InvalidInputError("derivative stencil leaves the feasible snr region");
    DerivativeCheck d;
    d.analytic = 0.5 * node(spec, snr);
    d.numeric = (capacity_from_snr(spec, snr + h) - capacity_from_snr(spec, snr - h)) / (2.0 * h);
    d.jump_adjacent = spec.active_count(snr - h) != spec.active_count(snr + h);
    return d;
}

double gaussian_mutual_information(const SpectralChannel& spec,
                                   const std::vector<double>& input_powers) {
    if (static_cast<int>(input_powers.size()) != spec.dim())
        throw InvalidInputError("power vector length must match the channel dimension");
    double info = 0.0;
    for (int k = 0; k < spec.dim(); ++k) {
        double p = input_powers[static_cast<size_t>(k)];
        if (p < 0.0 || !std::isfinite(p))
            throw InvalidInputError("input powers must be non-negative and finite");
        info += std::log1p(p * spec.eigenvalues()[static_cast<size_t>(k)] / spec.noise_variance());
    }
    return 0.5 * info;
}

} // namespace cnode
