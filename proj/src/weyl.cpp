#include "cnode/weyl.hpp"

#include "cnode/ltv.hpp"

#include <algorithm>
#include <cmath>

namespace cnode {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// h_r(t,t') for the Gaussian symbol: the ω-integral is itself a Gaussian,
//   (r/(γ√(2π))) · exp(-(t+t')²/(8γ²r²)) · exp(-r²(t-t')²/(2γ²)).
double gaussian_kernel(double gamma, double r, double t, double tp) {
    double s = t + tp, d = t - tp;
    double g2 = gamma * gamma, r2 = r * r;
    return r / (gamma * std::sqrt(kTwoPi)) *
           std::exp(-s * s / (8.0 * g2 * r2) - r2 * d * d / (2.0 * g2));
}

// Cosine-transform of the tabulated symbol at midpoint tau = (t+t')/2:
//   h_r(t,t') = (1/π) ∫_0^∞ p_r(tau, ω) cos(ω(t-t')) dω.
double tabulated_kernel(const WeylSymbolModel& m, double tau, double delta, int n_omega) {
    double w_max = m.omega_axis().back() * m.spread();
    if (!(w_max > 0.0))
        return 0.0;
    double h = w_max / n_omega;
    // composite Simpson on [0, w_max]
    double acc = m.symbol(tau, 0.0) + m.symbol(tau, w_max) * std::cos(w_max * delta);
    for (int k = 1; k < n_omega; ++k) {
        double w = k * h;
        acc += (k % 2 ? 4.0 : 2.0) * m.symbol(tau, w) * std::cos(w * delta);
    }
    return acc * h / 3.0 / M_PI;
}

} // namespace

DiscretizedOperator build_kernel(const WeylSymbolModel& model, int n_points, double extent) {
    if (n_points < 16)
        throw InvalidInputError("build_kernel requires n_points >= 16");
    if (!(extent > 0.0) || !std::isfinite(extent))
        throw InvalidInputError("extent must be positive and finite");
    if (!model.omega_symmetric())
        throw InvalidInputError("symbol must be even in omega for a real kernel");

    DiscretizedOperator op;
    op.spread = model.spread();
    op.dt = 2.0 * extent / n_points;
    op.t_grid.resize(static_cast<size_t>(n_points));
    for (int i = 0; i < n_points; ++i)
        op.t_grid[static_cast<size_t>(i)] = -extent + (i + 0.5) * op.dt;

    const auto& t = op.t_grid;
    Eigen::MatrixXd K(n_points, n_points);
    if (model.is_gaussian()) {
        double gamma = model.gamma(), r = model.spread();
        for (int i = 0; i < n_points; ++i)
            for (int j = 0; j <= i; ++j) {
                double v = gaussian_kernel(gamma, r, t[static_cast<size_t>(i)],
                                           t[static_cast<size_t>(j)]);
                K(i, j) = v;
                K(j, i) = v;
            }
    } else {
        // resolve the fastest cosine oscillation over the grid
        double w_max = model.omega_axis().back() * model.spread();
        double phase_max = w_max * 2.0 * extent;
        int n_omega = std::max(128, static_cast<int>(std::ceil(3.0 * phase_max)));
        n_omega += n_omega % 2; // Simpson needs an even interval count
        for (int i = 0; i < n_points; ++i)
            for (int j = 0; j <= i; ++j) {
                double tau = 0.5 * (t[static_cast<size_t>(i)] + t[static_cast<size_t>(j)]);
                double delta = t[static_cast<size_t>(i)] - t[static_cast<size_t>(j)];
                double v = tabulated_kernel(model, tau, delta, n_omega);
                K(i, j) = v;
                K(j, i) = v;
            }
    }

    // The window must cover the kernel support.
    double peak_diag = 0.0;
    for (int i = 0; i < n_points; ++i)
        peak_diag = std::max(peak_diag, std::abs(K(i, i)));
    double edge_diag = std::max(std::abs(K(0, 0)), std::abs(K(n_points - 1, n_points - 1)));
    if (peak_diag > 0.0 && edge_diag > 1e-9 * peak_diag)
        throw TruncationError("extent too small: kernel mass at the window boundary");

    op.kernel_matrix = K * op.dt;
    return op;
}

EigenSpectrum eigen_spectrum(const DiscretizedOperator& op, int top_k) {
    const int n = static_cast<int>(op.kernel_matrix.rows());
    if (top_k < 1 || top_k > n)
        throw InvalidInputError("top_k must lie in [1, n_points]");

    // kernel_matrix is symmetric, so the squared singular values are the
    // squared eigenvalues.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.kernel_matrix,
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericError("symmetric eigensolver failed on the discretized kernel");

    std::vector<double> lam(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double mu = solver.eigenvalues()(i);
        lam[static_cast<size_t>(i)] = mu * mu;
    }
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    lam.resize(static_cast<size_t>(top_k));

    EigenSpectrum spec;
    spec.eigenvalues = std::move(lam);
    spec.spread = op.spread;
    spec.n_points = n;
    spec.dt = op.dt;
    return spec;
}

int eigen_count(const EigenSpectrum& spectrum, double snr) {
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw InvalidInputError("snr must be positive and finite");
    double threshold = 1.0 / snr;
    int k = 0;
    while (k < static_cast<int>(spectrum.eigenvalues.size()) &&
           spectrum.eigenvalues[static_cast<size_t>(k)] > threshold)
        ++k;
    return k;
}

GridOverride auto_grid(const WeylSymbolModel& model, double r) {
    GridOverride g;
    double extent, dt;
    if (model.is_gaussian()) {
        // p_r(t,0) = exp(-t²/(2γ²r²)) falls below 1e-12 at |t| ≈ 7.44 γ r;
        // the off-diagonal kernel width is γ/r.
        extent = 7.5 * model.gamma() * r;
        dt = model.gamma() / (4.5 * r);
    } else {
        extent = std::max(std::abs(model.t_axis().front()), model.t_axis().back()) * r;
        double w_max = model.omega_axis().back();
        dt = M_PI / (1.5 * std::max(w_max, 1e-6) * r);
    }
    int n = static_cast<int>(std::ceil(2.0 * extent / dt));
    n = std::max(64, (n + 15) / 16 * 16);
    g.n_points = std::min(n, 4096);
    g.extent = extent;
    return g;
}

std::vector<SzegoRow> szego_convergence_study(const WeylSymbolModel& model, double snr,
                                              const std::vector<double>& r_values,
                                              const QuadratureConfig& quad,
                                              const GridOverride& grid,
                                              std::vector<EigenSpectrum>* spectra) {
    if (r_values.empty())
        throw InvalidInputError("r_values must be non-empty");
    if (!std::is_sorted(r_values.begin(), r_values.end()))
        throw InvalidInputError("r_values must be sorted increasing");
    for (double r : r_values)
        if (!(r >= 1.0))
            throw InvalidInputError("every spread factor must satisfy r >= 1");

    std::vector<SzegoRow> rows;
    rows.reserve(r_values.size());
    if (spectra)
        spectra->clear();
    for (double r : r_values) {
        WeylSymbolModel spread_model = model.with_spread(r);
        GridOverride g = auto_grid(model, r);
        if (grid.n_points > 0)
            g.n_points = grid.n_points;
        if (grid.extent > 0.0)
            g.extent = grid.extent;

        DiscretizedOperator op = build_kernel(spread_model, g.n_points, g.extent);
        EigenSpectrum spec = eigen_spectrum(op, g.n_points);

        SzegoRow row;
        row.r = r;
        row.count_discrete = eigen_count(spec, snr);
        row.count_integral = cnode::count_integral(spread_model, snr, quad);
        row.gap_normalized = std::abs(row.count_discrete - row.count_integral) / (r * r);
        row.n_points = g.n_points;
        row.extent = g.extent;
        rows.push_back(row);
        if (spectra)
            spectra->push_back(std::move(spec));
    }
    return rows;
}

} // namespace cnode
