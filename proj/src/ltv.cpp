#include "cnode/ltv.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace cnode {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

QuadratureResult checked(QuadratureResult res, const char* what) {
    if (!res.converged)
        throw ConvergenceError(std::string(what) +
                               ": quadrature did not converge within max_refinement");
    return res;
}

void require_positive_snr(double snr) {
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw InvalidInputError("snr must be positive and finite");
}

} // namespace

double cup_function(const WeylSymbolModel& model, double t, double omega) {
    double u = model.squared(t, omega);
    if (u <= 0.0)
        return std::numeric_limits<double>::infinity();
    return model.noise_psd() / (kTwoPi * u);
}

double solve_water_level(const WeylSymbolModel& model, double budget,
                         const QuadratureConfig& quad) {
    validate(quad);
    if (!(budget > 0.0) || !std::isfinite(budget))
        throw InvalidInputError("energy budget must be positive");

    const double theta2 = model.noise_psd();
    // ∬(ν - N_r)⁺ over the region u ≥ θ²/(2πν), where the integrand vanishes
    // on the level curve; strictly increasing in ν.
    auto filled = [&](double nu) {
        double level = theta2 / (kTwoPi * nu);
        auto f = [&](double u) { return nu - theta2 / (kTwoPi * u); };
        return checked(superlevel_integral(model, level, f, quad), "solve_water_level").value;
    };

    double lo = theta2 / (kTwoPi * model.peak_squared()); // water touches the cup minimum
    double hi = 2.0 * lo;
    int grow = 0;
    while (filled(hi) < budget) {
        lo = hi;
        hi *= 2.0;
        if (++grow > 200)
            throw ConvergenceError("solve_water_level: bracket search failed");
    }
    double nu = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        nu = 0.5 * (lo + hi);
        double r = filled(nu) - budget;
        if (std::abs(r) <= std::max(quad.tolerance, 1e-12) * budget)
            return nu;
        (r < 0.0 ? lo : hi) = nu;
        if (hi - lo <= 1e-14 * hi)
            return 0.5 * (lo + hi);
    }
    return nu;
}

double capacity_integral(const WeylSymbolModel& model, double snr,
                         const QuadratureConfig& quad) {
    require_positive_snr(snr);
    double level = 1.0 / snr;
    if (level >= model.peak_squared())
        return 0.0;
    auto f = [snr](double u) { return std::log(snr * u); };
    return checked(superlevel_integral(model, level, f, quad), "capacity_integral").value /
           (2.0 * kTwoPi);
}

double count_integral(const WeylSymbolModel& model, double snr,
                      const QuadratureConfig& quad) {
    require_positive_snr(snr);
    double level = 1.0 / snr;
    if (level >= model.peak_squared())
        return 0.0;
    auto f = [](double) { return 1.0; };
    return checked(superlevel_integral(model, level, f, quad), "count_integral").value / kTwoPi;
}

double node_integral(const WeylSymbolModel& model, double snr,
                     const QuadratureConfig& quad) {
    return count_integral(model, snr, quad) / snr;
}

double mmse_integral(const WeylSymbolModel& model, double snr,
                     const QuadratureConfig& quad) {
    require_positive_snr(snr);
    double level = 1.0 / snr;
    if (level >= model.peak_squared())
        return 0.0;
    auto f = [snr](double u) { return (1.0 - 1.0 / (snr * u)) / snr; };
    return checked(superlevel_integral(model, level, f, quad), "mmse_integral").value / kTwoPi;
}

AveragedLimits averaged_limits(const WeylSymbolModel& model, double snr,
                               const QuadratureConfig& quad) {
    WeylSymbolModel unspread = model.with_spread(1.0);
    return {node_integral(unspread, snr, quad), mmse_integral(unspread, snr, quad)};
}

LogDerivativeCheck log_integral_derivative_check(const WeylSymbolModel& model, double snr, double h,
                                    const QuadratureConfig& quad) {
    require_positive_snr(snr);
    if (!(h > 0.0) || !std::isfinite(h))
        throw InvalidInputError("derivative step must be positive");
    double s_min = 1.0 / model.peak_squared();
    if (!(snr > s_min))
        throw InvalidInputError("log-integral derivative check requires snr > 1/M (nonempty region)");
    if (!(snr - h > s_min))
        throw InvalidInputError("derivative stencil leaves (1/M, infinity)");
    auto J = [&](double s) { return 2.0 * kTwoPi * capacity_integral(model, s, quad); };
    LogDerivativeCheck out;
    out.numeric = (J(snr + h) - J(snr - h)) / (2.0 * h);
    out.analytic = kTwoPi * count_integral(model, snr, quad) / snr;
    return out;
}

ContinuousReport continuous_report(const WeylSymbolModel& model, double snr,
                                   const QuadratureConfig& quad) {
    require_positive_snr(snr);
    ContinuousReport rep;
    rep.snr = snr;
    rep.capacity = capacity_integral(model, snr, quad);
    rep.count = count_integral(model, snr, quad);
    rep.node = rep.count / snr;
    rep.mmse = mmse_integral(model, snr, quad);
    rep.water_level = snr * model.noise_psd() / kTwoPi; // σ² = 2πν and σ² = snr·θ²
    return rep;
}

double gaussian_count_closed_form(double snr, double spread) {
    if (!(snr > 1.0))
        return 0.0;
    return 0.5 * spread * spread * std::log(snr);
}

double gaussian_node_closed_form(double snr, double spread) {
    return gaussian_count_closed_form(snr, spread) / snr;
}

double gaussian_capacity_closed_form(double snr, double spread) {
    if (!(snr > 1.0))
        return 0.0;
    double l = std::log(snr);
    return spread * spread * l * l / 8.0;
}

double gaussian_mmse_closed_form(double snr, double spread) {
    if (!(snr > 1.0))
        return 0.0;
    return 0.5 * spread * spread * (std::log(snr) / snr - (1.0 - 1.0 / snr) / snr);
}

} // namespace cnode
