#include <doctest.h>

#include <cmath>

#include "cnode/spectral.hpp"
#include "cnode/weyl.hpp"
#include "oracles.hpp"

using namespace cnode;

namespace {

const double kE = std::exp(1.0);
constexpr double kTwoPi = 6.283185307179586476925287;

QuadratureConfig quad() {
    QuadratureConfig q;
    q.tolerance = 1e-7;
    return q;
}

} // namespace

TEST_CASE("build_kernel: closed-form value at the origin") {
    auto m = WeylSymbolModel::gaussian(1.0);
    auto op = build_kernel(m, 64, 12.0);
    // h(0,0) = 1/sqrt(2 pi); the grid is midpoint-offset, so evaluate the
    // nearest sample against the closed form at that point.
    int mid = 32; // t = +dt/2
    double t = op.t_grid[static_cast<size_t>(mid)];
    double expect = 1.0 / std::sqrt(kTwoPi) * std::exp(-t * t / 8.0 - t * t / 2.0 + t * t);
    // h(t,t) = (1/sqrt(2pi)) exp(-(2t)^2/8) for r = gamma = 1
    expect = 1.0 / std::sqrt(kTwoPi) * std::exp(-t * t / 2.0);
    CHECK(op.kernel_matrix(mid, mid) / op.dt == doctest::Approx(expect).epsilon(1e-12));
    CHECK(op.dt == doctest::Approx(24.0 / 64).epsilon(1e-15));
}

TEST_CASE("build_kernel: symmetric matrix for real even symbols") {
    auto m = WeylSymbolModel::gaussian(0.7, 2.0);
    auto op = build_kernel(m, 48, 16.0);
    double asym = (op.kernel_matrix - op.kernel_matrix.transpose()).cwiseAbs().maxCoeff();
    CHECK(asym == 0.0);
}

TEST_CASE("build_kernel: input validation and truncation guard") {
    auto m = WeylSymbolModel::gaussian(1.0);
    CHECK_THROWS_AS(build_kernel(m, 8, 12.0), InvalidInputError);
    CHECK_THROWS_AS(build_kernel(m, 64, -1.0), InvalidInputError);
    CHECK_THROWS_AS(build_kernel(m, 64, 2.0), TruncationError); // window inside the support
}

TEST_CASE("eigen_spectrum: Mehler-formula oracle at r = 1") {
    auto m = WeylSymbolModel::gaussian(1.0);
    auto op = build_kernel(m, 512, 12.0);
    auto spec = eigen_spectrum(op, 10);
    // lambda_k = (4/9) 9^{-k}
    CHECK(spec.eigenvalues[0] == doctest::Approx(4.0 / 9.0).epsilon(1e-10));
    CHECK(spec.eigenvalues[1] == doctest::Approx(4.0 / 81.0).epsilon(1e-10));
    CHECK(spec.eigenvalues[2] == doctest::Approx(4.0 / 729.0).epsilon(1e-10));
    for (int k = 0; k + 1 < 6; ++k)
        CHECK(spec.eigenvalues[static_cast<size_t>(k + 1)] /
                  spec.eigenvalues[static_cast<size_t>(k)] ==
              doctest::Approx(1.0 / 9.0).epsilon(1e-8));
    for (double v : spec.eigenvalues)
        CHECK(v >= 0.0);
}

TEST_CASE("eigen_spectrum: Mehler oracle across spreads and gamma invariance") {
    for (double r : {1.0, 2.0}) {
        auto g1 = eigen_spectrum(build_kernel(WeylSymbolModel::gaussian(1.0, r), 256, 14.0 * r), 6);
        auto g2 = eigen_spectrum(build_kernel(WeylSymbolModel::gaussian(1.6, r), 384, 22.0 * r), 6);
        for (int k = 0; k < 6; ++k) {
            double exact = oracle::mehler_eigenvalue(k, r);
            CHECK(g1.eigenvalues[static_cast<size_t>(k)] == doctest::Approx(exact).epsilon(1e-8));
            CHECK(g2.eigenvalues[static_cast<size_t>(k)] == doctest::Approx(exact).epsilon(1e-8));
        }
    }
}

TEST_CASE("eigen_spectrum: grid self-convergence and extent robustness") {
    auto m = WeylSymbolModel::gaussian(1.0);
    auto coarse = eigen_spectrum(build_kernel(m, 128, 12.0), 10);
    auto fine = eigen_spectrum(build_kernel(m, 256, 12.0), 10);
    auto wide = eigen_spectrum(build_kernel(m, 192, 18.0), 10);
    for (int k = 0; k < 10; ++k) {
        double f = fine.eigenvalues[static_cast<size_t>(k)];
        CHECK(std::abs(coarse.eigenvalues[static_cast<size_t>(k)] - f) <= 1e-6 * f);
        CHECK(std::abs(wide.eigenvalues[static_cast<size_t>(k)] - f) <= 1e-8 * f);
    }
}

TEST_CASE("eigen_spectrum: operator norm bounded by the symbol peak") {
    auto m = WeylSymbolModel::gaussian(1.0, 4.0);
    auto op = build_kernel(m, 768, 7.5 * 4.0);
    auto spec = eigen_spectrum(op, 1);
    CHECK(spec.eigenvalues[0] <= m.peak_squared() * (1.0 + 1e-3));
}

TEST_CASE("eigen_spectrum: top_k validation") {
    auto op = build_kernel(WeylSymbolModel::gaussian(1.0), 64, 12.0);
    CHECK_THROWS_AS(eigen_spectrum(op, 0), InvalidInputError);
    CHECK_THROWS_AS(eigen_spectrum(op, 65), InvalidInputError);
}

TEST_CASE("eigen_count: strict threshold") {
    EigenSpectrum s;
    s.eigenvalues = {0.9, 0.5, 0.1};
    CHECK(eigen_count(s, 2.0) == 1); // the tie at the 0.5 threshold is excluded
    CHECK(eigen_count(s, 2.0 + 1e-9) == 2);
    CHECK(eigen_count(s, 1.0) == 0);
    CHECK(eigen_count(s, 100.0) == 3);
    CHECK_THROWS_AS(eigen_count(s, 0.0), InvalidInputError);
}

TEST_CASE("szego study: small spreads match the Mehler count") {
    auto m = WeylSymbolModel::gaussian(1.0);
    auto rows = szego_convergence_study(m, kE, {1.0, 2.0}, quad());
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].count_discrete == doctest::Approx(oracle::mehler_count(kE, 1.0)));
    CHECK(rows[1].count_discrete == doctest::Approx(oracle::mehler_count(kE, 2.0)));
    CHECK(rows[0].count_integral == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(rows[1].count_integral == doctest::Approx(2.0).epsilon(1e-6));
    // K(1,e) = 1 vs K-check 0.5; K(2,e) = 2 vs 2: gap collapses already
    CHECK(rows[0].gap_normalized == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(rows[1].gap_normalized == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("szego study: snr below 1/M gives all-zero counts") {
    auto m = WeylSymbolModel::gaussian(1.0);
    auto rows = szego_convergence_study(m, 0.5, {1.0}, quad());
    CHECK(rows[0].count_discrete == 0.0);
    CHECK(rows[0].count_integral == 0.0);
}

TEST_CASE("szego study: argument validation") {
    auto m = WeylSymbolModel::gaussian(1.0);
    CHECK_THROWS_AS(szego_convergence_study(m, kE, {}, quad()), InvalidInputError);
    CHECK_THROWS_AS(szego_convergence_study(m, kE, {2.0, 1.0}, quad()), InvalidInputError);
    CHECK_THROWS_AS(szego_convergence_study(m, kE, {0.5}, quad()), InvalidInputError);
}

TEST_CASE("discretized spectrum feeds the vector-channel formulas") {
    auto m = WeylSymbolModel::gaussian(1.0);
    auto spec = eigen_spectrum(build_kernel(m, 256, 12.0), 32);
    double theta2 = 0.7;
    SpectralChannel chan(spec.eigenvalues, theta2);
    double snr = kE;
    int K = eigen_count(spec, snr);
    CHECK(node(chan, snr) == doctest::Approx(K / snr));
    // waterfilling over nu_k^2(r) = theta^2/lambda_k^(r) behaves as in the
    // finite-dimensional module
    auto sol = waterfill(chan, 2.0);
    double total = 0.0;
    for (double p : sol.powers)
        total += p;
    CHECK(std::abs(total - 2.0) <= 1e-10 * 2.0);
    CHECK(gaussian_mutual_information(chan, sol.powers) ==
          doctest::Approx(capacity_from_snr(chan, sol.snr)).epsilon(1e-10));
}

TEST_CASE("szego study runs on a tabulated symbol") {
    int n = 97;
    std::vector<double> t(static_cast<size_t>(n)), w(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        t[static_cast<size_t>(i)] = w[static_cast<size_t>(i)] = -8.0 + 16.0 * i / (n - 1);
    std::vector<std::vector<double>> vals(static_cast<size_t>(n),
                                          std::vector<double>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double q = t[static_cast<size_t>(i)] * t[static_cast<size_t>(i)] +
                       w[static_cast<size_t>(j)] * w[static_cast<size_t>(j)];
            double v = std::exp(-q / 2.0);
            vals[static_cast<size_t>(i)][static_cast<size_t>(j)] = v < 1e-13 ? 0.0 : v;
        }
    auto tab = WeylSymbolModel::tabulated(t, w, vals);
    QuadratureConfig q;
    q.tolerance = 1e-4; // interpolation error dominates
    auto rows = szego_convergence_study(tab, kE, {1.0}, q);
    REQUIRE(rows.size() == 1);
    // the sampled Gaussian behaves like the analytic one at this grid scale
    CHECK(rows[0].count_discrete == 1.0);
    CHECK(rows[0].count_integral == doctest::Approx(0.5).epsilon(5e-3));
}

TEST_CASE("tabulated even symbol builds a real symmetric kernel") {
    int n = 65;
    std::vector<double> t(static_cast<size_t>(n)), w(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        t[static_cast<size_t>(i)] = w[static_cast<size_t>(i)] = -8.0 + 16.0 * i / (n - 1);
    std::vector<std::vector<double>> vals(static_cast<size_t>(n),
                                          std::vector<double>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double q = t[static_cast<size_t>(i)] * t[static_cast<size_t>(i)] +
                       w[static_cast<size_t>(j)] * w[static_cast<size_t>(j)];
            double v = std::exp(-q / 2.0);
            vals[static_cast<size_t>(i)][static_cast<size_t>(j)] = v < 1e-13 ? 0.0 : v;
        }
    auto tab = WeylSymbolModel::tabulated(t, w, vals);
    auto op = build_kernel(tab, 64, 12.0);
    double asym = (op.kernel_matrix - op.kernel_matrix.transpose()).cwiseAbs().maxCoeff();
    CHECK(asym == 0.0);
    // The sampled Gaussian reproduces the analytic top eigenvalue up to the
    // (second-order) interpolation error of the 0.25-spaced grid.
    auto spec = eigen_spectrum(op, 3);
    CHECK(spec.eigenvalues[0] == doctest::Approx(4.0 / 9.0).epsilon(2e-2));

    // odd-in-omega symbols are rejected
    auto odd = vals;
    odd[32][40] += 0.1;
    CHECK_THROWS_AS(build_kernel(WeylSymbolModel::tabulated(t, w, odd), 64, 12.0),
                    InvalidInputError);
}
