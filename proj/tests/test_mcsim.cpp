#include <doctest.h>

#include <cmath>

#include "cnode/mcsim.hpp"

using namespace cnode;

namespace {

Eigen::MatrixXd rotation45() {
    double c = std::sqrt(0.5);
    Eigen::MatrixXd m(2, 2);
    m << c, -c, c, c;
    return m;
}

SimConfig base_config(long trials, std::uint64_t seed, double snr) {
    SimConfig cfg;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.snr = snr;
    return cfg;
}

} // namespace

TEST_CASE("matched filter: identity channel statistics") {
    ChannelSpec chan(Eigen::MatrixXd::Identity(2, 2), 1.0);
    auto rep = simulate_matched_filter(chan, base_config(100000, 7, 2.0));

    double band = 3.0 * std::sqrt(2.0 / 100000.0); // 3 sigma of the variance estimate
    for (double v : rep.empirical_error_variances)
        CHECK(std::abs(v - 1.0) <= band);
    CHECK(rep.analytic_mmse == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(rep.empirical_mmse - 0.5) <= 0.01);
    CHECK(std::abs(rep.empirical_mmse - rep.analytic_mmse) <= 3.0 * rep.empirical_mmse_stderr);
    CHECK(rep.active_count == 2);
    CHECK(rep.empirical_node_proxy == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("matched filter: zero input leaves pure filtered noise") {
    ChannelSpec chan(Eigen::MatrixXd::Identity(2, 2), 2.5);
    auto cfg = base_config(50000, 11, 2.0);
    cfg.input_mode = InputMode::fixed_coefficients;
    cfg.fixed_coefficients = {0.0, 0.0};
    auto rep = simulate_matched_filter(chan, cfg);
    double band = 3.0 * 2.5 * std::sqrt(2.0 / 50000.0);
    for (double v : rep.empirical_error_variances)
        CHECK(std::abs(v - 2.5) <= band);
}

TEST_CASE("matched filter: seed determinism and seed sensitivity") {
    ChannelSpec chan(Eigen::MatrixXd::Identity(2, 2), 1.0);
    auto a = simulate_matched_filter(chan, base_config(20000, 123, 2.0));
    auto b = simulate_matched_filter(chan, base_config(20000, 123, 2.0));
    CHECK(a.empirical_mmse == b.empirical_mmse);
    CHECK(a.empirical_error_variances == b.empirical_error_variances);
    CHECK(a.error_cross == b.error_cross);

    auto c = simulate_matched_filter(chan, base_config(20000, 124, 2.0));
    CHECK(c.empirical_mmse != a.empirical_mmse);
    double band = 3.0 * std::sqrt(2.0 / 20000.0);
    for (const auto& rep : {a, c})
        for (double v : rep.empirical_error_variances)
            CHECK(std::abs(v - 1.0) <= band);
}

TEST_CASE("matched filter: config validation") {
    ChannelSpec chan(Eigen::MatrixXd::Identity(2, 2), 1.0);
    CHECK_THROWS_AS(simulate_matched_filter(chan, base_config(0, 1, 2.0)), InvalidInputError);
    CHECK_THROWS_AS(simulate_matched_filter(chan, base_config(10, 1, -2.0)), InvalidInputError);
    auto cfg = base_config(10, 1, 2.0);
    cfg.input_mode = InputMode::fixed_coefficients;
    cfg.fixed_coefficients = {1.0}; // wrong length
    CHECK_THROWS_AS(simulate_matched_filter(chan, cfg), InvalidInputError);
}

TEST_CASE("whiteness: identity and rotated channels stay inside the band") {
    ChannelSpec id2(Eigen::MatrixXd::Identity(2, 2), 1.0);
    auto rep = simulate_matched_filter(id2, base_config(100000, 3, 2.0));
    auto white = error_whiteness_test(rep);
    CHECK(white.threshold == doctest::Approx(4.0 / std::sqrt(100000.0)));
    CHECK(white.max_offdiag_corr < white.threshold);

    // orthogonal G preserves whiteness
    ChannelSpec rot(rotation45(), 1.0);
    auto rrep = simulate_matched_filter(rot, base_config(100000, 5, 2.0));
    CHECK(error_whiteness_test(rrep).max_offdiag_corr < white.threshold);
}

TEST_CASE("whiteness: insufficient trials rejected") {
    ChannelSpec chan(Eigen::MatrixXd::Identity(2, 2), 1.0);
    auto rep = simulate_matched_filter(chan, base_config(10, 1, 2.0));
    CHECK_THROWS_AS(error_whiteness_test(rep), InvalidInputError);
}

TEST_CASE("matched filter: random 4x4 channel against the analytic MMSE") {
    Eigen::MatrixXd H(4, 4);
    H << 0.9, -0.3, 0.2, 0.05, 0.1, 1.2, -0.4, 0.3, -0.2, 0.1, 0.8, -0.6, 0.4, 0.2, 0.1, 1.1;
    ChannelSpec chan(H, 0.5);
    auto rep = simulate_matched_filter(chan, base_config(100000, 17, 6.0));
    double band = 3.0 * 0.5 * std::sqrt(2.0 / 100000.0);
    for (double v : rep.empirical_error_variances)
        CHECK(std::abs(v - 0.5) <= band);
    CHECK(std::abs(rep.empirical_mmse - rep.analytic_mmse) <= 3.0 * rep.empirical_mmse_stderr);
    CHECK(error_whiteness_test(rep).max_offdiag_corr < 4.0 / std::sqrt(100000.0));
}
