#include "cnode/mcsim.hpp"

#include <cmath>
#include <future>
#include <random>

namespace cnode {

namespace {

constexpr long kBlockTrials = 8192;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Box-Muller over mt19937_64 uniforms: fully specified draw sequence, unlike
// std::normal_distribution, so reports are bit-identical across platforms.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

    double next() {
        if (have_) {
            have_ = false;
            return cached_;
        }
        double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1p-53; // (0, 1]
        double u2 = static_cast<double>(eng_() >> 11) * 0x1p-53;         // [0, 1)
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 6.283185307179586476925287 * u2;
        cached_ = rad * std::sin(ang);
        have_ = true;
        return rad * std::cos(ang);
    }

  private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool have_ = false;
};

struct BlockStats {
    std::vector<double> err_sum, err_cross; // L and L*L accumulators
    double mmse_sum = 0.0, mmse_sq_sum = 0.0;

    explicit BlockStats(int L)
        : err_sum(static_cast<size_t>(L), 0.0),
          err_cross(static_cast<size_t>(L) * static_cast<size_t>(L), 0.0) {}

    void absorb(const BlockStats& o) {
        for (size_t i = 0; i < err_sum.size(); ++i)
            err_sum[i] += o.err_sum[i];
        for (size_t i = 0; i < err_cross.size(); ++i)
            err_cross[i] += o.err_cross[i];
        mmse_sum += o.mmse_sum;
        mmse_sq_sum += o.mmse_sq_sum;
    }
};

} // namespace

SimReport simulate_matched_filter(const ChannelSpec& channel, const SimConfig& config) {
    if (config.trials < 1)
        throw InvalidInputError("trials must be >= 1");
    if (!(config.snr > 0.0) || !std::isfinite(config.snr))
        throw InvalidInputError("snr must be positive and finite");

    const int L = channel.dim();
    const double theta2 = channel.noise_variance;
    const double theta = std::sqrt(theta2);
    const double sigma2 = config.snr * theta2;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(channel.matrix,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXd G = svd.matrixU();
    Eigen::MatrixXd F = svd.matrixV();
    Eigen::VectorXd root_lam = svd.singularValues();

    std::vector<double> lam(static_cast<size_t>(L));
    for (int k = 0; k < L; ++k)
        lam[static_cast<size_t>(k)] = root_lam(k) * root_lam(k);
    SpectralChannel spec(lam, theta2);
    const int K = spec.active_count(config.snr);

    // capacity-achieving per-coefficient std deviations sqrt((σ² - ν_k²)⁺)
    std::vector<double> coeff_std(static_cast<size_t>(L), 0.0);
    for (int k = 0; k < K; ++k)
        coeff_std[static_cast<size_t>(k)] = std::sqrt(sigma2 - spec.noise_profile(k));

    if (config.input_mode == InputMode::fixed_coefficients &&
        static_cast<int>(config.fixed_coefficients.size()) != L)
        throw InvalidInputError("fixed coefficient vector length must match the channel dimension");

    // Per-subchannel linear MMSE of s_k = sqrt(λ_k) a_k / σ from the
    // normalized observation √snr·s_k + e_k/θ (Gaussian conditional mean).
    std::vector<double> lmmse_gain(static_cast<size_t>(L), 0.0);
    std::vector<double> signal_scale(static_cast<size_t>(L), 0.0);
    for (int k = 0; k < K; ++k) {
        double var_s = lam[static_cast<size_t>(k)] - 1.0 / config.snr; // λ_k(1 - 1/(snr λ_k))
        double rt = std::sqrt(config.snr);
        lmmse_gain[static_cast<size_t>(k)] = rt * var_s / (config.snr * var_s + 1.0);
        signal_scale[static_cast<size_t>(k)] = root_lam(k) / std::sqrt(sigma2);
    }

    const long blocks = (config.trials + kBlockTrials - 1) / kBlockTrials;

    auto run_block = [&](long b) {
        BlockStats st(L);
        long first = b * kBlockTrials;
        long count = std::min(kBlockTrials, config.trials - first);
        GaussianStream rng(splitmix64(config.seed ^ (0x5851f42d4c957f2dULL * (b + 1))));
        Eigen::VectorXd a(L), x(L), n(L), y(L), bhat(L);
        std::vector<double> err_row(static_cast<size_t>(L));
        for (long t = 0; t < count; ++t) {
            if (config.input_mode == InputMode::capacity_achieving) {
                for (int k = 0; k < L; ++k)
                    a(k) = coeff_std[static_cast<size_t>(k)] > 0.0
                               ? coeff_std[static_cast<size_t>(k)] * rng.next()
                               : 0.0;
            } else {
                for (int k = 0; k < L; ++k)
                    a(k) = config.fixed_coefficients[static_cast<size_t>(k)];
            }
            for (int k = 0; k < L; ++k)
                n(k) = theta * rng.next();
            x = F * a;
            y = channel.matrix * x + n;
            bhat = G.transpose() * y;

            double trial_mmse = 0.0;
            for (int k = 0; k < L; ++k) {
                double e = bhat(k) - root_lam(k) * a(k);
                err_row[static_cast<size_t>(k)] = e;
                st.err_sum[static_cast<size_t>(k)] += e;
                for (int j = 0; j <= k; ++j) {
                    double ej = bhat(j) - root_lam(j) * a(j);
                    st.err_cross[static_cast<size_t>(k) * static_cast<size_t>(L) +
                                 static_cast<size_t>(j)] += e * ej;
                }
                if (k < K) {
                    double s = signal_scale[static_cast<size_t>(k)] * a(k);
                    double obs = std::sqrt(config.snr) * s + e / theta;
                    double diff = s - lmmse_gain[static_cast<size_t>(k)] * obs;
                    trial_mmse += diff * diff;
                }
            }
            st.mmse_sum += trial_mmse;
            st.mmse_sq_sum += trial_mmse * trial_mmse;
            if (config.sample_sink)
                config.sample_sink(err_row.data(), L);
        }
        return st;
    };

    // Blocks carry their own RNG streams, so the reduction below is
    // independent of scheduling; combine in block order. A sample sink
    // forces serial execution to keep the dump in trial order.
    BlockStats total(L);
    if (config.sample_sink) {
        for (long b = 0; b < blocks; ++b)
            total.absorb(run_block(b));
    } else {
        std::vector<std::future<BlockStats>> futs;
        futs.reserve(static_cast<size_t>(blocks));
        for (long b = 0; b < blocks; ++b)
            futs.push_back(std::async(std::launch::async | std::launch::deferred, run_block, b));
        for (auto& f : futs)
            total.absorb(f.get());
    }

    const double n_inv = 1.0 / static_cast<double>(config.trials);
    SimReport rep;
    rep.trials = config.trials;
    rep.active_count = K;
    rep.snr = config.snr;
    rep.noise_variance = theta2;
    rep.error_mean.resize(static_cast<size_t>(L));
    rep.error_cross.resize(static_cast<size_t>(L) * static_cast<size_t>(L));
    rep.empirical_error_variances.resize(static_cast<size_t>(L));
    double mean_var = 0.0;
    for (int k = 0; k < L; ++k) {
        rep.error_mean[static_cast<size_t>(k)] = total.err_sum[static_cast<size_t>(k)] * n_inv;
        for (int j = 0; j < L; ++j) {
            size_t lo = static_cast<size_t>(std::max(k, j)) * static_cast<size_t>(L) +
                        static_cast<size_t>(std::min(k, j));
            rep.error_cross[static_cast<size_t>(k) * static_cast<size_t>(L) +
                            static_cast<size_t>(j)] = total.err_cross[lo] * n_inv;
        }
        double m = rep.error_mean[static_cast<size_t>(k)];
        double raw = rep.error_cross[static_cast<size_t>(k) * static_cast<size_t>(L) +
                                     static_cast<size_t>(k)];
        double var = (raw - m * m) * static_cast<double>(config.trials) /
                     std::max(1.0, static_cast<double>(config.trials - 1));
        rep.empirical_error_variances[static_cast<size_t>(k)] = var;
        mean_var += var;
    }
    mean_var /= L;

    rep.empirical_mmse = total.mmse_sum * n_inv;
    double mmse_var = std::max(0.0, total.mmse_sq_sum * n_inv -
                                        rep.empirical_mmse * rep.empirical_mmse);
    rep.empirical_mmse_stderr = std::sqrt(mmse_var * n_inv);
    rep.analytic_mmse = mmse(spec, config.snr).mmse;
    rep.empirical_node_proxy = K * mean_var / sigma2;
    return rep;
}

WhitenessResult error_whiteness_test(const SimReport& report) {
    if (report.trials < 10000)
        throw InvalidInputError("whiteness test requires at least 10^4 trials");
    const int L = static_cast<int>(report.error_mean.size());
    WhitenessResult res;
    res.threshold = 4.0 / std::sqrt(static_cast<double>(report.trials));
    for (int i = 0; i < L; ++i) {
        double vi = report.error_cross[static_cast<size_t>(i) * static_cast<size_t>(L) +
                                       static_cast<size_t>(i)] -
                    report.error_mean[static_cast<size_t>(i)] * report.error_mean[static_cast<size_t>(i)];
        for (int j = 0; j < i; ++j) {
            double vj = report.error_cross[static_cast<size_t>(j) * static_cast<size_t>(L) +
                                           static_cast<size_t>(j)] -
                        report.error_mean[static_cast<size_t>(j)] *
                            report.error_mean[static_cast<size_t>(j)];
            double cov = report.error_cross[static_cast<size_t>(i) * static_cast<size_t>(L) +
                                            static_cast<size_t>(j)] -
                         report.error_mean[static_cast<size_t>(i)] *
                             report.error_mean[static_cast<size_t>(j)];
            double corr = cov / std::sqrt(vi * vj);
            res.max_offdiag_corr = std::max(res.max_offdiag_corr, std::abs(corr));
        }
    }
    return res;
}

} // namespace cnode
