// cnode: capacity, NODE, and MMSE calculators for vector and
// continuous-time Gaussian channels.
//
// Subcommands:
//   vgc       waterfilling / capacity / NODE / MMSE sweeps for a matrix channel
//   ltv       phase-plane integrals for a Weyl-symbol LTV channel
//   szego     eigenvalue-count vs counting-integral convergence study
//   simulate  Monte-Carlo matched-filter receiver
//
// Exit codes: 0 success, 2 usage error, 3 numeric/convergence failure.
// Errors are mirrored as JSON on stderr.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cnode/io.hpp"
#include "cnode/ltv.hpp"
#include "cnode/mcsim.hpp"
#include "cnode/spectral.hpp"
#include "cnode/sweep.hpp"
#include "cnode/weyl.hpp"

namespace {

void error_json(const std::string& type, const std::string& message) {
    nlohmann::json j{{"error", {{"type", type}, {"message", message}}}};
    std::cerr << j.dump() << "\n";
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ','))
        out.push_back(std::stod(tok));
    if (out.empty())
        throw cnode::InvalidInputError("empty list: " + text);
    return out;
}

struct OutputTarget {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::binary); // keep LF line endings everywhere
            if (!file)
                throw cnode::InvalidInputError("cannot open output file: " + path);
            os = &file;
        }
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"capacity / NODE / MMSE toolkit for Gaussian channels"};
    app.require_subcommand(1);
    app.fallthrough(); // global options are accepted after the subcommand

    std::string output, format = "csv", config_path;
    bool quiet = false;
    app.add_option("--output", output, "output file (default stdout)");
    app.add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--quiet", quiet, "suppress warnings on stderr");
    app.add_option("--config", config_path, "JSON config file (flags take precedence)");

    // ---- vgc ----
    auto* vgc = app.add_subcommand("vgc", "vector Gaussian channel");
    std::string vgc_matrix, vgc_snr, vgc_snr_db;
    double vgc_noise = 0.0, vgc_budget = 0.0, vgc_deriv_step = 1e-6;
    auto* vgc_matrix_opt = vgc->add_option("--matrix", vgc_matrix, "channel matrix (.csv or .json)");
    auto* vgc_noise_opt = vgc->add_option("--noise", vgc_noise, "noise variance theta^2");
    auto* vgc_budget_opt = vgc->add_option("--budget", vgc_budget, "input energy budget S");
    auto* vgc_snr_opt = vgc->add_option("--snr", vgc_snr, "linear snr grid lo:hi:step");
    auto* vgc_snr_db_opt = vgc->add_option("--snr-db", vgc_snr_db, "snr grid in dB lo:hi:step");
    vgc->add_option("--deriv-step", vgc_deriv_step, "relative step of the derivative check");

    // ---- ltv ----
    auto* ltv = app.add_subcommand("ltv", "continuous-time LTV channel");
    std::string ltv_symbol, ltv_symbol_csv, ltv_t_axis, ltv_omega_axis, ltv_snr, ltv_snr_db;
    double ltv_gamma = 0.0, ltv_r = 1.0, ltv_noise_psd = 1.0, ltv_quad_tol = 1e-7;
    double ltv_trunc = 0.0;
    int ltv_max_refine = 26;
    bool ltv_closed_form = false;
    auto* ltv_gamma_opt = ltv->add_option("--gaussian", ltv_gamma, "Gaussian symbol width gamma");
    auto* ltv_symbol_opt = ltv->add_option("--symbol", ltv_symbol, "symbol JSON file");
    ltv->add_option("--symbol-csv", ltv_symbol_csv, "symbol grid CSV");
    ltv->add_option("--t-axis", ltv_t_axis, "t axis CSV (with --symbol-csv)");
    ltv->add_option("--omega-axis", ltv_omega_axis, "omega axis CSV (with --symbol-csv)");
    auto* ltv_r_opt = ltv->add_option("--r", ltv_r, "spreading factor r >= 1");
    ltv->add_option("--noise-psd", ltv_noise_psd, "two-sided noise PSD N0/2");
    auto* ltv_snr_opt = ltv->add_option("--snr", ltv_snr, "linear snr grid lo:hi:step");
    auto* ltv_snr_db_opt = ltv->add_option("--snr-db", ltv_snr_db, "snr grid in dB lo:hi:step");
    auto* ltv_quad_tol_opt = ltv->add_option("--quad-tol", ltv_quad_tol, "quadrature tolerance");
    ltv->add_option("--max-refinement", ltv_max_refine, "quadtree depth cap");
    ltv->add_option("--truncation-radius", ltv_trunc, "explicit plane cutoff (0 = auto)");
    ltv->add_flag("--closed-form", ltv_closed_form, "add Gaussian analytic columns");

    // ---- szego ----
    auto* szego = app.add_subcommand("szego", "eigenvalue-count asymptotics study");
    std::string sz_symbol, sz_r_list = "1,2,4,8";
    double sz_gamma = 0.0, sz_snr = 0.0, sz_noise_psd = 1.0, sz_quad_tol = 1e-7, sz_extent = 0.0;
    int sz_n_points = 0;
    std::string sz_dump_spectra;
    auto* sz_gamma_opt = szego->add_option("--gaussian", sz_gamma, "Gaussian symbol width gamma");
    auto* sz_symbol_opt = szego->add_option("--symbol", sz_symbol, "symbol JSON file");
    auto* sz_snr_opt = szego->add_option("--snr", sz_snr, "snr (linear)");
    szego->add_option("--r", sz_r_list, "comma list of spreading factors");
    szego->add_option("--noise-psd", sz_noise_psd, "two-sided noise PSD N0/2");
    auto* sz_n_opt = szego->add_option("--n-points", sz_n_points, "grid size override (0 = auto)");
    auto* sz_ext_opt = szego->add_option("--extent", sz_extent, "grid half-width override (0 = auto)");
    szego->add_option("--quad-tol", sz_quad_tol, "quadrature tolerance");
    szego->add_option("--dump-spectra", sz_dump_spectra,
                      "write the per-r eigenvalue arrays (top 256) as JSON");

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo matched-filter receiver");
    std::string sim_matrix, sim_coeffs, sim_dump;
    double sim_noise = 0.0, sim_snr = 0.0;
    long sim_trials = 0;
    std::uint64_t sim_seed = 0;
    auto* sim_matrix_opt = sim->add_option("--matrix", sim_matrix, "channel matrix (.csv or .json)");
    auto* sim_noise_opt = sim->add_option("--noise", sim_noise, "noise variance theta^2");
    auto* sim_snr_opt = sim->add_option("--snr", sim_snr, "snr (linear)");
    auto* sim_trials_opt =
        sim->add_option("--trials", sim_trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--coefficients", sim_coeffs,
                    "fixed coefficient vector a_0,...,a_{L-1} (default: capacity-achieving)");
    sim->add_option("--dump-errors", sim_dump, "CSV dump of per-trial matched-filter errors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help and friends
        app.exit(e);
        error_json("usage", e.what());
        return 2;
    }

    try {
        // config file fills any option the command line left untouched
        nlohmann::json cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in)
                throw cnode::InvalidInputError("cannot open config file: " + config_path);
            cfg = nlohmann::json::parse(in);
        }
        auto merge = [&cfg](const std::string& section, const CLI::Option* opt,
                            const char* key, auto& var) {
            if (opt && opt->count() > 0)
                return;
            if (cfg.contains(section) && cfg[section].contains(key))
                var = cfg[section][key].get<std::decay_t<decltype(var)>>();
        };
        if (cfg.contains("output") && output.empty())
            output = cfg["output"].get<std::string>();
        if (cfg.contains("format") && format == "csv")
            format = cfg["format"].get<std::string>();

        if (app.got_subcommand(vgc)) {
            merge("vgc", vgc_matrix_opt, "matrix", vgc_matrix);
            merge("vgc", vgc_noise_opt, "noise", vgc_noise);
            merge("vgc", vgc_budget_opt, "budget", vgc_budget);
            merge("vgc", vgc_snr_opt, "snr", vgc_snr);
            merge("vgc", vgc_snr_db_opt, "snr_db", vgc_snr_db);
            if (vgc_matrix.empty())
                throw cnode::InvalidInputError("vgc requires --matrix");
            bool has_budget = vgc_budget != 0.0;
            if (static_cast<int>(has_budget) + static_cast<int>(!vgc_snr.empty()) +
                    static_cast<int>(!vgc_snr_db.empty()) != 1)
                throw cnode::InvalidInputError("vgc needs exactly one of --budget, --snr, --snr-db");

            cnode::ChannelSpec chan = cnode::read_channel_file(vgc_matrix, vgc_noise);
            cnode::SpectralChannel spec = cnode::spectrum(chan);
            OutputTarget out(output);
            if (has_budget) {
                if (format == "json") {
                    cnode::WaterfillSolution sol = cnode::waterfill(spec, vgc_budget);
                    nlohmann::json j = cnode::to_json(sol);
                    j["capacity"] = cnode::capacity_from_snr(spec, sol.snr);
                    j["node"] = cnode::node(spec, sol.snr);
                    j["mmse"] = cnode::mmse(spec, sol.snr).mmse;
                    *out.os << j.dump(2) << "\n";
                } else {
                    cnode::write_sweep_csv(cnode::vgc_budget_row(spec, vgc_budget), *out.os);
                }
            } else {
                bool in_db = !vgc_snr_db.empty();
                auto grid = cnode::expand_range(in_db ? vgc_snr_db : vgc_snr);
                auto table = cnode::vgc_sweep(spec, grid, in_db, vgc_deriv_step);
                format == "json" ? cnode::write_sweep_json(table, *out.os)
                                 : cnode::write_sweep_csv(table, *out.os);
            }
            return 0;
        }

        if (app.got_subcommand(ltv)) {
            merge("ltv", ltv_gamma_opt, "gaussian", ltv_gamma);
            merge("ltv", ltv_symbol_opt, "symbol", ltv_symbol);
            merge("ltv", ltv_r_opt, "r", ltv_r);
            merge("ltv", ltv_snr_opt, "snr", ltv_snr);
            merge("ltv", ltv_snr_db_opt, "snr_db", ltv_snr_db);
            merge("ltv", ltv_quad_tol_opt, "quad_tol", ltv_quad_tol);

            cnode::WeylSymbolModel model = [&] {
                int sources = static_cast<int>(ltv_gamma != 0.0) +
                              static_cast<int>(!ltv_symbol.empty()) +
                              static_cast<int>(!ltv_symbol_csv.empty());
                if (sources != 1)
                    throw cnode::InvalidInputError(
                        "ltv needs exactly one of --gaussian, --symbol, --symbol-csv");
                if (ltv_gamma != 0.0)
                    return cnode::WeylSymbolModel::gaussian(ltv_gamma, ltv_r, ltv_noise_psd);
                if (!ltv_symbol.empty())
                    return cnode::read_symbol_json(ltv_symbol, ltv_r, ltv_noise_psd);
                if (ltv_t_axis.empty() || ltv_omega_axis.empty())
                    throw cnode::InvalidInputError("--symbol-csv needs --t-axis and --omega-axis");
                return cnode::read_symbol_csv(ltv_symbol_csv, ltv_t_axis, ltv_omega_axis, ltv_r,
                                              ltv_noise_psd);
            }();
            if (ltv_snr.empty() == ltv_snr_db.empty())
                throw cnode::InvalidInputError("ltv needs exactly one of --snr, --snr-db");

            cnode::QuadratureConfig quad;
            quad.tolerance = ltv_quad_tol;
            quad.max_refinement = ltv_max_refine;
            quad.truncation_radius = ltv_trunc;

            bool in_db = !ltv_snr_db.empty();
            auto grid = cnode::expand_range(in_db ? ltv_snr_db : ltv_snr);
            if (!model.is_gaussian() && !quiet) {
                for (double v : grid) {
                    double snr = in_db ? std::pow(10.0, v / 10.0) : v;
                    if (snr <= 0.0)
                        continue;
                    double frac = model.flat_level_fraction(
                        1.0 / snr, quad.tolerance * model.peak_squared());
                    if (frac > 0.01) {
                        std::cerr << "warning: symbol looks flat near level 1/snr at snr=" << snr
                                  << " (" << frac * 100 << "% of grid cells); "
                                  << "level-set integrals may be ill-conditioned there\n";
                    }
                }
            }
            auto table = cnode::ltv_sweep(model, grid, in_db, quad, ltv_closed_form);
            OutputTarget out(output);
            format == "json" ? cnode::write_sweep_json(table, *out.os)
                             : cnode::write_sweep_csv(table, *out.os);
            return 0;
        }

        if (app.got_subcommand(szego)) {
            merge("szego", sz_gamma_opt, "gaussian", sz_gamma);
            merge("szego", sz_symbol_opt, "symbol", sz_symbol);
            merge("szego", sz_snr_opt, "snr", sz_snr);
            if (static_cast<int>(sz_gamma != 0.0) + static_cast<int>(!sz_symbol.empty()) != 1)
                throw cnode::InvalidInputError("szego needs exactly one of --gaussian, --symbol");
            if (!(sz_snr > 0.0))
                throw cnode::InvalidInputError("szego requires --snr > 0");
            cnode::WeylSymbolModel model =
                sz_gamma != 0.0 ? cnode::WeylSymbolModel::gaussian(sz_gamma, 1.0, sz_noise_psd)
                                : cnode::read_symbol_json(sz_symbol, 1.0, sz_noise_psd);
            cnode::QuadratureConfig quad;
            quad.tolerance = sz_quad_tol;
            cnode::GridOverride grid{sz_n_points, sz_extent};
            if (!sz_symbol.empty()) {
                // the symbol JSON may carry its own grid sizing
                std::ifstream in(sz_symbol);
                auto sj = nlohmann::json::parse(in);
                if (sz_n_opt->count() == 0 && sj.contains("n_points"))
                    grid.n_points = sj["n_points"].get<int>();
                if (sz_ext_opt->count() == 0 && sj.contains("extent"))
                    grid.extent = sj["extent"].get<double>();
            }
            std::vector<cnode::EigenSpectrum> spectra;
            auto rows = cnode::szego_convergence_study(model, sz_snr, parse_list(sz_r_list), quad,
                                                       grid,
                                                       sz_dump_spectra.empty() ? nullptr : &spectra);
            if (!sz_dump_spectra.empty()) {
                std::ofstream sp(sz_dump_spectra, std::ios::binary);
                if (!sp)
                    throw cnode::InvalidInputError("cannot open spectra file: " + sz_dump_spectra);
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& s : spectra) {
                    size_t keep = std::min<size_t>(s.eigenvalues.size(), 256);
                    arr.push_back({{"r", s.spread},
                                   {"n_points", s.n_points},
                                   {"dt", s.dt},
                                   {"eigenvalues", std::vector<double>(s.eigenvalues.begin(),
                                                                       s.eigenvalues.begin() +
                                                                           static_cast<long>(keep))}});
                }
                sp << arr.dump(2) << "\n";
            }
            auto table = cnode::szego_table(rows);
            OutputTarget out(output);
            format == "json" ? cnode::write_sweep_json(table, *out.os)
                             : cnode::write_sweep_csv(table, *out.os);
            return 0;
        }

        if (app.got_subcommand(sim)) {
            merge("simulate", sim_matrix_opt, "matrix", sim_matrix);
            merge("simulate", sim_noise_opt, "noise", sim_noise);
            merge("simulate", sim_snr_opt, "snr", sim_snr);
            merge("simulate", sim_trials_opt, "trials", sim_trials);
            if (sim_matrix.empty())
                throw cnode::InvalidInputError("simulate requires --matrix");
            cnode::ChannelSpec chan = cnode::read_channel_file(sim_matrix, sim_noise);
            cnode::SimConfig cfg_sim;
            cfg_sim.trials = sim_trials;
            cfg_sim.seed = sim_seed;
            cfg_sim.snr = sim_snr;
            if (!sim_coeffs.empty()) {
                cfg_sim.input_mode = cnode::InputMode::fixed_coefficients;
                cfg_sim.fixed_coefficients = parse_list(sim_coeffs);
            }
            std::ofstream dump;
            if (!sim_dump.empty()) {
                dump.open(sim_dump, std::ios::binary);
                if (!dump)
                    throw cnode::InvalidInputError("cannot open dump file: " + sim_dump);
                for (int k = 0; k < chan.dim(); ++k)
                    dump << (k ? "," : "") << "e_" << k;
                dump << "\n";
                cfg_sim.sample_sink = [&dump](const double* e, int L) {
                    for (int k = 0; k < L; ++k)
                        dump << (k ? "," : "") << cnode::format_double(e[k]);
                    dump << "\n";
                };
            }
            cnode::SimReport rep = cnode::simulate_matched_filter(chan, cfg_sim);
            nlohmann::json j = cnode::to_json(rep);
            if (rep.trials >= 10000) {
                auto white = cnode::error_whiteness_test(rep);
                j["max_offdiag_corr"] = white.max_offdiag_corr;
                j["whiteness_threshold"] = white.threshold;
            }
            OutputTarget out(output);
            *out.os << j.dump(2) << "\n";
            return 0;
        }
        return 0;
    } catch (const cnode::ConvergenceError& e) {
        error_json("convergence", e.what());
        return 3;
    } catch (const cnode::NumericError& e) {
        error_json("numeric", e.what());
        return 3;
    } catch (const cnode::InfeasibleSnrError& e) {
        error_json("infeasible_snr", e.what());
        return 2;
    } catch (const cnode::NoSignalPathError& e) {
        error_json("no_signal_path", e.what());
        return 2;
    } catch (const cnode::InvalidInputError& e) {
        error_json("invalid_input", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        error_json("invalid_input", e.what());
        return 2;
    } catch (const std::exception& e) {
        error_json("internal", e.what());
        return 3;
    }
}
