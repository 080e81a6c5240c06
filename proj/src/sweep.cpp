#include "cnode/sweep.hpp"

#include <cmath>
#include <string>

namespace cnode {

namespace {

double to_db(double snr) {
    return 10.0 * std::log10(snr);
}

} // namespace

std::vector<double> expand_range(const std::string& text) {
    auto c1 = text.find(':');
    std::vector<double> out;
    try {
        if (c1 == std::string::npos) {
            out.push_back(std::stod(text));
            return out;
        }
        auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw InvalidInputError("range must be lo:hi:step or a single value: " + text);
        double lo = std::stod(text.substr(0, c1));
        double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        double step = std::stod(text.substr(c2 + 1));
        if (!(step > 0.0))
            throw InvalidInputError("range step must be positive: " + text);
        if (hi < lo)
            throw InvalidInputError("range end below start: " + text);
        long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
        out.reserve(static_cast<size_t>(n));
        for (long i = 0; i < n; ++i)
            out.push_back(lo + static_cast<double>(i) * step);
        return out;
    } catch (const std::invalid_argument&) {
        throw InvalidInputError("malformed numeric range: " + text);
    } catch (const std::out_of_range&) {
        throw InvalidInputError("range value out of double range: " + text);
    }
}

SweepTable vgc_sweep(const SpectralChannel& spec, const std::vector<double>& snr_values,
                     bool values_in_db, double h_rel) {
    SweepTable t;
    t.axis_name = values_in_db ? "snr_db" : "snr";
    t.columns = {"snr_db", "snr",         "capacity",       "node",
                 "mmse",   "fisher_term", "dC_dsnr_numeric"};
    const double snr_min = spec.min_feasible_snr();
    for (double v : snr_values) {
        double snr = values_in_db ? std::pow(10.0, v / 10.0) : v;
        std::string flag;
        double cap = 0.0, nd = 0.0, ms = 0.0, fi = 0.0, deriv = 0.0;
        if (snr < snr_min) {
            flag = "infeasible";
        } else {
            cap = capacity_from_snr(spec, snr);
            nd = node(spec, snr);
            MmseReport rep = mmse(spec, snr);
            ms = rep.mmse;
            fi = rep.fisher_term;
            double h = h_rel * snr;
            double room = 0.5 * (snr - snr_min);
            if (room > 0.0) {
                DerivativeCheck d = capacity_derivative_check(spec, snr, std::min(h, room));
                deriv = d.numeric;
                if (d.jump_adjacent)
                    flag = "jump";
            } else {
                flag = "boundary"; // snr == lambda_0^{-1}: no two-sided stencil
            }
        }
        t.rows.push_back({to_db(snr), snr, cap, nd, ms, fi, deriv});
        t.flags.push_back(flag);
    }
    return t;
}

SweepTable vgc_budget_row(const SpectralChannel& spec, double budget) {
    WaterfillSolution sol = waterfill(spec, budget);
    SweepTable t;
    t.axis_name = "budget";
    t.columns = {"budget", "water_level", "snr", "active_count", "capacity", "node", "mmse"};
    MmseReport rep = mmse(spec, sol.snr);
    t.rows.push_back({budget, sol.water_level, sol.snr, static_cast<double>(sol.active_count),
                      capacity_from_snr(spec, sol.snr), node(spec, sol.snr), rep.mmse});
    t.flags.emplace_back();
    return t;
}

SweepTable ltv_sweep(const WeylSymbolModel& model, const std::vector<double>& snr_values,
                     bool values_in_db, const QuadratureConfig& quad, bool closed_form) {
    if (closed_form && !model.is_gaussian())
        throw InvalidInputError("closed-form columns exist for the Gaussian symbol only");
    SweepTable t;
    t.axis_name = values_in_db ? "snr_db" : "snr";
    t.columns = {"snr_db", "snr", "capacity", "count", "node", "mmse", "gap"};
    if (closed_form)
        for (const char* c : {"capacity_exact", "node_exact", "mmse_exact", "capacity_rel_err",
                              "node_rel_err", "mmse_rel_err"})
            t.columns.push_back(c);
    for (double v : snr_values) {
        double snr = values_in_db ? std::pow(10.0, v / 10.0) : v;
        ContinuousReport rep;
        try {
            rep = continuous_report(model, snr, quad);
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("snr=" + std::to_string(snr) + ": " + e.what());
        }
        std::vector<double> row = {to_db(snr), snr,      rep.capacity, rep.count,
                                   rep.node,   rep.mmse, rep.node - rep.mmse};
        if (closed_form) {
            double r = model.spread();
            double ce = gaussian_capacity_closed_form(snr, r);
            double ne = gaussian_node_closed_form(snr, r);
            double me = gaussian_mmse_closed_form(snr, r);
            auto rel = [](double got, double exact) {
                return std::abs(got - exact) / std::max(std::abs(exact), 1e-300);
            };
            for (double x : {ce, ne, me, rel(rep.capacity, ce), rel(rep.node, ne),
                             rel(rep.mmse, me)})
                row.push_back(x);
        }
        t.rows.push_back(std::move(row));
        t.flags.emplace_back();
    }
    return t;
}

SweepTable szego_table(const std::vector<SzegoRow>& study) {
    SweepTable t;
    t.axis_name = "r";
    t.columns = {"r", "K", "K_check", "gap_normalized"};
    for (const SzegoRow& row : study) {
        t.rows.push_back({row.r, row.count_discrete, row.count_integral, row.gap_normalized});
        t.flags.emplace_back();
    }
    return t;
}

} // namespace cnode
