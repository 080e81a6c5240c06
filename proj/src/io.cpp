#include "cnode/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cnode {

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidInputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> parse_csv_numbers(const std::string& text,
                                                   const std::string& what) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) {
            try {
                size_t pos = 0;
                row.push_back(std::stod(tok, &pos));
            } catch (const std::exception&) {
                throw InvalidInputError(what + ": malformed number '" + tok + "'");
            }
        }
        if (!row.empty())
            rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw InvalidInputError(what + ": no data rows");
    return rows;
}

nlohmann::json parse_json_file(const std::string& path) {
    try {
        return nlohmann::json::parse(slurp(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInputError("JSON parse error in " + path + ": " + e.what());
    }
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows,
                          const std::string& what) {
    size_t n = rows.size();
    Eigen::MatrixXd m(n, rows[0].size());
    for (size_t i = 0; i < n; ++i) {
        if (rows[i].size() != rows[0].size())
            throw InvalidInputError(what + ": ragged rows");
        for (size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return m;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ChannelSpec read_channel_csv(const std::string& path, double noise_variance) {
    auto rows = parse_csv_numbers(slurp(path), "channel matrix " + path);
    return ChannelSpec(to_matrix(rows, path), noise_variance);
}

ChannelSpec read_channel_json(const std::string& path, double noise_override) {
    nlohmann::json j = parse_json_file(path);
    if (!j.contains("matrix"))
        throw InvalidInputError(path + ": missing \"matrix\"");
    std::vector<std::vector<double>> rows = j["matrix"].get<std::vector<std::vector<double>>>();
    if (rows.empty())
        throw InvalidInputError(path + ": empty matrix");
    double theta2 = noise_override != 0.0 ? noise_override : j.value("noise_variance", 1.0);
    return ChannelSpec(to_matrix(rows, path), theta2);
}

ChannelSpec read_channel_file(const std::string& path, double noise_override) {
    if (ends_with(path, ".json"))
        return read_channel_json(path, noise_override);
    return read_channel_csv(path, noise_override != 0.0 ? noise_override : 1.0);
}

WeylSymbolModel read_symbol_json(const std::string& path, double spread, double noise_psd) {
    nlohmann::json j = parse_json_file(path);
    std::string kind = j.value("kind", "");
    double r = j.contains("spread") ? j["spread"].get<double>() : spread;
    double theta2 = j.contains("noise_psd") ? j["noise_psd"].get<double>() : noise_psd;
    if (kind == "gaussian") {
        if (!j.contains("gamma"))
            throw InvalidInputError(path + ": gaussian symbol needs \"gamma\"");
        return WeylSymbolModel::gaussian(j["gamma"].get<double>(), r, theta2);
    }
    if (kind == "tabulated") {
        for (const char* key : {"t_axis", "omega_axis", "values"})
            if (!j.contains(key))
                throw InvalidInputError(path + std::string(": tabulated symbol needs \"") + key +
                                        "\"");
        return WeylSymbolModel::tabulated(j["t_axis"].get<std::vector<double>>(),
                                          j["omega_axis"].get<std::vector<double>>(),
                                          j["values"].get<std::vector<std::vector<double>>>(), r,
                                          theta2);
    }
    throw InvalidInputError(path + ": \"kind\" must be \"gaussian\" or \"tabulated\"");
}

WeylSymbolModel read_symbol_csv(const std::string& grid_path, const std::string& t_axis_path,
                                const std::string& omega_axis_path, double spread,
                                double noise_psd) {
    auto grid = parse_csv_numbers(slurp(grid_path), "symbol grid " + grid_path);
    auto column = [](const std::string& path) {
        auto rows = parse_csv_numbers(slurp(path), "axis " + path);
        std::vector<double> axis;
        for (const auto& r : rows)
            axis.insert(axis.end(), r.begin(), r.end());
        return axis;
    };
    return WeylSymbolModel::tabulated(column(t_axis_path), column(omega_axis_path),
                                      std::move(grid), spread, noise_psd);
}

void write_sweep_csv(const SweepTable& table, std::ostream& os) {
    for (size_t c = 0; c < table.columns.size(); ++c)
        os << (c ? "," : "") << table.columns[c];
    os << ",flag\n";
    for (size_t r = 0; r < table.rows.size(); ++r) {
        for (size_t c = 0; c < table.rows[r].size(); ++c)
            os << (c ? "," : "") << format_double(table.rows[r][c]);
        os << "," << table.flags[r] << "\n";
    }
}

void write_sweep_json(const SweepTable& table, std::ostream& os) {
    nlohmann::json j;
    j["axis_name"] = table.axis_name;
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    j["flags"] = table.flags;
    os << j.dump(2) << "\n";
}

SweepTable read_sweep_csv(std::istream& is) {
    SweepTable t;
    std::string line;
    if (!std::getline(is, line))
        throw InvalidInputError("sweep CSV: missing header");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    std::istringstream hs(line);
    std::string tok;
    std::vector<std::string> header;
    while (std::getline(hs, tok, ','))
        header.push_back(tok);
    if (header.empty() || header.back() != "flag")
        throw InvalidInputError("sweep CSV: last header column must be 'flag'");
    t.columns.assign(header.begin(), header.end() - 1);
    t.axis_name = t.columns.empty() ? "" : t.columns.front();
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::vector<double> row;
        std::string flag;
        size_t col = 0;
        while (std::getline(ls, tok, ',')) {
            if (col + 1 < header.size())
                row.push_back(std::stod(tok));
            else
                flag = tok;
            ++col;
        }
        if (line.back() == ',')
            flag = ""; // trailing empty flag field
        if (row.size() != t.columns.size())
            throw InvalidInputError("sweep CSV: row width does not match header");
        t.rows.push_back(std::move(row));
        t.flags.push_back(flag);
    }
    return t;
}

SweepTable read_sweep_json(std::istream& is) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInputError(std::string("sweep JSON parse error: ") + e.what());
    }
    SweepTable t;
    t.axis_name = j.value("axis_name", "");
    t.columns = j.at("columns").get<std::vector<std::string>>();
    t.rows = j.at("rows").get<std::vector<std::vector<double>>>();
    t.flags = j.at("flags").get<std::vector<std::string>>();
    if (t.flags.size() != t.rows.size())
        throw InvalidInputError("sweep JSON: flags/rows length mismatch");
    for (const auto& row : t.rows)
        if (row.size() != t.columns.size())
            throw InvalidInputError("sweep JSON: row width does not match columns");
    return t;
}

nlohmann::json to_json(const SimReport& report) {
    nlohmann::json j;
    j["trials"] = report.trials;
    j["snr"] = report.snr;
    j["noise_variance"] = report.noise_variance;
    j["active_count"] = report.active_count;
    j["empirical_error_variances"] = report.empirical_error_variances;
    j["empirical_mmse"] = report.empirical_mmse;
    j["empirical_mmse_stderr"] = report.empirical_mmse_stderr;
    j["analytic_mmse"] = report.analytic_mmse;
    // Spectral NODE is K·theta'^2; this sample statistic is our
    // operationalization, hence the "proxy" label.
    j["empirical_node_proxy"] = report.empirical_node_proxy;
    j["error_mean"] = report.error_mean;
    j["error_cross"] = report.error_cross;
    return j;
}

nlohmann::json to_json(const ContinuousReport& report) {
    return nlohmann::json{{"capacity", report.capacity}, {"count", report.count},
                          {"node", report.node},         {"mmse", report.mmse},
                          {"water_level", report.water_level}, {"snr", report.snr}};
}

nlohmann::json to_json(const WaterfillSolution& solution) {
    return nlohmann::json{{"water_level", solution.water_level},
                          {"active_count", solution.active_count},
                          {"powers", solution.powers},
                          {"snr", solution.snr}};
}

nlohmann::json to_json(const MmseReport& report) {
    return nlohmann::json{{"mmse", report.mmse},
                          {"node", report.node},
                          {"fisher_term", report.fisher_term},
                          {"snr", report.snr}};
}

nlohmann::json to_json(const SpectralChannel& spec) {
    return nlohmann::json{{"eigenvalues", spec.eigenvalues()},
                          {"noise_variance", spec.noise_variance()}};
}

} // namespace cnode
