#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "cnode/ltv.hpp"
#include "cnode/mcsim.hpp"
#include "cnode/spectral.hpp"
#include "cnode/sweep.hpp"
#include "cnode/symbol.hpp"

namespace cnode {

// Channel matrix from CSV (L rows of L comma-separated reals).
ChannelSpec read_channel_csv(const std::string& path, double noise_variance);
// Channel from JSON {"matrix": [[...]], "noise_variance": x}; an explicit
// noise override replaces the stored value when non-zero.
ChannelSpec read_channel_json(const std::string& path, double noise_override = 0.0);
ChannelSpec read_channel_file(const std::string& path, double noise_override = 0.0);

// Symbol from JSON: {"kind":"gaussian","gamma":g,...} or
// {"kind":"tabulated","t_axis":[...],"omega_axis":[...],"values":[[...]],...}.
WeylSymbolModel read_symbol_json(const std::string& path, double spread, double noise_psd);
// Tabulated symbol from a CSV value grid plus two single-column axis files.
WeylSymbolModel read_symbol_csv(const std::string& grid_path, const std::string& t_axis_path,
                                const std::string& omega_axis_path, double spread,
                                double noise_psd);

// CSV dialect: comma separators, '.' decimal point, header row, LF line
// endings, 17 significant digits.
void write_sweep_csv(const SweepTable& table, std::ostream& os);
void write_sweep_json(const SweepTable& table, std::ostream& os);
SweepTable read_sweep_csv(std::istream& is);
SweepTable read_sweep_json(std::istream& is);

nlohmann::json to_json(const SimReport& report);
nlohmann::json to_json(const ContinuousReport& report);
nlohmann::json to_json(const WaterfillSolution& solution);
nlohmann::json to_json(const MmseReport& report);
nlohmann::json to_json(const SpectralChannel& spec);

std::string format_double(double v); // %.17g

} // namespace cnode
