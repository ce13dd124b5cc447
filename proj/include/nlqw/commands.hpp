#pragma once

#include <filesystem>

#include "json.hpp"
#include "nlqw/config.hpp"

namespace nlqw {

/// Subcommand runners behind the CLI. Each writes its artifacts under
/// config.output.dir (created on demand) and returns the JSON it wrote.

/// distribution.csv (`x,p` at T), optional trajectory.csv (`t,x,p`) and
/// summary.json {T, norm_drift, support}.
nlohmann::json run_evolve(const RunConfig& config);

/// scatter.json {converged, final_T, defects, trace, tail_mass} and
/// u_plus.csv (`x,re_up,im_up,re_down,im_down`).
nlohmann::json run_scatter(const RunConfig& config);

/// density.csv (`v,w,f_k,density`) and density.json {total_mass, moments}.
nlohmann::json run_density(const RunConfig& config);

/// report.csv and manifest.json (config, scattering trace, annotations).
nlohmann::json run_verify(const RunConfig& config);

/// verify over the (g, m, family) grid of config.sweep, `jobs` cells at a
/// time, each cell in its own cell_NNN directory; index.json is written last.
nlohmann::json run_sweep(const RunConfig& config, int jobs);

/// `x,re_up,im_up,re_down,im_down` over the trimmed window.
std::string state_csv(const LatticeState& u);

/// Writes text to path, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace nlqw
