#include "nlqw/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "nlqw/errors.hpp"
#include "nlqw/format.hpp"
#include "nlqw/scattering.hpp"
#include "nlqw/spectral.hpp"

namespace nlqw {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_json(const fs::path& path, const json& value) { write_text(path, value.dump(2) + "\n"); }

json scattering_json(const ScatteringResult& s) {
  json defects = json::array();
  json trace = json::array();
  for (const auto& d : s.trace) {
    defects.push_back(d.defect);
    trace.push_back({{"T", d.T}, {"defect", d.defect}});
  }
  return {{"converged", s.converged},
          {"final_T", s.final_T},
          {"defects", defects},
          {"trace", trace},
          {"tail_mass", s.tail_mass}};
}

// u+ for the density subcommand: u0 for a linear walk, the scattering
// estimate otherwise.
std::pair<LatticeState, std::optional<ScatteringResult>> asymptotic_state(const RunConfig& config) {
  const auto walk = config.walk();
  walk.validate();
  if (walk.model.acts_linearly()) return {walk.initial, std::nullopt};
  auto result = extract_asymptotic(walk.initial, walk.model, config.scatter_tol, config.t_max);
  LatticeState u_plus = result.u_plus;
  return {std::move(u_plus), std::move(result)};
}

}  // namespace

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::string state_csv(const LatticeState& u) {
  std::string out = "x,re_up,im_up,re_down,im_down\n";
  const LatticeState t = u.trimmed();
  for (Site x = t.window_min(); !t.empty() && x <= t.window_max(); ++x) {
    const Spinor& s = t[x];
    out += std::to_string(x);
    for (const double value : {s.up.real(), s.up.imag(), s.down.real(), s.down.imag()}) {
      out += ',';
      out += format_number(value);
    }
    out += '\n';
  }
  return out;
}

json run_evolve(const RunConfig& config) {
  const fs::path dir = config.output.dir;
  const WalkConfig walk = config.walk();
  const double initial_norm = norm_l2(walk.initial);

  std::string trajectory = "t,x,p\n";
  LatticeState final_state;
  evolve(walk, [&](int t, const LatticeState& u) {
    if (config.output.per_step) {
      for (const auto& [x, p] : intensity(u)) {
        trajectory += std::to_string(t) + ',' + std::to_string(x) + ',' + format_number(p) + '\n';
      }
    }
    if (t == walk.horizon) final_state = u;
  });

  const auto p = intensity(final_state);
  write_text(dir / "distribution.csv", distribution_csv(p));
  if (config.output.per_step) write_text(dir / "trajectory.csv", trajectory);

  json support = json::array();
  if (!p.empty()) support = {p.begin()->first, p.rbegin()->first};
  const json summary = {{"T", walk.horizon},
                        {"norm_drift", std::abs(norm_l2(final_state) - initial_norm)},
                        {"support", support}};
  write_json(dir / "summary.json", summary);
  return summary;
}

json run_scatter(const RunConfig& config) {
  const fs::path dir = config.output.dir;
  const WalkConfig walk = config.walk();
  walk.validate();
  const auto result = extract_asymptotic(walk.initial, walk.model, config.scatter_tol, config.t_max);
  const json out = scattering_json(result);
  write_text(dir / "u_plus.csv", state_csv(result.u_plus));
  write_json(dir / "scatter.json", out);
  return out;
}

json run_density(const RunConfig& config) {
  const fs::path dir = config.output.dir;
  const auto [u_plus, scattering] = asymptotic_state(config);
  const auto density = limit_density(u_plus, config.model().base, config.n_nodes);
  json moments = json::array();
  if (density.total_mass > 0.0) {
    for (int n = 1; n <= 4; ++n) moments.push_back(density_moment(density, n));
  }
  json out = {{"total_mass", density.total_mass},
              {"moments", moments},
              {"nodes", density.size()},
              {"mass_check_passed", density.mass_check_passed}};
  if (scattering) out["scattering"] = scattering_json(*scattering);
  write_text(dir / "density.csv", density_csv(density));
  write_json(dir / "density.json", out);
  return out;
}

json run_verify(const RunConfig& config) {
  const fs::path dir = config.output.dir;
  const auto report = verify(config.walk(), config.verify_options());
  json manifest = {
      {"config", config_to_json(config)},
      {"reference",
       {{"source", report.reference_source},
        {"total_mass", report.reference_total_mass},
        {"mass_check_passed", report.reference_mass_check_passed},
        {"moments", report.reference_moments}}},
      {"scattering", report.scattering ? scattering_json(*report.scattering) : json(nullptr)},
      {"ks_trend_ok", report.ks_trend_ok},
      {"charfn_trend_ok", report.charfn_trend_ok},
      {"route_disagreement", report.route_disagreement},
      {"annotations", report.annotations},
      {"report", "report.csv"},
  };
  write_text(dir / "report.csv", report_csv(report));
  write_json(dir / "manifest.json", manifest);
  return manifest;
}

json run_sweep(const RunConfig& config, int jobs) {
  const fs::path dir = config.output.dir;
  const SweepSpec grid = config.sweep.value_or(SweepSpec{});
  const auto gs = grid.g.empty() ? std::vector<double>{config.coin.g} : grid.g;
  const auto ms = grid.m.empty() ? std::vector<int>{config.coin.m} : grid.m;
  const auto fams = grid.family.empty() ? std::vector<CoinFamily>{config.coin.family} : grid.family;

  std::vector<RunConfig> cells;
  for (const auto family : fams) {
    for (const int m : ms) {
      for (const double g : gs) {
        RunConfig cell = config;
        cell.sweep.reset();
        cell.coin.family = family;
        cell.coin.m = m;
        cell.coin.g = g;
        char name[32];
        std::snprintf(name, sizeof(name), "cell_%03zu", cells.size());
        cell.output.dir = (dir / name).string();
        cells.push_back(std::move(cell));
      }
    }
  }

  std::vector<json> entries(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const RunConfig& cell = cells[i];
      json entry = {{"cell", i},
                    {"dir", fs::path(cell.output.dir).filename().string()},
                    {"family", std::string(to_string(cell.coin.family))},
                    {"m", cell.coin.m},
                    {"g", cell.coin.g}};
      try {
        const json manifest = run_verify(cell);
        entry["ks_trend_ok"] = manifest["ks_trend_ok"];
        entry["charfn_trend_ok"] = manifest["charfn_trend_ok"];
        entry["converged"] = manifest["scattering"].is_null() ? json(true) : manifest["scattering"]["converged"];
        entry["annotations"] = manifest["annotations"];
      } catch (const std::exception& e) {
        entry["error"] = e.what();
      }
      entries[i] = std::move(entry);
    }
  };
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }

  const json index = {{"cells", entries}, {"config", config_to_json(config)}};
  write_json(dir / "index.json", index);
  return index;
}

}  // namespace nlqw
