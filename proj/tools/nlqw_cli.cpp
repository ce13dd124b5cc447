// nlqw: command-line front end for the nonlinear quantum walk toolkit.
//
// Usage:
//   nlqw <evolve|scatter|density|verify|sweep> --config run.json [--out dir]
//        [--jobs n] [--tol x] [--t-max n]
//
// Exit codes: 0 ok, 1 runtime error, 2 usage or validation error.
// `verify` exits 0 even when convergence targets are missed; the report
// carries the verdict.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nlqw/commands.hpp"
#include "nlqw/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw nlqw::Error("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear quantum walk simulator and weak-limit verifier"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  int jobs = 1;
  std::optional<double> tol;
  std::optional<int> t_max;

  for (const auto& [name, description] : {
           std::pair{"evolve", "evolve the walk and write the position distribution"},
           std::pair{"scatter", "extract the scattering asymptotic state u+"},
           std::pair{"density", "sample the weak-limit velocity density"},
           std::pair{"verify", "compare X_t/t against the weak-limit density"},
           std::pair{"sweep", "run verify over a (g, m, family) grid"},
       }) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--jobs", jobs, "concurrent sweep cells")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "scattering tolerance (overrides tolerances.scatter_tol)");
    sub->add_option("--t-max", t_max, "scattering horizon (overrides tolerances.t_max)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  nlqw::RunConfig config;
  try {
    config = nlqw::parse_config(read_file(config_path));
    if (out_dir) config.output.dir = *out_dir;
    if (tol) config.scatter_tol = *tol;
    if (t_max) config.t_max = *t_max;
    nlqw::validate_config(config);
  } catch (const nlqw::ValidationError& e) {
    for (const auto& v : e.violations()) std::cerr << "ValidationError: " << v << "\n";
    return kExitUsage;
  } catch (const nlqw::ParseError& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    nlohmann::json result;
    if (command == "evolve") {
      result = nlqw::run_evolve(config);
    } else if (command == "scatter") {
      result = nlqw::run_scatter(config);
    } else if (command == "density") {
      result = nlqw::run_density(config);
    } else if (command == "verify") {
      result = nlqw::run_verify(config);
      result.erase("config");
    } else {
      result = nlqw::run_sweep(config, jobs);
      result.erase("config");
    }
    std::cout << result.dump(2) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
