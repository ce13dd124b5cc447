#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nlqw/coins.hpp"
#include "nlqw/dynamics.hpp"
#include "nlqw/wlt.hpp"

namespace nlqw {

/// The `coin` block of a run configuration.
struct CoinSpec {
  double a_re = 0.0;
  double a_im = 0.0;
  double b_re = 0.0;
  double b_im = 0.0;
  CoinFamily family = CoinFamily::linear;
  int m = 2;
  double kappa = 1.0;
  double g = 0.0;

  friend bool operator==(const CoinSpec&, const CoinSpec&) = default;
};

struct InitialSite {
  Site x = 0;
  Complex up{};
  Complex down{};

  friend bool operator==(const InitialSite&, const InitialSite&) = default;
};

struct OutputSpec {
  std::string dir = "out";
  bool per_step = false;

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

/// Grid for the `sweep` subcommand; an empty axis keeps the base value.
struct SweepSpec {
  std::vector<double> g;
  std::vector<int> m;
  std::vector<CoinFamily> family;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct RunConfig {
  CoinSpec coin;
  std::vector<InitialSite> initial;
  int horizon = 1024;
  std::vector<int> checkpoints{256, 512, 1024, 2048, 4096};
  std::vector<double> xi_grid = VerifyOptions::default_xi_grid();
  double scatter_tol = 1e-6;
  int t_max = 4096;
  int n_nodes = kDefaultDensityNodes;
  OutputSpec output;
  std::optional<SweepSpec> sweep;

  NonlinearCoinModel model() const;
  LatticeState initial_state() const;
  WalkConfig walk() const;
  VerifyOptions verify_options() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses and validates a JSON run configuration. Throws ParseError on
/// malformed JSON and ValidationError listing every violation otherwise.
/// Unknown keys are violations.
RunConfig parse_config(std::string_view text);

/// Re-validates a config assembled in code (e.g. after CLI overrides).
void validate_config(const RunConfig& config);

nlohmann::json config_to_json(const RunConfig& config);
std::string emit_config(const RunConfig& config);

}  // namespace nlqw
