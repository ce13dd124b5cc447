#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlqw/dynamics.hpp"
#include "nlqw/scattering.hpp"
#include "nlqw/spectral.hpp"

namespace nlqw {

/// Born-rule distribution of X_t.
struct EmpiricalDistribution {
  int t = 0;
  std::map<Site, double> p;

  /// Throws NotNormalized unless the state has unit norm within 1e-9.
  static EmpiricalDistribution from_state(int t, const LatticeState& u);
};

/// E exp(i xi X_t / t) = sum_x exp(i xi x / t) p(x).
Complex char_fn_empirical(const EmpiricalDistribution& dist, double xi);

/// Empirical moment E (X_t / t)^n.
double empirical_moment(const EmpiricalDistribution& dist, int n);

/// Right-continuous step CDF of X_t / t.
class StepCdf {
 public:
  StepCdf() = default;
  StepCdf(std::vector<double> jumps, std::vector<double> values);

  double operator()(double v) const;
  /// Left limit F(v-).
  double left_limit(double v) const;

  const std::vector<double>& jumps() const { return jumps_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> jumps_;
  std::vector<double> values_;  // F at each jump point
};

StepCdf empirical_cdf(const EmpiricalDistribution& dist);

using CdfFunction = std::function<double(double)>;

/// sup over the empirical jump points of |F_emp - F| using both one-sided
/// limits, so the supremum over the real line is attained for continuous F.
double ks_distance(const StepCdf& empirical, const CdfFunction& theoretical);
double ks_distance(const StepCdf& empirical, const SampledCdf& theoretical);

struct CheckpointMetrics {
  int t = 0;
  double ks = 0.0;
  std::array<double, 4> moment_err{};
  double charfn_sup_err = 0.0;
};

struct VerifyOptions {
  std::vector<int> checkpoints{256, 512, 1024, 2048, 4096};
  std::vector<double> xi_grid = default_xi_grid();
  int n_nodes = kDefaultDensityNodes;
  double scatter_tol = 1e-6;
  int t_max = 4096;
  /// Relative slack allowed between consecutive checkpoints.
  double trend_slack = 0.10;
  /// Levels at which a metric counts as small; ten times them as large.
  double ks_small = 0.05;
  double charfn_small = 0.02;

  static std::vector<double> default_xi_grid();
};

struct ConvergenceReport {
  std::vector<CheckpointMetrics> rows;
  /// "initial_state" when the walk is linear, "scattering" otherwise.
  std::string reference_source;
  std::optional<ScatteringResult> scattering;
  double reference_total_mass = 0.0;
  bool reference_mass_check_passed = false;
  std::array<double, 4> reference_moments{};
  bool ks_trend_ok = false;
  bool charfn_trend_ok = false;
  /// One of ks / char-fn small at the final checkpoint while the other is large.
  bool route_disagreement = false;
  std::vector<std::string> annotations;
};

/// Evolves once through every checkpoint and compares X_t / t against the
/// limit density built from u+ (u0 itself for a linear walk, the scattering
/// estimate otherwise). Non-convergent scattering is annotated, not thrown.
ConvergenceReport verify(const WalkConfig& config, const VerifyOptions& options = {});

/// Same, with u+ already extracted.
ConvergenceReport verify(const WalkConfig& config, const VerifyOptions& options,
                         std::optional<ScatteringResult> scattering);

/// CSV `t,ks,m1_err,m2_err,m3_err,m4_err,charfn_sup_err`.
std::string report_csv(const ConvergenceReport& report);

}  // namespace nlqw
