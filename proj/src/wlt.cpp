#include "nlqw/wlt.hpp"

#include <algorithm>
#include <cmath>

#include "nlqw/errors.hpp"
#include "nlqw/format.hpp"

namespace nlqw {

namespace {

bool non_increasing(const std::vector<double>& values, double slack) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > (1.0 + slack) * values[i - 1]) return false;
  }
  return true;
}

CheckpointMetrics measure(const EmpiricalDistribution& dist, const VelocityDensity& density, const SampledCdf& cdf,
                          const std::array<double, 4>& moments, const std::vector<double>& xi_grid) {
  CheckpointMetrics row;
  row.t = dist.t;
  row.ks = ks_distance(empirical_cdf(dist), cdf);
  for (int n = 1; n <= 4; ++n) {
    row.moment_err[static_cast<std::size_t>(n - 1)] = std::abs(empirical_moment(dist, n) - moments[n - 1]);
  }
  for (const double xi : xi_grid) {
    row.charfn_sup_err =
        std::max(row.charfn_sup_err, std::abs(char_fn_empirical(dist, xi) - char_fn_theoretical(density, xi)));
  }
  return row;
}

}  // namespace

EmpiricalDistribution EmpiricalDistribution::from_state(int t, const LatticeState& u) {
  return {t, position_distribution(u)};
}

Complex char_fn_empirical(const EmpiricalDistribution& dist, double xi) {
  const double scale = dist.t > 0 ? 1.0 / dist.t : 0.0;
  Complex acc{};
  for (const auto& [x, px] : dist.p) acc += std::polar(px, xi * static_cast<double>(x) * scale);
  return acc;
}

double empirical_moment(const EmpiricalDistribution& dist, int n) {
  const double scale = dist.t > 0 ? 1.0 / dist.t : 0.0;
  double acc = 0.0;
  for (const auto& [x, px] : dist.p) acc += std::pow(static_cast<double>(x) * scale, n) * px;
  return acc;
}

StepCdf::StepCdf(std::vector<double> jumps, std::vector<double> values)
    : jumps_(std::move(jumps)), values_(std::move(values)) {}

double StepCdf::operator()(double v) const {
  const auto it = std::upper_bound(jumps_.begin(), jumps_.end(), v);
  if (it == jumps_.begin()) return 0.0;
  return values_[static_cast<std::size_t>(it - jumps_.begin()) - 1];
}

double StepCdf::left_limit(double v) const {
  const auto it = std::lower_bound(jumps_.begin(), jumps_.end(), v);
  if (it == jumps_.begin()) return 0.0;
  return values_[static_cast<std::size_t>(it - jumps_.begin()) - 1];
}

StepCdf empirical_cdf(const EmpiricalDistribution& dist) {
  const double scale = dist.t > 0 ? 1.0 / dist.t : 1.0;
  std::vector<double> jumps, values;
  jumps.reserve(dist.p.size());
  values.reserve(dist.p.size());
  double acc = 0.0;
  for (const auto& [x, px] : dist.p) {
    acc += px;
    jumps.push_back(static_cast<double>(x) * scale);
    values.push_back(acc);
  }
  return StepCdf(std::move(jumps), std::move(values));
}

double ks_distance(const StepCdf& empirical, const CdfFunction& theoretical) {
  double sup = 0.0;
  for (std::size_t i = 0; i < empirical.jumps().size(); ++i) {
    const double v = empirical.jumps()[i];
    const double before = i == 0 ? 0.0 : empirical.values()[i - 1];
    const double theory_before = theoretical(std::nextafter(v, -HUGE_VAL));
    sup = std::max({sup, std::abs(empirical.values()[i] - theoretical(v)), std::abs(before - theory_before)});
  }
  return std::min(sup, 1.0);
}

double ks_distance(const StepCdf& empirical, const SampledCdf& theoretical) {
  return ks_distance(empirical, CdfFunction([&](double v) { return theoretical(v); }));
}

std::vector<double> VerifyOptions::default_xi_grid() {
  std::vector<double> grid;
  for (int xi = -10; xi <= 10; ++xi) grid.push_back(xi);
  return grid;
}

ConvergenceReport verify(const WalkConfig& config, const VerifyOptions& options) {
  std::optional<ScatteringResult> scattering;
  if (!config.model.acts_linearly()) {
    scattering = extract_asymptotic(config.initial, config.model, options.scatter_tol, options.t_max);
  }
  return verify(config, options, std::move(scattering));
}

ConvergenceReport verify(const WalkConfig& config, const VerifyOptions& options,
                         std::optional<ScatteringResult> scattering) {
  config.validate();
  if (options.checkpoints.empty() || !std::is_sorted(options.checkpoints.begin(), options.checkpoints.end()) ||
      options.checkpoints.front() <= 0 ||
      std::adjacent_find(options.checkpoints.begin(), options.checkpoints.end()) != options.checkpoints.end()) {
    throw OutOfRange("checkpoints must be positive and strictly increasing");
  }

  ConvergenceReport report;
  LatticeState u_plus = config.initial;
  if (scattering) {
    report.reference_source = "scattering";
    u_plus = scattering->u_plus;
    const auto& trace = scattering->trace;
    const double last_defect = trace.empty() ? 0.0 : trace.back().defect;
    if (!scattering->converged) {
      report.annotations.push_back("NotConverged: scattering defect " + format_number(last_defect) +
                                   " at T = " + std::to_string(scattering->final_T) +
                                   "; metrics use the last back-propagated state");
    }
    report.annotations.push_back("scattering error budget: defect " + format_number(last_defect) + ", tail mass " +
                                 format_number(scattering->tail_mass));
  } else {
    report.reference_source = "initial_state";
  }
  report.scattering = std::move(scattering);

  const VelocityDensity density = limit_density(u_plus, config.model.base, options.n_nodes);
  report.reference_total_mass = density.total_mass;
  report.reference_mass_check_passed = density.mass_check_passed;
  if (!density.mass_check_passed) {
    report.annotations.push_back("limit density mass " + format_number(density.total_mass) + " misses |u+|^2 = " +
                                 format_number(density.expected_mass));
  }
  const SampledCdf cdf = density_cdf(density);
  for (int n = 1; n <= 4; ++n) report.reference_moments[n - 1] = density_moment(density, n);

  Walker walker(config.model, config.initial, options.checkpoints.back());
  for (const int t : options.checkpoints) {
    walker.advance_to(t);
    const auto dist = EmpiricalDistribution::from_state(t, walker.state());
    report.rows.push_back(measure(dist, density, cdf, report.reference_moments, options.xi_grid));
  }

  std::vector<double> ks, cf;
  for (const auto& row : report.rows) {
    ks.push_back(row.ks);
    cf.push_back(row.charfn_sup_err);
  }
  report.ks_trend_ok = non_increasing(ks, options.trend_slack);
  report.charfn_trend_ok = non_increasing(cf, options.trend_slack);
  const auto& last = report.rows.back();
  const bool ks_small = last.ks <= options.ks_small;
  const bool cf_small = last.charfn_sup_err <= options.charfn_small;
  const bool ks_large = last.ks >= 10.0 * options.ks_small;
  const bool cf_large = last.charfn_sup_err >= 10.0 * options.charfn_small;
  report.route_disagreement = (ks_small && cf_large) || (cf_small && ks_large);
  if (report.route_disagreement) {
    report.annotations.push_back("diagnostic: KS distance and characteristic-function error disagree");
  }
  return report;
}

std::string report_csv(const ConvergenceReport& report) {
  std::string out = "t,ks,m1_err,m2_err,m3_err,m4_err,charfn_sup_err\n";
  for (const auto& row : report.rows) {
    out += std::to_string(row.t);
    for (const double value : {row.ks, row.moment_err[0], row.moment_err[1], row.moment_err[2], row.moment_err[3],
                               row.charfn_sup_err}) {
      out += ',';
      out += format_number(value);
    }
    out += '\n';
  }
  return out;
}

}  // namespace nlqw
