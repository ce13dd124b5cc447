#include "nlqw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nlqw/errors.hpp"
#include "nlqw/format.hpp"

namespace nlqw {

namespace {

constexpr double kPi = std::numbers::pi;

void check_band(int band) {
  if (band != 1 && band != 2) throw OutOfRange("band index must be 1 or 2, got " + std::to_string(band));
}

double band_sign(int band) { return band == 1 ? 1.0 : -1.0; }  // (-1)^(j-1)

// sqrt(|b|^2 + |a|^2 sin^2(k + theta_a)), the imaginary part of lambda_1.
double gap_root(const BaseCoin& coin, double sin_shifted) {
  const double abs_a = coin.abs_a();
  const double abs_b = coin.abs_b();
  return std::sqrt(abs_b * abs_b + abs_a * abs_a * sin_shifted * sin_shifted);
}

Complex inner(const Spinor& x, const Spinor& y) { return std::conj(x.up) * y.up + std::conj(x.down) * y.down; }

VelocityDensity sample_density(const LatticeState& u, const BaseCoin& coin, int n_nodes) {
  const double r = coin.abs_a();
  const double tail = std::sqrt(1.0 - r * r);
  const double d_eta = kPi / n_nodes;
  const auto n = static_cast<std::size_t>(n_nodes);

  VelocityDensity out;
  out.speed_limit = r;
  out.eta.resize(n);
  out.grid.resize(n);
  out.w.resize(n);
  out.f_k.resize(n);
  out.density.resize(n);
  out.quad_weight.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const double eta = -0.5 * kPi + (static_cast<double>(i) + 0.5) * d_eta;
    const double v = r * std::sin(eta);
    const double one_minus_v2 = 1.0 - v * v;
    // sqrt(r^2 - v^2) = r cos(eta) on the open interval.
    const double edge = r * std::cos(eta);

    double w = 0.0;
    for (int band = 1; band <= 2; ++band) {
      for (int branch = 0; branch <= 1; ++branch) w += std::norm(k_transform(u, v, band, branch, coin));
    }
    w *= 0.5;

    out.eta[i] = eta;
    out.grid[i] = v;
    out.w[i] = w;
    out.f_k[i] = tail / (kPi * one_minus_v2 * edge);
    out.density[i] = w * out.f_k[i];
    out.quad_weight[i] = tail / (kPi * one_minus_v2) * d_eta;
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) mass += out.w[i] * out.quad_weight[i];
  out.total_mass = mass;
  return out;
}

}  // namespace

Matrix2 u0_symbol(const BaseCoin& coin, double k) {
  const Complex fwd = std::polar(1.0, k);
  const Complex bwd = std::polar(1.0, -k);
  return {{{{fwd * coin.a(), fwd * coin.b()}, {-bwd * std::conj(coin.b()), bwd * std::conj(coin.a())}}}};
}

Eigenpair eigenpair(const BaseCoin& coin, double k, int band) {
  check_band(band);
  const double shifted = k + coin.theta_a();
  const Complex lambda(coin.abs_a() * std::cos(shifted), band_sign(band) * gap_root(coin, std::sin(shifted)));

  const Complex fwd = std::polar(1.0, k);
  Spinor phi{fwd * coin.b(), lambda - fwd * coin.a()};
  const double len = std::sqrt(phi.norm_sq());
  // b != 0, so the first component never vanishes; rotate it onto the
  // positive real axis.
  const Complex gauge = std::conj(phi.up) / (std::abs(phi.up) * len);
  phi.up *= gauge;
  phi.down *= gauge;
  phi.up = Complex(phi.up.real(), 0.0);
  return {lambda, phi};
}

double group_velocity(const BaseCoin& coin, double k, int band) {
  check_band(band);
  const double s = std::sin(k + coin.theta_a());
  return -band_sign(band) * coin.abs_a() * s / gap_root(coin, s);
}

DispersionSample dispersion_sample(const BaseCoin& coin, double k) {
  DispersionSample out;
  out.k = k;
  for (int band = 1; band <= 2; ++band) {
    const auto pair = eigenpair(coin, k, band);
    out.lambda[band - 1] = pair.lambda;
    out.phi[band - 1] = pair.phi;
    out.v[band - 1] = group_velocity(coin, k, band);
  }
  return out;
}

double konno_density(double v, double r) {
  if (!(r > 0.0 && r < 1.0)) throw OutOfRange("Konno density needs 0 < r < 1, got " + format_number(r));
  if (!(std::abs(v) < r)) return 0.0;
  return std::sqrt(1.0 - r * r) / (kPi * (1.0 - v * v) * std::sqrt(r * r - v * v));
}

double k_branch(double v, int band, int branch, const BaseCoin& coin) {
  check_band(band);
  if (branch != 0 && branch != 1) throw OutOfRange("branch index must be 0 or 1, got " + std::to_string(branch));
  const double abs_a = coin.abs_a();
  if (!(std::abs(v) <= abs_a + 1e-12)) {
    throw OutOfRange("velocity " + format_number(v) + " outside [-|a|, |a|] = [-" + format_number(abs_a) + ", " +
                     format_number(abs_a) + "]");
  }
  const double sign = (band + branch) % 2 == 0 ? 1.0 : -1.0;
  const double arg = sign * coin.abs_b() * v / (abs_a * std::sqrt(1.0 - v * v));
  return -coin.theta_a() + branch * kPi + std::asin(std::clamp(arg, -1.0, 1.0));
}

Complex k_transform(const LatticeState& u, double v, int band, int branch, const BaseCoin& coin) {
  const double k = k_branch(v, band, branch, coin);
  return inner(eigenpair(coin, k, band).phi, fourier_eval(u, k));
}

VelocityDensity limit_density(const LatticeState& u_plus, const BaseCoin& coin, int n_nodes, int max_nodes) {
  if (n_nodes < 64) throw OutOfRange("limit_density needs at least 64 nodes");
  const LatticeState u = u_plus.trimmed();
  const double expected = norm_l2(u) * norm_l2(u);
  const double tol = kDensityMassTolerance * std::max(1.0, expected);

  VelocityDensity out = sample_density(u, coin, n_nodes);
  while (!(std::abs(out.total_mass - expected) <= tol) && 2 * n_nodes <= max_nodes) {
    n_nodes *= 2;
    out = sample_density(u, coin, n_nodes);
  }
  out.expected_mass = expected;
  out.mass_check_passed = std::abs(out.total_mass - expected) <= tol;
  return out;
}

double density_moment(const VelocityDensity& density, int n) {
  if (!(density.total_mass > 0.0)) throw OutOfRange("density has no mass");
  double acc = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    acc += std::pow(density.grid[i], n) * density.w[i] * density.quad_weight[i];
  }
  return acc / density.total_mass;
}

Complex char_fn_theoretical(const VelocityDensity& density, double xi) {
  if (!(density.total_mass > 0.0)) throw OutOfRange("density has no mass");
  Complex acc{};
  for (std::size_t i = 0; i < density.size(); ++i) {
    acc += std::polar(density.w[i] * density.quad_weight[i], xi * density.grid[i]);
  }
  return acc / density.total_mass;
}

SampledCdf::SampledCdf(double speed_limit, std::vector<double> eta_edges, std::vector<double> values)
    : speed_limit_(speed_limit), eta_edges_(std::move(eta_edges)), values_(std::move(values)) {}

double SampledCdf::operator()(double v) const {
  if (values_.empty()) return 0.0;
  if (v <= -speed_limit_) return 0.0;
  if (v >= speed_limit_) return 1.0;
  const double eta = std::asin(v / speed_limit_);
  const auto it = std::upper_bound(eta_edges_.begin(), eta_edges_.end(), eta);
  if (it == eta_edges_.begin()) return values_.front();
  if (it == eta_edges_.end()) return values_.back();
  const auto hi = static_cast<std::size_t>(it - eta_edges_.begin());
  const std::size_t lo = hi - 1;
  const double frac = (eta - eta_edges_[lo]) / (eta_edges_[hi] - eta_edges_[lo]);
  return values_[lo] + frac * (values_[hi] - values_[lo]);
}

SampledCdf density_cdf(const VelocityDensity& density) {
  if (!(density.total_mass > 0.0)) throw OutOfRange("density has no mass");
  const std::size_t n = density.size();
  const double d_eta = kPi / static_cast<double>(n);
  std::vector<double> edges(n + 1), values(n + 1);
  double acc = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    edges[i] = -0.5 * kPi + static_cast<double>(i) * d_eta;
    values[i] = acc / density.total_mass;
    if (i < n) acc += density.w[i] * density.quad_weight[i];
  }
  values.front() = 0.0;
  values.back() = 1.0;
  return SampledCdf(density.speed_limit, std::move(edges), std::move(values));
}

std::string density_csv(const VelocityDensity& density) {
  std::string out = "v,w,f_k,density\n";
  for (std::size_t i = 0; i < density.size(); ++i) {
    out += format_number(density.grid[i]);
    out += ',';
    out += format_number(density.w[i]);
    out += ',';
    out += format_number(density.f_k[i]);
    out += ',';
    out += format_number(density.density[i]);
    out += '\n';
  }
  return out;
}

}  // namespace nlqw
