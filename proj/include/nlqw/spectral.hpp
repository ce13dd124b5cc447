#pragma once

#include <array>
#include <vector>

#include "nlqw/coins.hpp"
#include "nlqw/lattice.hpp"

namespace nlqw {

/// Momentum-space symbol of U0:
/// ((e^{ik} a, e^{ik} b), (-e^{-ik} conj b, e^{-ik} conj a)).
Matrix2 u0_symbol(const BaseCoin& coin, double k);

struct Eigenpair {
  Complex lambda;
  Spinor phi;  // unit vector, first nonzero component real positive
};

/// Band j in {1, 2}:
///   lambda_j(k) = |a| cos(k + theta_a) + i (-1)^(j-1) sqrt(|b|^2 + |a|^2 sin^2(k + theta_a)).
/// Throws OutOfRange for any other band index.
Eigenpair eigenpair(const BaseCoin& coin, double k, int band);

/// v_j(k) = i lambda_j'(k) / lambda_j(k)
///        = (-1)^j |a| sin(k + theta_a) / sqrt(|b|^2 + |a|^2 sin^2(k + theta_a)).
double group_velocity(const BaseCoin& coin, double k, int band);

struct DispersionSample {
  double k = 0.0;
  std::array<Complex, 2> lambda{};
  std::array<Spinor, 2> phi{};
  std::array<double, 2> v{};
};

DispersionSample dispersion_sample(const BaseCoin& coin, double k);

/// Konno function f_K(v; r) on (-r, r), zero elsewhere. Requires 0 < r < 1.
double konno_density(double v, double r);

/// Inverse of v_j restricted to I_m = [pi (m - 1/2) - theta_a, pi (m + 1/2) - theta_a]:
///   k_{j,m}(v) = -theta_a + m pi + arcsin((-1)^(j+m) |b| v / (|a| sqrt(1 - v^2))).
/// Throws OutOfRange when |v| > |a| + 1e-12, or j, m are not in {1,2} x {0,1}.
double k_branch(double v, int band, int branch, const BaseCoin& coin);

/// (K_{j,m} u)(v) = < phi_j(k_{j,m}(v)), u^(k_{j,m}(v)) >.
Complex k_transform(const LatticeState& u, double v, int band, int branch, const BaseCoin& coin);

/// Weak-limit velocity density w(v) f_K(v; |a|) sampled on the nodes
/// v_i = |a| sin(eta_i), eta_i the midpoints of a uniform partition of
/// (-pi/2, pi/2). In eta the Konno singularities cancel against dv, and
/// quad_weight carries f_K(v_i) dv_i for the resulting midpoint rule.
struct VelocityDensity {
  double speed_limit = 0.0;  // |a|
  std::vector<double> eta;
  std::vector<double> grid;
  std::vector<double> w;
  std::vector<double> f_k;
  std::vector<double> density;
  std::vector<double> quad_weight;
  double total_mass = 0.0;
  /// |u+|^2 the mass check ran against.
  double expected_mass = 0.0;
  bool mass_check_passed = false;

  std::size_t size() const { return grid.size(); }
};

/// Default node count, and the mass tolerance driving automatic refinement.
inline constexpr int kDefaultDensityNodes = 513;
inline constexpr double kDensityMassTolerance = 1e-6;

/// w(v) = 1/2 sum_{j,m} |(K_{j,m} u+)(v)|^2 on the node grid. The node count
/// doubles (up to max_nodes) until total_mass matches |u+|^2 within 1e-6.
/// Throws OutOfRange when n_nodes < 64.
VelocityDensity limit_density(const LatticeState& u_plus, const BaseCoin& coin, int n_nodes = kDefaultDensityNodes,
                              int max_nodes = 16 * kDefaultDensityNodes);

/// int v^n dmu_V / total_mass.
double density_moment(const VelocityDensity& density, int n);

/// int e^{i xi v} dmu_V / total_mass.
Complex char_fn_theoretical(const VelocityDensity& density, double xi);

/// Continuous CDF of mu_V / total_mass, stored at the cell boundaries of the
/// eta partition and interpolated linearly in eta = arcsin(v / |a|).
class SampledCdf {
 public:
  SampledCdf() = default;
  SampledCdf(double speed_limit, std::vector<double> eta_edges, std::vector<double> values);

  double operator()(double v) const;

  const std::vector<double>& eta_edges() const { return eta_edges_; }
  const std::vector<double>& values() const { return values_; }

 private:
  double speed_limit_ = 0.0;
  std::vector<double> eta_edges_;
  std::vector<double> values_;
};

/// Throws OutOfRange when total_mass is not positive.
SampledCdf density_cdf(const VelocityDensity& density);

/// CSV with header `v,w,f_k,density`.
std::string density_csv(const VelocityDensity& density);

}  // namespace nlqw
