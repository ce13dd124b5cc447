#include "oracles/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nlqw::oracle {

namespace {

struct Payload {
  const std::function<double(double)>* f;
  double r;
};

double smooth_part(double v, void* params) {
  const auto* p = static_cast<const Payload*>(params);
  return (*p->f)(v) * std::sqrt(1.0 - p->r * p->r) / (std::numbers::pi * (1.0 - v * v));
}

// f_K without the (s + r)^{-1/2} factor, which QAWS carries as its weight.
double left_weighted_part(double s, void* params) {
  const auto* p = static_cast<const Payload*>(params);
  return smooth_part(s, params) / std::sqrt(p->r - s);
}

}  // namespace

double konno_weighted_integral_to(double r, double v, const std::function<double(double)>& f) {
  gsl_set_error_handler_off();
  constexpr std::size_t kLimit = 2000;
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(kLimit);
  gsl_integration_qaws_table* table = gsl_integration_qaws_table_alloc(-0.5, 0.0, 0, 0);
  Payload payload{&f, r};
  gsl_function fn{&left_weighted_part, &payload};
  double result = 0.0, abserr = 0.0;
  const int status = gsl_integration_qaws(&fn, -r, v, table, 1e-13, 1e-12, kLimit, ws, &result, &abserr);
  gsl_integration_qaws_table_free(table);
  gsl_integration_workspace_free(ws);
  if (status != GSL_SUCCESS && status != GSL_EROUND) {
    throw std::runtime_error(std::string("QAWS failed: ") + gsl_strerror(status));
  }
  return result;
}

double konno_weighted_integral(double r, const std::function<double(double)>& f) {
  gsl_set_error_handler_off();
  constexpr std::size_t kLimit = 2000;
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(kLimit);
  gsl_integration_qaws_table* table = gsl_integration_qaws_table_alloc(-0.5, -0.5, 0, 0);
  Payload payload{&f, r};
  gsl_function fn{&smooth_part, &payload};
  double result = 0.0, abserr = 0.0;
  const int status = gsl_integration_qaws(&fn, -r, r, table, 1e-14, 1e-13, kLimit, ws, &result, &abserr);
  gsl_integration_qaws_table_free(table);
  gsl_integration_workspace_free(ws);
  if (status != GSL_SUCCESS && status != GSL_EROUND) {
    throw std::runtime_error(std::string("QAWS failed: ") + gsl_strerror(status));
  }
  return result;
}

std::array<Complex, 2> eigenvalues_by_characteristic_polynomial(const Matrix2& m) {
  const Complex tr = m.trace();
  const Complex disc = std::sqrt(tr * tr - 4.0 * m.det());
  std::array<Complex, 2> roots{0.5 * (tr + disc), 0.5 * (tr - disc)};
  if (roots[0].imag() < roots[1].imag()) std::swap(roots[0], roots[1]);
  return roots;
}

double plancherel_trapezoid(const LatticeState& u, int points) {
  double acc = 0.0;
  for (int i = 0; i < points; ++i) {
    const double k = 2.0 * std::numbers::pi * i / points;
    Complex up{}, down{};
    for (Site x = u.window_min(); !u.empty() && x <= u.window_max(); ++x) {
      const Complex phase = std::polar(1.0, -k * static_cast<double>(x));
      up += phase * u[x].up;
      down += phase * u[x].down;
    }
    acc += std::norm(up) + std::norm(down);
  }
  return acc / points;
}

LatticeState random_state(std::mt19937_64& rng, Site lo, int sites, bool normalize) {
  std::normal_distribution<double> gauss;
  LatticeState u = LatticeState::zeros(lo, lo + sites - 1);
  for (Site x = lo; x < lo + sites; ++x) u[x] = {{gauss(rng), gauss(rng)}, {gauss(rng), gauss(rng)}};
  if (normalize) u *= Complex(1.0 / norm_l2(u));
  return u;
}

}  // namespace nlqw::oracle
