#include "nlqw/coins.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlqw/errors.hpp"
#include "nlqw/format.hpp"

namespace nlqw {

namespace {

double ipow(double base, int exponent) {
  double out = 1.0;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

}  // namespace

Matrix2 Matrix2::adjoint() const {
  Matrix2 out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.m[r][c] = std::conj(m[c][r]);
  return out;
}

Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
  Matrix2 out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.m[r][c] = a.m[r][0] * b.m[0][c] + a.m[r][1] * b.m[1][c];
  return out;
}

Matrix2 operator*(Complex s, const Matrix2& a) {
  Matrix2 out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.m[r][c] = s * a.m[r][c];
  return out;
}

Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
  Matrix2 out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.m[r][c] = a.m[r][c] - b.m[r][c];
  return out;
}

double operator_norm(const Matrix2& a) {
  // A*A is Hermitian positive semidefinite; its eigenvalues are
  // (tr +- sqrt(tr^2 - 4 det)) / 2 with tr, det real.
  const Matrix2 h = a.adjoint() * a;
  const double tr = h.trace().real();
  const double det = h.det().real();
  const double disc = std::max(0.0, tr * tr - 4.0 * det);
  const double top = 0.5 * (tr + std::sqrt(disc));
  return std::sqrt(std::max(0.0, top));
}

double unitarity_defect(const Matrix2& a) {
  const Matrix2 d = a.adjoint() * a - Matrix2::identity();
  double acc = 0.0;
  for (const auto& row : d.m)
    for (const auto& z : row) acc += std::norm(z);
  return std::sqrt(acc);
}

BaseCoin::BaseCoin(Complex a, Complex b) : a_(a), b_(b) {
  double theta = std::arg(a);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  if (theta >= 2.0 * std::numbers::pi) theta = 0.0;
  theta_a_ = theta;
  matrix_ = {{{{a, b}, {-std::conj(b), std::conj(a)}}}};
}

BaseCoin BaseCoin::make(Complex a, Complex b) {
  const bool finite = std::isfinite(a.real()) && std::isfinite(a.imag()) && std::isfinite(b.real()) &&
                      std::isfinite(b.imag());
  const double row = std::norm(a) + std::norm(b);
  if (!finite || !(std::abs(row - 1.0) <= 1e-9)) {
    throw InvalidCoin("InvalidCoin: |a|^2 + |b|^2 = " + format_number(row) + ", expected 1");
  }
  if (std::abs(a) == 0.0 || std::abs(b) == 0.0) {
    throw DegenerateCoin("DegenerateCoin: |a| = " + format_number(std::abs(a)) + " must lie strictly inside (0, 1)");
  }
  return BaseCoin(a, b);
}

BaseCoin BaseCoin::hadamard_like() {
  const double r = std::numbers::sqrt2 / 2.0;
  return BaseCoin(Complex(r, 0.0), Complex(r, 0.0));
}

std::string_view to_string(CoinFamily family) {
  switch (family) {
    case CoinFamily::linear:
      return "linear";
    case CoinFamily::scalar_phase:
      return "scalar_phase";
    case CoinFamily::diagonal_phase:
      return "diagonal_phase";
  }
  return "linear";
}

CoinFamily parse_family(std::string_view name) {
  if (name == "linear") return CoinFamily::linear;
  if (name == "scalar_phase") return CoinFamily::scalar_phase;
  if (name == "diagonal_phase") return CoinFamily::diagonal_phase;
  throw ParseError("unknown coin family '" + std::string(name) + "'");
}

Matrix2 cn_matrix(const NonlinearCoinModel& model, double s1, double s2) {
  const Matrix2& c0 = model.base.matrix();
  switch (model.family) {
    case CoinFamily::linear:
      return c0;
    case CoinFamily::scalar_phase: {
      const Complex phase = std::polar(1.0, model.strength_kappa * ipow(s1 + s2, model.exponent_m));
      return phase * c0;
    }
    case CoinFamily::diagonal_phase: {
      const Complex p1 = std::polar(1.0, model.strength_kappa * ipow(s1, model.exponent_m));
      const Complex p2 = std::polar(1.0, model.strength_kappa * ipow(s2, model.exponent_m));
      Matrix2 out = c0;
      out.m[0][0] *= p1;
      out.m[0][1] *= p1;
      out.m[1][0] *= p2;
      out.m[1][1] *= p2;
      return out;
    }
  }
  return c0;
}

std::string_view to_string(HypothesisStatus status) {
  switch (status) {
    case HypothesisStatus::trivially_linear:
      return "linear coin: perturbation bound holds with c0 = 0";
    case HypothesisStatus::cubic_or_higher:
      return "m >= 3: scattering hypotheses hold for small g";
    case HypothesisStatus::quadratic_requires_l1:
      return "m = 2: scattering hypotheses additionally require u0 in l^1";
    case HypothesisStatus::outside:
      return "m < 2: outside the scattering theorem's hypotheses";
  }
  return "";
}

PerturbationReport perturbation_exponent_check(const NonlinearCoinModel& model,
                                               std::span<const std::pair<double, double>> samples) {
  PerturbationReport report;
  report.samples = samples.size();
  const int m = model.exponent_m;
  if (model.family == CoinFamily::linear) {
    report.status = HypothesisStatus::trivially_linear;
  } else if (m >= 3) {
    report.status = HypothesisStatus::cubic_or_higher;
  } else if (m == 2) {
    report.status = HypothesisStatus::quadratic_requires_l1;
  } else {
    report.status = HypothesisStatus::outside;
  }

  const Matrix2& c0 = model.base.matrix();
  for (const auto& [s1, s2] : samples) {
    const double s = s1 + s2;
    if (!(s > 0.0)) continue;
    const double dist = operator_norm(cn_matrix(model, s1, s2) - c0);
    report.c0_value = std::max(report.c0_value, dist / ipow(s, m));

    const double h = 1e-4 * s;
    const Matrix2 d1 = Complex(0.5 / h) * (cn_matrix(model, s1 + h, s2) - cn_matrix(model, s1 - h, s2));
    const Matrix2 d2 = Complex(0.5 / h) * (cn_matrix(model, s1, s2 + h) - cn_matrix(model, s1, s2 - h));
    const double scale = m >= 1 ? ipow(s, m - 1) : 1.0;
    report.c0_derivative = std::max({report.c0_derivative, operator_norm(d1) / scale, operator_norm(d2) / scale});
  }
  return report;
}

PerturbationReport perturbation_exponent_check(const NonlinearCoinModel& model, double s_max, int n) {
  std::vector<std::pair<double, double>> grid;
  grid.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  const double step = n > 1 ? s_max / (n - 1) : 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) grid.emplace_back(i * step, j * step);
  return perturbation_exponent_check(model, grid);
}

}  // namespace nlqw
