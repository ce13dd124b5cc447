#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlqw/lattice.hpp"

namespace nlqw {

/// Dense 2x2 complex matrix, row major.
struct Matrix2 {
  std::array<std::array<Complex, 2>, 2> m{};

  static Matrix2 identity() { return {{{{Complex(1.0), Complex(0.0)}, {Complex(0.0), Complex(1.0)}}}}; }
  static Matrix2 diag(Complex d0, Complex d1) { return {{{{d0, Complex(0.0)}, {Complex(0.0), d1}}}}; }

  Complex& operator()(int r, int c) { return m[r][c]; }
  Complex operator()(int r, int c) const { return m[r][c]; }

  Matrix2 adjoint() const;
  Complex det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  Complex trace() const { return m[0][0] + m[1][1]; }

  Spinor apply(const Spinor& s) const {
    return {m[0][0] * s.up + m[0][1] * s.down, m[1][0] * s.up + m[1][1] * s.down};
  }

  friend Matrix2 operator*(const Matrix2& a, const Matrix2& b);
  friend Matrix2 operator*(Complex s, const Matrix2& a);
  friend Matrix2 operator-(const Matrix2& a, const Matrix2& b);
  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

/// Largest singular value, from the closed-form eigenvalues of A*A.
double operator_norm(const Matrix2& a);
/// Frobenius norm of A*A - I.
double unitarity_defect(const Matrix2& a);

/// The constant coin C0 = ((a, b), (-conj b, conj a)) with 0 < |a| < 1.
class BaseCoin {
 public:
  /// Validating factory. Throws InvalidCoin when |a|^2 + |b|^2 misses 1 by
  /// more than 1e-9 and DegenerateCoin when |a| is 0 or 1.
  static BaseCoin make(Complex a, Complex b);
  /// The real rotation coin a = b = 1/sqrt(2).
  static BaseCoin hadamard_like();

  Complex a() const { return a_; }
  Complex b() const { return b_; }
  double abs_a() const { return std::abs(a_); }
  double abs_b() const { return std::abs(b_); }
  /// arg(a) in [0, 2 pi).
  double theta_a() const { return theta_a_; }
  const Matrix2& matrix() const { return matrix_; }

  friend bool operator==(const BaseCoin& x, const BaseCoin& y) { return x.a_ == y.a_ && x.b_ == y.b_; }

 private:
  BaseCoin(Complex a, Complex b);

  Complex a_;
  Complex b_;
  double theta_a_;
  Matrix2 matrix_;
};

enum class CoinFamily { linear, scalar_phase, diagonal_phase };

std::string_view to_string(CoinFamily family);
/// Throws ParseError for unknown names.
CoinFamily parse_family(std::string_view name);

/// C_N(s1, s2) built on top of a base coin.
///
///  linear          C0
///  scalar_phase    exp(i kappa (s1 + s2)^m) C0
///  diagonal_phase  diag(exp(i kappa s1^m), exp(i kappa s2^m)) C0
///
/// The intensities handed to cn_matrix are already scaled by coupling_g.
struct NonlinearCoinModel {
  BaseCoin base;
  CoinFamily family = CoinFamily::linear;
  int exponent_m = 2;
  double strength_kappa = 1.0;
  double coupling_g = 0.0;

  /// True when the coin never departs from C0 along a trajectory.
  bool acts_linearly() const { return family == CoinFamily::linear || coupling_g == 0.0 || strength_kappa == 0.0; }

  /// Same model with a different coupling.
  NonlinearCoinModel with_coupling(double g) const {
    NonlinearCoinModel out = *this;
    out.coupling_g = g;
    return out;
  }

  friend bool operator==(const NonlinearCoinModel&, const NonlinearCoinModel&) = default;
};

Matrix2 cn_matrix(const NonlinearCoinModel& model, double s1, double s2);

enum class HypothesisStatus {
  trivially_linear,      // C_N == C0
  cubic_or_higher,       // m >= 3
  quadratic_requires_l1, // m == 2, needs u0 in l^1
  outside,               // m < 2
};

std::string_view to_string(HypothesisStatus status);

struct PerturbationReport {
  /// Smallest c0 with |C_N - C0| <= c0 (s1 + s2)^m over the samples.
  double c0_value = 0.0;
  /// Smallest c0 with |d/ds_j C_N| <= c0 (s1 + s2)^(m - 1), both j.
  double c0_derivative = 0.0;
  HypothesisStatus status = HypothesisStatus::trivially_linear;
  std::size_t samples = 0;
};

PerturbationReport perturbation_exponent_check(const NonlinearCoinModel& model,
                                               std::span<const std::pair<double, double>> samples);
/// Uniform n x n grid on [0, s_max]^2.
PerturbationReport perturbation_exponent_check(const NonlinearCoinModel& model, double s_max, int n);

}  // namespace nlqw
