#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace nlqw {

using Complex = std::complex<double>;
using Site = std::int64_t;

/// Two-component amplitude living on a single lattice site.
struct Spinor {
  Complex up{};
  Complex down{};

  double norm_sq() const { return std::norm(up) + std::norm(down); }
  bool is_finite() const;

  friend bool operator==(const Spinor&, const Spinor&) = default;
};

/// Finitely supported element of l^2(Z; C^2).
///
/// Amplitudes are stored densely on the window [window_min, window_max];
/// every site outside the window is implicitly zero. Equality compares the
/// represented states, so two states that differ only by zero padding are
/// equal.
class LatticeState {
 public:
  LatticeState() = default;
  LatticeState(Site window_min, std::vector<Spinor> amplitudes);

  /// All-zero state on the inclusive window [lo, hi].
  static LatticeState zeros(Site lo, Site hi);
  static LatticeState delta(Site x, Spinor value);

  Site window_min() const { return window_min_; }
  Site window_max() const { return window_min_ + static_cast<Site>(amps_.size()) - 1; }
  std::size_t size() const { return amps_.size(); }
  bool empty() const { return amps_.empty(); }

  /// Amplitude at x; zero outside the window.
  Spinor at(Site x) const;
  /// Mutable access; x must lie inside the window.
  Spinor& operator[](Site x) { return amps_[static_cast<std::size_t>(x - window_min_)]; }
  const Spinor& operator[](Site x) const { return amps_[static_cast<std::size_t>(x - window_min_)]; }

  std::span<const Spinor> amplitudes() const { return amps_; }
  std::span<Spinor> amplitudes() { return amps_; }

  /// Copy whose window covers at least [lo, hi], zero padded.
  LatticeState padded(Site lo, Site hi) const;
  /// Copy with exactly-zero sites removed from both ends.
  LatticeState trimmed() const;

  bool is_finite() const;

  LatticeState& operator*=(Complex factor);
  friend LatticeState operator*(Complex factor, LatticeState u) { return u *= factor; }
  friend LatticeState operator-(const LatticeState& u, const LatticeState& v);

  friend bool operator==(const LatticeState& u, const LatticeState& v);

 private:
  Site window_min_ = 0;
  std::vector<Spinor> amps_;
};

/// <u, v>, conjugate-linear in the first slot.
Complex inner(const LatticeState& u, const LatticeState& v);
double norm_l2(const LatticeState& u);
double norm_l1(const LatticeState& u);

/// u^(k) = sum_x exp(-i k x) u(x).
Spinor fourier_eval(const LatticeState& u, double k);

/// Born-rule distribution p(x) = |u(x)|^2 over sites with p > 0.
/// Throws NotNormalized unless |u| = 1 within 1e-9.
std::map<Site, double> position_distribution(const LatticeState& u);

/// Same as position_distribution, without the normalization precondition.
std::map<Site, double> intensity(const LatticeState& u);

/// CSV with header `x,p`, ascending sites, rows with p > 0 only.
std::string distribution_csv(const std::map<Site, double>& p);

}  // namespace nlqw
