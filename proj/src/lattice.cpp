#include "nlqw/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlqw/errors.hpp"
#include "nlqw/format.hpp"

namespace nlqw {

bool Spinor::is_finite() const {
  return std::isfinite(up.real()) && std::isfinite(up.imag()) && std::isfinite(down.real()) &&
         std::isfinite(down.imag());
}

LatticeState::LatticeState(Site window_min, std::vector<Spinor> amplitudes)
    : window_min_(window_min), amps_(std::move(amplitudes)) {}

LatticeState LatticeState::zeros(Site lo, Site hi) {
  if (hi < lo) return LatticeState(lo, {});
  return LatticeState(lo, std::vector<Spinor>(static_cast<std::size_t>(hi - lo + 1)));
}

LatticeState LatticeState::delta(Site x, Spinor value) { return LatticeState(x, {value}); }

Spinor LatticeState::at(Site x) const {
  if (x < window_min_ || x > window_max()) return {};
  return amps_[static_cast<std::size_t>(x - window_min_)];
}

LatticeState LatticeState::padded(Site lo, Site hi) const {
  if (empty()) return zeros(lo, hi);
  const Site new_lo = std::min(lo, window_min_);
  const Site new_hi = std::max(hi, window_max());
  LatticeState out = zeros(new_lo, new_hi);
  std::copy(amps_.begin(), amps_.end(), out.amps_.begin() + (window_min_ - new_lo));
  return out;
}

LatticeState LatticeState::trimmed() const {
  const Spinor zero{};
  auto first = std::find_if(amps_.begin(), amps_.end(), [&](const Spinor& s) { return s != zero; });
  if (first == amps_.end()) return LatticeState(window_min_, {});
  auto last = std::find_if(amps_.rbegin(), amps_.rend(), [&](const Spinor& s) { return s != zero; });
  return LatticeState(window_min_ + (first - amps_.begin()), std::vector<Spinor>(first, last.base()));
}

bool LatticeState::is_finite() const {
  return std::all_of(amps_.begin(), amps_.end(), [](const Spinor& s) { return s.is_finite(); });
}

LatticeState& LatticeState::operator*=(Complex factor) {
  for (auto& s : amps_) {
    s.up *= factor;
    s.down *= factor;
  }
  return *this;
}

LatticeState operator-(const LatticeState& u, const LatticeState& v) {
  if (u.empty()) return Complex(-1.0) * v;
  if (v.empty()) return u;
  LatticeState out = u.padded(v.window_min(), v.window_max());
  for (Site x = v.window_min(); x <= v.window_max(); ++x) {
    out[x].up -= v[x].up;
    out[x].down -= v[x].down;
  }
  return out;
}

bool operator==(const LatticeState& u, const LatticeState& v) {
  const Site lo = std::min(u.empty() ? v.window_min() : u.window_min(),
                           v.empty() ? u.window_min() : v.window_min());
  const Site hi = std::max(u.empty() ? v.window_max() : u.window_max(),
                           v.empty() ? u.window_max() : v.window_max());
  for (Site x = lo; x <= hi; ++x) {
    if (u.at(x) != v.at(x)) return false;
  }
  return true;
}

Complex inner(const LatticeState& u, const LatticeState& v) {
  if (u.empty() || v.empty()) return {};
  const Site lo = std::max(u.window_min(), v.window_min());
  const Site hi = std::min(u.window_max(), v.window_max());
  Complex acc{};
  for (Site x = lo; x <= hi; ++x) {
    acc += std::conj(u[x].up) * v[x].up + std::conj(u[x].down) * v[x].down;
  }
  return acc;
}

double norm_l2(const LatticeState& u) {
  double acc = 0.0;
  for (const auto& s : u.amplitudes()) acc += s.norm_sq();
  return std::sqrt(acc);
}

double norm_l1(const LatticeState& u) {
  double acc = 0.0;
  for (const auto& s : u.amplitudes()) acc += std::sqrt(s.norm_sq());
  return acc;
}

Spinor fourier_eval(const LatticeState& u, double k) {
  // Phases advance by a fixed rotation per site and are re-anchored
  // periodically so rounding does not accumulate over long windows.
  constexpr std::size_t kResync = 64;
  Spinor acc{};
  const auto amps = u.amplitudes();
  const Complex rot = std::polar(1.0, -k);
  Complex phase{};
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i % kResync == 0) {
      const double x = static_cast<double>(u.window_min() + static_cast<Site>(i));
      phase = std::polar(1.0, -k * x);
    } else {
      phase *= rot;
    }
    acc.up += phase * amps[i].up;
    acc.down += phase * amps[i].down;
  }
  return acc;
}

std::map<Site, double> intensity(const LatticeState& u) {
  std::map<Site, double> p;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double px = u.amplitudes()[i].norm_sq();
    if (px > 0.0) p.emplace(u.window_min() + static_cast<Site>(i), px);
  }
  return p;
}

std::map<Site, double> position_distribution(const LatticeState& u) {
  const double n = norm_l2(u);
  if (!(std::abs(n - 1.0) <= 1e-9)) {
    throw NotNormalized("state norm " + format_number(n) + " differs from 1 by more than 1e-9");
  }
  return intensity(u);
}

std::string distribution_csv(const std::map<Site, double>& p) {
  std::string out = "x,p\n";
  for (const auto& [x, px] : p) {
    if (!(px > 0.0)) continue;
    out += std::to_string(x);
    out += ',';
    out += format_number(px);
    out += '\n';
  }
  return out;
}

}  // namespace nlqw
