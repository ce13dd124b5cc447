#include "nlqw/dynamics.hpp"

#include <cmath>
#include <string>

#include "nlqw/errors.hpp"
#include "nlqw/format.hpp"

namespace nlqw {

namespace {

Spinor coin_site(const NonlinearCoinModel& model, const Spinor& s) {
  const double g = model.coupling_g;
  return cn_matrix(model, g * std::norm(s.up), g * std::norm(s.down)).apply(s);
}

template <typename SiteMap>
LatticeState map_sites(const LatticeState& u, SiteMap&& f) {
  std::vector<Spinor> out(u.size());
  const auto in = u.amplitudes();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = f(in[i]);
  return LatticeState(u.window_min(), std::move(out));
}

}  // namespace

LatticeState apply_coin(const LatticeState& u, const NonlinearCoinModel& model) {
  return map_sites(u, [&](const Spinor& s) { return coin_site(model, s); });
}

LatticeState apply_shift(const LatticeState& u) {
  if (u.empty()) return u;
  LatticeState out = LatticeState::zeros(u.window_min() - 1, u.window_max() + 1);
  for (Site x = u.window_min(); x <= u.window_max(); ++x) {
    out[x - 1].up = u[x].up;
    out[x + 1].down = u[x].down;
  }
  return out;
}

LatticeState apply_shift_inverse(const LatticeState& u) {
  if (u.empty()) return u;
  LatticeState out = LatticeState::zeros(u.window_min() - 1, u.window_max() + 1);
  for (Site x = u.window_min(); x <= u.window_max(); ++x) {
    out[x + 1].up = u[x].up;
    out[x - 1].down = u[x].down;
  }
  return out;
}

LatticeState step(const LatticeState& u, const NonlinearCoinModel& model) {
  return apply_shift(apply_coin(u, model));
}

LatticeState step_linear(const LatticeState& u, const BaseCoin& coin) {
  const Matrix2& c0 = coin.matrix();
  return apply_shift(map_sites(u, [&](const Spinor& s) { return c0.apply(s); }));
}

LatticeState step_linear_inverse(const LatticeState& u, const BaseCoin& coin) {
  const Matrix2 c0_adj = coin.matrix().adjoint();
  return map_sites(apply_shift_inverse(u), [&](const Spinor& s) { return c0_adj.apply(s); });
}

void WalkConfig::validate() const {
  std::vector<std::string> violations;
  if (!initial.is_finite()) violations.emplace_back("initial state has non-finite amplitudes");
  const double n = norm_l2(initial);
  if (!(std::abs(n - 1.0) <= 1e-9)) {
    violations.emplace_back("NotNormalized: initial state norm is " + format_number(n));
  }
  if (horizon < 0) violations.emplace_back("horizon must be >= 0");
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

Walker::Walker(NonlinearCoinModel model, const LatticeState& initial, int capacity)
    : model_(std::move(model)), capacity_(capacity) {
  if (capacity < 0) throw OutOfRange("walker capacity must be >= 0");
  lo_ = initial.empty() ? 0 : initial.window_min();
  hi_ = initial.empty() ? 0 : initial.window_max();
  origin_ = lo_ - capacity;
  const auto width = static_cast<std::size_t>(hi_ - lo_ + 1 + 2 * static_cast<Site>(capacity));
  buf_.assign(width, Spinor{});
  scratch_.assign(width, Spinor{});
  for (Site x = lo_; x <= hi_; ++x) buf_[static_cast<std::size_t>(x - origin_)] = initial.at(x);
}

void Walker::advance() {
  if (t_ >= capacity_) {
    throw OutOfRange("walker capacity of " + std::to_string(capacity_) + " steps exhausted");
  }
  const auto idx = [this](Site x) { return static_cast<std::size_t>(x - origin_); };
  for (Site x = lo_; x <= hi_; ++x) scratch_[idx(x)] = coin_site(model_, buf_[idx(x)]);
  for (Site x = lo_ - 1; x <= hi_ + 1; ++x) {
    Spinor& out = buf_[idx(x)];
    out.up = x + 1 <= hi_ ? scratch_[idx(x + 1)].up : Complex{};
    out.down = x - 1 >= lo_ ? scratch_[idx(x - 1)].down : Complex{};
  }
  --lo_;
  ++hi_;
  ++t_;
}

void Walker::advance_to(int t) {
  while (t_ < t) advance();
}

LatticeState Walker::state() const {
  const auto first = buf_.begin() + (lo_ - origin_);
  const auto last = buf_.begin() + (hi_ - origin_ + 1);
  return LatticeState(lo_, std::vector<Spinor>(first, last));
}

double Walker::norm() const {
  double acc = 0.0;
  for (Site x = lo_; x <= hi_; ++x) acc += buf_[static_cast<std::size_t>(x - origin_)].norm_sq();
  return std::sqrt(acc);
}

LatticeState evolve(const WalkConfig& config) {
  config.validate();
  Walker walker(config.model, config.initial, config.horizon);
  walker.advance_to(config.horizon);
  return walker.state();
}

void evolve(const WalkConfig& config, const std::function<void(int, const LatticeState&)>& observer) {
  config.validate();
  Walker walker(config.model, config.initial, config.horizon);
  observer(0, walker.state());
  while (walker.time() < config.horizon) {
    walker.advance();
    observer(walker.time(), walker.state());
  }
}

std::vector<LatticeState> evolve_trajectory(const WalkConfig& config) {
  std::vector<LatticeState> out;
  out.reserve(static_cast<std::size_t>(config.horizon) + 1);
  evolve(config, [&](int, const LatticeState& u) { out.push_back(u); });
  return out;
}

}  // namespace nlqw
