#include "nlqw/scattering.hpp"

#include <bit>
#include <vector>

#include "nlqw/dynamics.hpp"
#include "nlqw/errors.hpp"

namespace nlqw {

namespace {

constexpr int kFirstCheckpoint = 16;

// T applications of step_linear_inverse, in place on a window sized for
// the final spread.
LatticeState pull_back(const LatticeState& u, const BaseCoin& coin, int T) {
  if (u.empty() || T == 0) return u;
  const Matrix2 c0_adj = coin.matrix().adjoint();
  const Site origin = u.window_min() - T;
  const auto width = u.size() + 2 * static_cast<std::size_t>(T);
  std::vector<Spinor> buf(width), next(width);
  for (Site x = u.window_min(); x <= u.window_max(); ++x) buf[static_cast<std::size_t>(x - origin)] = u[x];
  Site lo = u.window_min(), hi = u.window_max();
  for (int i = 0; i < T; ++i) {
    for (Site x = lo - 1; x <= hi + 1; ++x) {
      const auto j = static_cast<std::size_t>(x - origin);
      const Spinor shifted{x - 1 >= lo ? buf[j - 1].up : Complex{}, x + 1 <= hi ? buf[j + 1].down : Complex{}};
      next[j] = c0_adj.apply(shifted);
    }
    --lo;
    ++hi;
    std::swap(buf, next);
  }
  return LatticeState(origin, std::move(buf));
}

double mass_outside(const LatticeState& u, Site lo, Site hi) {
  double acc = 0.0;
  for (Site x = u.window_min(); x <= u.window_max(); ++x) {
    if (x < lo || x > hi) acc += u[x].norm_sq();
  }
  return acc;
}

}  // namespace

LatticeState back_propagated(const LatticeState& u0, const NonlinearCoinModel& model, int T) {
  if (T < 0) throw OutOfRange("back-propagation time must be >= 0");
  if (T == 0 || model.acts_linearly()) return u0;
  Walker walker(model, u0, T);
  walker.advance_to(T);
  return pull_back(walker.state(), model.base, T);
}

ScatteringResult extract_asymptotic(const LatticeState& u0, const NonlinearCoinModel& model, double tol, int t_max) {
  if (!(tol > 0.0)) throw OutOfRange("scattering tolerance must be positive");
  if (t_max < 2 * kFirstCheckpoint || !std::has_single_bit(static_cast<unsigned>(t_max))) {
    throw OutOfRange("t_max must be a power of two >= 32");
  }

  ScatteringResult result;
  if (model.acts_linearly()) {
    result.u_plus = u0;
    result.trace.push_back({kFirstCheckpoint, 0.0});
    result.converged = true;
    result.final_T = 2 * kFirstCheckpoint;
    return result;
  }

  // The forward state keeps running; each checkpoint pulls back a fresh copy
  // because U0^-T does not commute with further nonlinear steps.
  Walker walker(model, u0, t_max);
  int T = kFirstCheckpoint;
  walker.advance_to(T);
  LatticeState previous = pull_back(walker.state(), model.base, T);
  for (;;) {
    walker.advance_to(2 * T);
    LatticeState current = pull_back(walker.state(), model.base, 2 * T);
    const double defect = norm_l2(current - previous);
    result.trace.push_back({T, defect});
    result.u_plus = std::move(current);
    result.final_T = 2 * T;
    if (defect < tol) {
      result.converged = true;
      break;
    }
    if (4 * T > t_max) break;
    previous = result.u_plus;
    T *= 2;
  }

  if (!u0.empty()) {
    result.tail_mass =
        mass_outside(result.u_plus, u0.window_min() - result.final_T, u0.window_max() + result.final_T);
  }
  return result;
}

}  // namespace nlqw
