#pragma once

#include <functional>
#include <vector>

#include "nlqw/coins.hpp"
#include "nlqw/lattice.hpp"

namespace nlqw {

/// Sitewise u(x) -> C_N(g |u_1(x)|^2, g |u_2(x)|^2) u(x).
LatticeState apply_coin(const LatticeState& u, const NonlinearCoinModel& model);

/// (S u)(x) = (u_1(x + 1), u_2(x - 1)). The window grows by one site per side.
LatticeState apply_shift(const LatticeState& u);
LatticeState apply_shift_inverse(const LatticeState& u);

/// One application of U = S C.
LatticeState step(const LatticeState& u, const NonlinearCoinModel& model);

/// U0 = S C0 and its inverse C0* S^-1.
LatticeState step_linear(const LatticeState& u, const BaseCoin& coin);
LatticeState step_linear_inverse(const LatticeState& u, const BaseCoin& coin);

struct WalkConfig {
  NonlinearCoinModel model;
  LatticeState initial;
  int horizon = 0;

  /// Throws ValidationError unless |initial| = 1 within 1e-9 and horizon >= 0.
  void validate() const;
};

/// Streaming forward evolution u(t + 1) = U u(t).
///
/// The buffer covers the whole light cone [x_min - capacity, x_max + capacity]
/// of the initial state, so stepping never reallocates and every site outside
/// the current cone stays exactly zero.
class Walker {
 public:
  Walker(NonlinearCoinModel model, const LatticeState& initial, int capacity);

  int time() const { return t_; }
  int capacity() const { return capacity_; }
  const NonlinearCoinModel& model() const { return model_; }

  /// Advances one step. Throws OutOfRange once capacity is exhausted.
  void advance();
  void advance_to(int t);

  /// Current state on the light-cone window [x_min - t, x_max + t].
  LatticeState state() const;
  double norm() const;

 private:
  NonlinearCoinModel model_;
  Site origin_ = 0;  // site of buffer index 0
  Site lo_ = 0;      // current light cone, inclusive
  Site hi_ = 0;
  int t_ = 0;
  int capacity_ = 0;
  std::vector<Spinor> buf_;
  std::vector<Spinor> scratch_;
};

/// Final state U(T) u0.
LatticeState evolve(const WalkConfig& config);

/// Streams every state u(0), ..., u(T) to the observer.
void evolve(const WalkConfig& config, const std::function<void(int, const LatticeState&)>& observer);

/// Retains the full trajectory u(0), ..., u(T).
std::vector<LatticeState> evolve_trajectory(const WalkConfig& config);

}  // namespace nlqw
