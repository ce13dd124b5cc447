#pragma once

#include <vector>

#include "nlqw/coins.hpp"
#include "nlqw/lattice.hpp"

namespace nlqw {

struct DefectSample {
  int T = 0;
  double defect = 0.0;  // |v_2T - v_T|
};

struct ScatteringResult {
  LatticeState u_plus;
  std::vector<DefectSample> trace;
  bool converged = false;
  int final_T = 0;
  /// Mass of u_plus outside [x_min - final_T, x_max + final_T] of u0.
  double tail_mass = 0.0;
};

/// v_T = U0^-T U(T) u0. Exactly u0 when the model never leaves C0.
LatticeState back_propagated(const LatticeState& u0, const NonlinearCoinModel& model, int T);

/// Doubles T from 16 until |v_2T - v_T| < tol or 2T would exceed t_max.
/// Non-convergence is reported through the result, never thrown.
/// Throws OutOfRange unless tol > 0 and t_max is a power of two >= 32.
ScatteringResult extract_asymptotic(const LatticeState& u0, const NonlinearCoinModel& model, double tol = 1e-6,
                                    int t_max = 4096);

}  // namespace nlqw
