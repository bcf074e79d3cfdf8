#ifndef MOTRPG_MOPG_HPP
#define MOTRPG_MOPG_HPP

#include "motrpg/trust_region.hpp"

namespace motrpg {

/// Proximal gradient baseline: the composite subproblem with B_j = ell * I,
/// no trust region, and backtracking on the curvature scalar ell.
struct MOPGConfig {
  double ell0 = 1.0;    // initial curvature scalar
  double growth = 2.0;  // backtracking factor on ell
  double eps = 1e-5;
  int max_iters = 2000;
  int max_backtracks = 60;
  double sigma_floor = 1e-6;
  double b_cap = 1e6;
  double inner_tol = 1e-8;

  void validate() const;
};

/// Per iteration: solve the subproblem with B_j = ell * I and a radius large
/// enough to be inactive; accept x + d when
/// max_j { F_j(x+d) - F_j(x) } <= t/2, else grow ell and re-solve. ell
/// persists across iterations. Stops when ||d|| < eps.
SolverRun solve_mopg(const MOProblem& problem, const Vector& x0,
                     const MOPGConfig& config = {});

}  // namespace motrpg

#endif  // MOTRPG_MOPG_HPP
