#ifndef MOTRPG_SUBPROBLEM_HPP
#define MOTRPG_SUBPROBLEM_HPP

#include <utility>
#include <vector>

#include "motrpg/problem.hpp"
#include "motrpg/types.hpp"

namespace motrpg {

/// Per-objective quadratic model curvatures B_j with uniform spectral bounds
/// sigma_floor <= eig(B_j) <= b_cap, enforced by eigenvalue clamping at
/// construction.
struct QuadModelSet {
  std::vector<Matrix> B;
  double sigma_floor = 1e-6;
  double b_cap = 1e6;

  static QuadModelSet clamped(std::vector<Matrix> Bs, double sigma_floor,
                              double b_cap);
  static QuadModelSet identity(int m, int n, double sigma_floor = 1e-6,
                               double b_cap = 1e6);
};

/// Solution of the trust-region subproblem
///   min_d max_j { grad f_j(x)'d + 1/2 d'B_j d + g_j(x+d) - g_j(x) }
///   s.t. ||d||^2 <= Delta^2.
struct SubproblemSolution {
  Vector d;
  double t = 0.0;       // model value at d; always <= ~0
  Vector lambda;        // per-objective multipliers on the unit simplex
  double mu = 0.0;      // trust-region multiplier, scaled so that the
                        // stationarity condition reads sum_j lambda_j(...) + mu d = 0
  double kkt_residual = 0.0;  // max-norm aggregate, see solve_subproblem
  int barrier_iterations = 0;
  bool tolerance_reached = true;
  std::vector<Vector> xi;  // per-objective subgradient estimates at x+d
};

/// Solves the subproblem by epigraph reformulation (one convex quadratic
/// constraint per (objective, piece), 2n linear rows linking an auxiliary
/// |x+d| bound for weighted-l1 terms, one ball row) with a logarithmic-barrier
/// path-following method using exact Newton steps.
///
/// kkt_residual is the max norm over: stationarity
/// ||sum_j lambda_j (grad f_j + B_j d + xi_j) + mu d||_inf, primal violations
/// of the epigraph and ball constraints, dual negativity, the simplex defect
/// |sum lambda - 1|, and the complementarity products.
///
/// Throws std::invalid_argument for Delta <= 0 or tol <= 0 and
/// std::runtime_error on non-finite model data. When the barrier iteration
/// budget is exhausted the best iterate is returned with
/// tolerance_reached = false and its actual residual.
SubproblemSolution solve_subproblem(const Vector& x, const MOProblem& problem,
                                    const QuadModelSet& models, double Delta,
                                    double tol = 1e-8);

/// Stationarity measure
///   theta(x; Delta) = min_{||d|| <= Delta} max_j { grad f_j(x)'d
///                      + g_j(x+d) - g_j(x) },
/// the B = 0 instance of the subproblem. Value <= 0 always; 0 exactly at
/// critical points.
double theta(const Vector& x, const MOProblem& problem, double Delta,
             double tol = 1e-8);

/// Same as theta() but returns the full solution (minimizer may be
/// non-unique; the value is).
SubproblemSolution theta_solution(const Vector& x, const MOProblem& problem,
                                  double Delta, double tol = 1e-8);

/// Brute-force subproblem oracle for n <= 2: exhaustive Cartesian (n=1) or
/// polar (n=2) grid over the ball followed by coordinate-descent refinement
/// with exact 1-D ternary searches. Returns the best point and model value.
std::pair<Vector, double> grid_oracle(const Vector& x, const MOProblem& problem,
                                      const QuadModelSet& models, double Delta,
                                      int resolution = 64);

/// Model value max_j Q_j(x, d) used by both the solver and the oracle.
double model_value(const Vector& x, const MOProblem& problem,
                   const std::vector<Matrix>& B, const Vector& d);

/// One constraint row of the epigraph program, for diagnostics:
/// c(z) = 1/2 d'Hd d + ad'd + at*t + au'u + c0 <= 0 over z = [d; t; u].
struct EpigraphRowInfo {
  std::string type;  // "piece", "l1-epigraph", "l1-link", "ball"
  int objective = -1;
  Matrix Hd;
  Vector ad;
  double at = 0.0;
  Vector au;
  double c0 = 0.0;
};

/// Rows of the epigraph reformulation at x, for the debug dump.
std::vector<EpigraphRowInfo> epigraph_rows(const Vector& x,
                                           const MOProblem& problem,
                                           const QuadModelSet& models,
                                           double Delta);

/// Per-objective model values Q_j(x, d).
Vector model_values(const Vector& x, const MOProblem& problem,
                    const std::vector<Matrix>& B, const Vector& d);

}  // namespace motrpg

#endif  // MOTRPG_SUBPROBLEM_HPP
