#ifndef MOTRPG_TRUST_REGION_HPP
#define MOTRPG_TRUST_REGION_HPP

#include <optional>
#include <string>
#include <vector>

#include "motrpg/problem.hpp"
#include "motrpg/subproblem.hpp"
#include "motrpg/types.hpp"

namespace motrpg {

struct SolverConfig {
  double sigma0 = 0.01;  // acceptance threshold on the reduction ratio
  double sigma1 = 1.5;   // radius expansion factor
  double sigma2 = 0.5;   // expansion threshold
  double sigma3 = 0.5;   // shrink factor
  // Radius floor; <= 0 selects max(min_j ||grad f_j(x0)||, 1). The initial
  // radius is min_j ||grad f_j(x0)|| clamped below by delta_min.
  double delta_min = 0.0;
  double eps = 1e-5;  // stop when ||d|| < eps
  int max_outer_iters = 2000;
  int max_inner_shrinks = 60;
  double sigma_floor = 1e-6;  // model eigenvalue clamps
  double b_cap = 1e6;
  double inner_tol = 1e-8;  // subproblem KKT tolerance
  enum class InitialB { Identity, ScaledIdentity };
  InitialB initial_b = InitialB::Identity;
  double initial_b_scale = 1.0;

  void validate() const;  // throws std::invalid_argument
};

/// One subproblem attempt of the outer loop: shrink attempts and the
/// accepted step of an outer iteration all produce a record.
struct IterateRecord {
  int k = 0;           // outer iteration index
  Vector x;            // iterate the subproblem was solved at
  Vector F;            // F(x)
  double delta_used = 0.0;
  Vector d;
  double t = 0.0;
  std::optional<double> rho;  // absent on the terminal ||d|| < eps solve
  int inner_shrinks = 0;      // shrink count so far within this outer iteration
  bool accepted = false;
};

enum class Termination { Converged, MaxIters, InnerLoopExhausted };

const char* to_string(Termination t);

struct CriticalityCertificate {
  double hull_distance = 0.0;
  Vector weights;                  // convex coefficients over the generators
  std::vector<Vector> generators;  // grad f_j + subgradient generators, all j
};

/// Running tallies of the per-solve descent guarantees
///   t <= -(sigma_floor/2 + mu) ||d||^2 + 1e-6
///   grad f_j'd + g_j(x+d) - g_j(x) <= -(sigma_floor + mu) ||d||^2 + 1e-6.
struct DescentCheck {
  long long solves = 0;
  long long violations = 0;
  double worst_margin = 0.0;  // most positive left-minus-right seen
};

/// Accumulates the descent guarantees of one subproblem solve into chk.
void record_descent_check(DescentCheck& chk, const MOProblem& problem,
                          const Vector& x, const SubproblemSolution& sol,
                          double sigma_floor);

struct SolverRun {
  std::string solver_id;
  std::string problem_name;
  std::vector<IterateRecord> trajectory;
  Termination termination = Termination::Converged;
  EvalCounters counters;
  CriticalityCertificate final_certificate;
  Vector x_final;
  Vector F_final;
  int accepted_steps = 0;
  double delta0 = 0.0;
  DescentCheck descent_check;
};

/// Reduction ratio min_j {F_j(before) - F_j(after)} / (-t). Requires t < 0.
double reduction_ratio(const Vector& F_before, const Vector& F_after, double t);

enum class RadiusAction { Shrink, Keep, Expand };

const char* to_string(RadiusAction a);

/// Radius transition: rho < sigma0 shrinks by sigma3, rho >= sigma2 expands to
/// max(sigma1 * delta, delta_min), otherwise unchanged.
std::pair<double, RadiusAction> update_radius(double delta, double rho,
                                              const SolverConfig& config);

/// Powell-damped BFGS update of a symmetric positive definite matrix with
/// eigenvalues clamped into [sigma_floor, b_cap] afterwards. Requires s != 0.
Matrix damped_bfgs_update(const Matrix& B, const Vector& s, const Vector& y,
                          double sigma_floor, double b_cap);

/// Distance from the origin to conv{ grad f_j(x) + xi : xi generator of
/// dg_j(x), j = 1..m } and the convex weights attaining it. tau_act defaults
/// per objective to 1e-8 * (1 + |g_j(x)|). Does not touch evaluation counters.
CriticalityCertificate criticality_certificate(const MOProblem& problem,
                                               const Vector& x,
                                               std::optional<double> tau_act = {},
                                               double tol = 1e-12);

/// Trust-region proximal gradient loop: solve P(x^k, Delta_k); stop when
/// ||d|| < eps; otherwise accept when the reduction ratio clears sigma0,
/// shrinking the radius and re-solving when it does not; damped BFGS model
/// updates per objective after every accepted step.
SolverRun solve(const MOProblem& problem, const Vector& x0,
                const SolverConfig& config = {});

}  // namespace motrpg

#endif  // MOTRPG_TRUST_REGION_HPP
