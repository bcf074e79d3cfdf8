#ifndef MOTRPG_METRICS_HPP
#define MOTRPG_METRICS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "motrpg/types.hpp"

namespace motrpg {

/// Per-solver fronts plus their dominance-free union, the reference front.
struct FrontSet {
  std::vector<std::string> solver_ids;
  std::vector<std::vector<Vector>> fronts;  // objective vectors per solver
  std::vector<Vector> reference;

  static FrontSet build(std::vector<std::string> solver_ids,
                        std::vector<std::vector<Vector>> fronts);
};

/// Fraction of a solver's front lying within 'tol' (max norm) of some
/// reference-front point. Empty fronts report as missing, not zero.
std::vector<std::optional<double>> purity(const FrontSet& fronts,
                                          double tol = 1e-8);

/// Largest gap between consecutive sorted coordinates, maximized over
/// objectives. Needs at least 2 points.
double gamma_spread(const std::vector<Vector>& front);

/// Normalized gap-dispersion spread with zero extreme gaps,
///   max_j (d0 + dN + sum |d_i - mean|) / (d0 + dN + (N-1) mean).
/// Needs at least 3 points.
double delta_spread(const std::vector<Vector>& front);

/// Lebesgue measure of the union of boxes [p, reference] over front points p,
/// for 2 or 3 objectives. Points that do not strictly dominate the reference
/// are excluded; 'excluded' (when given) receives their count.
double hypervolume(const std::vector<Vector>& front, const Vector& reference,
                   int* excluded = nullptr);

enum class ProfileOrientation { LowerBetter, HigherBetter };

/// Right-continuous nondecreasing step curve rho_s(tau).
struct ProfileCurve {
  std::string solver_id;
  std::vector<std::pair<double, double>> breakpoints;  // (tau, rho), tau >= 1

  double value_at(double tau) const;
};

/// Dolan-More performance profiles over a cost table indexed
/// [problem][solver]; missing costs count as failures (ratio +inf).
std::vector<ProfileCurve> perf_profile(
    const std::vector<std::string>& solver_ids,
    const std::vector<std::vector<std::optional<double>>>& costs,
    ProfileOrientation orientation);

enum class SolverClass { GradientBased, HessianBased };

struct FunCount {
  std::string solver_id;
  std::string problem_id;
  std::int64_t f = 0;
  std::int64_t grad = 0;
  std::int64_t hess = 0;
  std::int64_t fun = 0;
};

/// Evaluation-cost aggregate: #fun = #f + n * #grad, plus n(n+1)/2 * #hess
/// for Hessian-based solver classes.
FunCount fun_evals(std::int64_t f, std::int64_t grad, std::int64_t hess, int n,
                   SolverClass cls);
FunCount fun_evals(const EvalCounters& counters, int n, SolverClass cls);

}  // namespace motrpg

#endif  // MOTRPG_METRICS_HPP
