#include "motrpg/mopg.hpp"

#include <cmath>
#include <stdexcept>

namespace motrpg {

void MOPGConfig::validate() const {
  if (ell0 <= 0) throw std::invalid_argument("ell0 must be > 0");
  if (growth <= 1) throw std::invalid_argument("growth must be > 1");
  if (eps <= 0) throw std::invalid_argument("eps must be > 0");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (max_backtracks < 1) throw std::invalid_argument("max_backtracks must be >= 1");
  if (sigma_floor <= 0 || b_cap < sigma_floor) {
    throw std::invalid_argument("need 0 < sigma_floor <= b_cap");
  }
}

SolverRun solve_mopg(const MOProblem& problem, const Vector& x0,
                     const MOPGConfig& config) {
  config.validate();
  problem.validate();
  if (x0.size() != problem.n || !x0.allFinite()) {
    throw std::invalid_argument("invalid start point");
  }

  SolverRun run;
  run.solver_id = "MOPG";
  run.problem_name = problem.name;

  Evaluator eval(problem);
  Vector x = x0;
  Vector F_cur = eval.objectives(x);
  double ell = config.ell0;

  run.termination = Termination::MaxIters;
  bool stop = false;
  for (int k = 0; k < config.max_iters && !stop; ++k) {
    double grad_max = 0;
    for (int j = 0; j < problem.m; ++j) {
      grad_max = std::max(grad_max, eval.smooth_gradient(x, j).norm());
    }

    int backtracks = 0;
    for (;;) {
      // radius chosen large enough that the ball constraint stays inactive
      const double radius = 1e6 * (1.0 + grad_max / ell);
      std::vector<Matrix> B(static_cast<size_t>(problem.m),
                            ell * Matrix::Identity(problem.n, problem.n));
      const QuadModelSet models =
          QuadModelSet::clamped(B, config.sigma_floor, config.b_cap);
      SubproblemSolution sol =
          solve_subproblem(x, problem, models, radius, config.inner_tol);
      if (!sol.tolerance_reached && sol.kkt_residual > 1e-4) {
        throw std::runtime_error(
            "subproblem solver failed at iteration " + std::to_string(k) +
            " of problem '" + problem.name + "'");
      }
      record_descent_check(run.descent_check, problem, x, sol,
                           config.sigma_floor);

      IterateRecord rec;
      rec.k = k;
      rec.x = x;
      rec.F = F_cur;
      rec.delta_used = radius;
      rec.d = sol.d;
      rec.t = sol.t;
      rec.inner_shrinks = backtracks;

      if (sol.d.norm() < config.eps) {
        run.trajectory.push_back(std::move(rec));
        run.termination = Termination::Converged;
        stop = true;
        break;
      }

      const Vector F_trial = eval.objectives(x + sol.d);
      if ((F_trial - F_cur).maxCoeff() <= 0.5 * sol.t) {
        rec.accepted = true;
        run.trajectory.push_back(std::move(rec));
        run.accepted_steps += 1;
        x = x + sol.d;
        F_cur = F_trial;
        break;
      }

      rec.accepted = false;
      run.trajectory.push_back(std::move(rec));
      ell *= config.growth;
      ++backtracks;
      if (backtracks > config.max_backtracks || ell > 1e18) {
        run.termination = Termination::InnerLoopExhausted;
        stop = true;
        break;
      }
    }
  }

  run.x_final = x;
  run.F_final = F_cur;
  run.counters = eval.counters();

  double gmax = 0;
  for (int j = 0; j < problem.m; ++j) {
    gmax = std::max(gmax, std::abs(problem.objectives[static_cast<size_t>(j)]
                                       .nonsmooth.value(x)));
  }
  run.final_certificate =
      criticality_certificate(problem, x, 10.0 * config.eps * (1.0 + gmax));
  return run;
}

}  // namespace motrpg
