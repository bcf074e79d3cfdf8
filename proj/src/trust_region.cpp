#include "motrpg/trust_region.hpp"

#include <cmath>
#include <stdexcept>

#include "motrpg/hull.hpp"

namespace motrpg {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void record_descent_check(DescentCheck& chk, const MOProblem& problem,
                          const Vector& x, const SubproblemSolution& sol,
                          double sigma_floor) {
  constexpr double slack = 1e-6;
  chk.solves += 1;
  const double dn2 = sol.d.squaredNorm();
  const double bound_t = -(0.5 * sigma_floor + sol.mu) * dn2;
  double worst = sol.t - bound_t;
  const double bound_dir = -(sigma_floor + sol.mu) * dn2;
  for (int j = 0; j < problem.m; ++j) {
    const auto& obj = problem.objectives[static_cast<size_t>(j)];
    const Vector grad = smooth_gradient_raw(obj.smooth, x);
    const double lhs = grad.dot(sol.d) + obj.nonsmooth.value(x + sol.d) -
                       obj.nonsmooth.value(x);
    worst = std::max(worst, lhs - bound_dir);
  }
  if (worst > slack) chk.violations += 1;
  chk.worst_margin = std::max(chk.worst_margin, worst);
}

void SolverConfig::validate() const {
  require(0 < sigma3 && sigma3 < 1 && 1 < sigma1,
          "need 0 < sigma3 < 1 < sigma1");
  require(0 < sigma0 && sigma0 < sigma2 && sigma2 < 1,
          "need 0 < sigma0 < sigma2 < 1");
  require(eps > 0, "eps must be > 0");
  require(max_outer_iters >= 1, "max_outer_iters must be >= 1");
  require(max_inner_shrinks >= 1, "max_inner_shrinks must be >= 1");
  require(sigma_floor > 0 && b_cap >= sigma_floor,
          "need 0 < sigma_floor <= b_cap");
  require(inner_tol > 0, "inner_tol must be > 0");
  require(initial_b_scale > 0, "initial_b_scale must be > 0");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged:
      return "converged";
    case Termination::MaxIters:
      return "max_iters";
    case Termination::InnerLoopExhausted:
      return "inner_loop_exhausted";
  }
  return "unknown";
}

const char* to_string(RadiusAction a) {
  switch (a) {
    case RadiusAction::Shrink:
      return "shrink";
    case RadiusAction::Keep:
      return "keep";
    case RadiusAction::Expand:
      return "expand";
  }
  return "unknown";
}

double reduction_ratio(const Vector& F_before, const Vector& F_after, double t) {
  if (!(t < 0)) {
    throw std::invalid_argument(
        "reduction ratio needs a negative model value (non-descent model)");
  }
  if (F_before.size() != F_after.size()) {
    throw std::invalid_argument("objective vector sizes differ");
  }
  return (F_before - F_after).minCoeff() / (-t);
}

std::pair<double, RadiusAction> update_radius(double delta, double rho,
                                              const SolverConfig& config) {
  if (delta <= 0) throw std::invalid_argument("radius must be > 0");
  if (rho < config.sigma0) return {config.sigma3 * delta, RadiusAction::Shrink};
  if (rho >= config.sigma2) {
    return {std::max(config.sigma1 * delta, config.delta_min),
            RadiusAction::Expand};
  }
  return {delta, RadiusAction::Keep};
}

Matrix damped_bfgs_update(const Matrix& B, const Vector& s, const Vector& y,
                          double sigma_floor, double b_cap) {
  if (s.size() == 0 || s.norm() == 0) {
    throw std::invalid_argument("BFGS update needs a nonzero step");
  }
  const Vector Bs = B * s;
  const double c = s.dot(Bs);
  const double sy = s.dot(y);

  Vector r = y;
  double sr = sy;
  if (sy < 0.2 * c) {  // Powell damping keeps the curvature pair positive
    const double theta = 0.8 * c / (c - sy);
    r = theta * y + (1.0 - theta) * Bs;
    sr = s.dot(r);
  }

  Matrix next = B - (Bs * Bs.transpose()) / c + (r * r.transpose()) / sr;
  return QuadModelSet::clamped({next}, sigma_floor, b_cap).B[0];
}

CriticalityCertificate criticality_certificate(const MOProblem& problem,
                                               const Vector& x,
                                               std::optional<double> tau_act,
                                               double tol) {
  problem.validate();
  if (x.size() != problem.n) throw std::invalid_argument("dimension mismatch");

  std::vector<Vector> generators;
  for (int j = 0; j < problem.m; ++j) {
    const auto& obj = problem.objectives[static_cast<size_t>(j)];
    const Vector grad = smooth_gradient_raw(obj.smooth, x);
    const ActiveSubgradient sub = active_subgradients(problem, x, j, tau_act);
    for (const Vector& xi : sub.generators) generators.push_back(grad + xi);
  }

  MinNormPoint mnp = min_norm_point(generators, tol);
  CriticalityCertificate cert;
  cert.hull_distance = mnp.distance;
  cert.weights = mnp.weights;
  cert.generators = std::move(generators);
  return cert;
}

SolverRun solve(const MOProblem& problem, const Vector& x0,
                const SolverConfig& config) {
  config.validate();
  problem.validate();
  if (x0.size() != problem.n || !x0.allFinite()) {
    throw std::invalid_argument("invalid start point");
  }

  SolverRun run;
  run.solver_id = "MOTRPG";
  run.problem_name = problem.name;

  Evaluator eval(problem);
  Vector x = x0;
  Vector F_cur = eval.objectives(x);
  std::vector<Vector> grads(static_cast<size_t>(problem.m));
  for (int j = 0; j < problem.m; ++j) grads[static_cast<size_t>(j)] = eval.smooth_gradient(x, j);

  double min_grad_norm = grads[0].norm();
  for (const Vector& g : grads) min_grad_norm = std::min(min_grad_norm, g.norm());

  SolverConfig cfg = config;
  if (cfg.delta_min <= 0) cfg.delta_min = std::max(min_grad_norm, 1.0);
  double delta = std::max(min_grad_norm, cfg.delta_min);
  run.delta0 = delta;

  std::vector<Matrix> B(static_cast<size_t>(problem.m),
                        cfg.initial_b_scale * Matrix::Identity(problem.n, problem.n));
  if (cfg.initial_b == SolverConfig::InitialB::Identity) {
    for (auto& Bj : B) Bj = Matrix::Identity(problem.n, problem.n);
  }

  run.termination = Termination::MaxIters;
  bool stop = false;
  for (int k = 0; k < cfg.max_outer_iters && !stop; ++k) {
    int shrinks = 0;
    for (;;) {
      const QuadModelSet models =
          QuadModelSet::clamped(B, cfg.sigma_floor, cfg.b_cap);
      SubproblemSolution sol =
          solve_subproblem(x, problem, models, delta, cfg.inner_tol);
      if (!sol.tolerance_reached && sol.kkt_residual > 1e-4) {
        throw std::runtime_error(
            "subproblem solver failed at iteration " + std::to_string(k) +
            " of problem '" + problem.name +
            "' (kkt residual " + std::to_string(sol.kkt_residual) + ")");
      }
      record_descent_check(run.descent_check, problem, x, sol, cfg.sigma_floor);

      IterateRecord rec;
      rec.k = k;
      rec.x = x;
      rec.F = F_cur;
      rec.delta_used = delta;
      rec.d = sol.d;
      rec.t = sol.t;
      rec.inner_shrinks = shrinks;

      if (sol.d.norm() < cfg.eps) {
        run.trajectory.push_back(std::move(rec));
        run.termination = Termination::Converged;
        stop = true;
        break;
      }

      const Vector F_trial = eval.objectives(x + sol.d);
      const double rho = reduction_ratio(F_cur, F_trial, sol.t);
      rec.rho = rho;

      if (rho < cfg.sigma0) {
        rec.accepted = false;
        run.trajectory.push_back(std::move(rec));
        delta = cfg.sigma3 * delta;
        ++shrinks;
        if (shrinks > cfg.max_inner_shrinks) {
          run.termination = Termination::InnerLoopExhausted;
          stop = true;
          break;
        }
        continue;
      }

      rec.accepted = true;
      run.trajectory.push_back(std::move(rec));
      run.accepted_steps += 1;

      const Vector s = sol.d;
      x = x + s;
      F_cur = F_trial;
      for (int j = 0; j < problem.m; ++j) {
        const Vector grad_new = eval.smooth_gradient(x, j);
        const Vector y = grad_new - grads[static_cast<size_t>(j)];
        B[static_cast<size_t>(j)] = damped_bfgs_update(
            B[static_cast<size_t>(j)], s, y, cfg.sigma_floor, cfg.b_cap);
        grads[static_cast<size_t>(j)] = grad_new;
      }

      if (rho >= cfg.sigma2) {
        delta = std::max(cfg.sigma1 * delta, cfg.delta_min);
      }
      break;
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
      criticality_certificate(problem, x, 10.0 * cfg.eps * (1.0 + gmax));
  return run;
}

}  // namespace motrpg
