#include "motrpg/problem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace motrpg {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::runtime_error(std::string("non-finite ") + what +
                             " (ill-posed problem data or point)");
  }
}

void check_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw std::runtime_error(std::string("non-finite ") + what +
                             " (ill-posed problem data or point)");
  }
}

}  // namespace

double SmoothTerm::value(const Vector& x) const {
  switch (kind) {
    case Kind::AnalyticClosedForm:
      return value_fn(x);
    case Kind::QuadraticLeastSquares:
      return 0.5 * (A * x - b).squaredNorm();
  }
  throw std::logic_error("unreachable");
}

bool SmoothTerm::has_analytic_gradient() const {
  return kind == Kind::QuadraticLeastSquares || static_cast<bool>(gradient_fn);
}

Vector SmoothTerm::analytic_gradient(const Vector& x) const {
  if (kind == Kind::QuadraticLeastSquares) return A.transpose() * (A * x - b);
  if (!gradient_fn) {
    throw std::runtime_error("smooth term '" + family +
                             "' has no analytic gradient");
  }
  return gradient_fn(x);
}

SmoothTerm SmoothTerm::least_squares(Matrix A, Vector b) {
  require(A.rows() >= 1, "least-squares term needs at least one row");
  require(A.rows() == b.size(), "least-squares A and b row counts differ");
  SmoothTerm t;
  t.kind = Kind::QuadraticLeastSquares;
  t.A = std::move(A);
  t.b = std::move(b);
  return t;
}

SmoothTerm SmoothTerm::analytic(std::string family,
                                std::function<double(const Vector&)> value,
                                std::function<Vector(const Vector&)> gradient) {
  SmoothTerm t;
  t.kind = Kind::AnalyticClosedForm;
  t.family = std::move(family);
  t.value_fn = std::move(value);
  t.gradient_fn = std::move(gradient);
  return t;
}

double NonsmoothTerm::value(const Vector& y) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::WeightedL1:
      return 0.5 * nu * y.lpNorm<1>();
    case Kind::MaxOfQuadratics: {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& p : pieces) best = std::max(best, p.value(y));
      return best;
    }
  }
  throw std::logic_error("unreachable");
}

NonsmoothTerm NonsmoothTerm::zero() { return NonsmoothTerm{}; }

NonsmoothTerm NonsmoothTerm::weighted_l1(double nu) {
  require(nu >= 0.0, "weighted-l1 weight must be >= 0");
  NonsmoothTerm t;
  t.kind = Kind::WeightedL1;
  t.nu = nu;
  return t;
}

NonsmoothTerm NonsmoothTerm::max_of_quadratics(std::vector<QuadPiece> pieces) {
  require(!pieces.empty(), "max-of-quadratics needs at least one piece");
  NonsmoothTerm t;
  t.kind = Kind::MaxOfQuadratics;
  t.pieces = std::move(pieces);
  return t;
}

void MOProblem::validate() const {
  require(n >= 1, "problem dimension must be >= 1");
  require(m >= 1, "problem needs at least one objective");
  require(static_cast<int>(objectives.size()) == m,
          "objective count does not match m");
  for (const auto& obj : objectives) {
    if (obj.smooth.kind == SmoothTerm::Kind::QuadraticLeastSquares) {
      require(obj.smooth.A.cols() == n, "least-squares A column count != n");
    }
    if (obj.nonsmooth.kind == NonsmoothTerm::Kind::MaxOfQuadratics) {
      for (const auto& p : obj.nonsmooth.pieces) {
        require(p.P.rows() == n && p.P.cols() == n, "piece P is not n x n");
        require(p.q.size() == n, "piece q dimension != n");
      }
    }
    if (obj.smooth.fd_step != 0.0) {
      require(obj.smooth.fd_step > 0.0, "forward-difference step must be > 0");
    }
  }
  if (box) {
    require(box->lb.size() == n && box->ub.size() == n, "box dimension != n");
    require(box->valid(), "box must satisfy lb < ub componentwise");
  }
}

double default_activity_tol(double g_value) {
  return 1e-8 * (1.0 + std::abs(g_value));
}

Vector smooth_gradient_raw(const SmoothTerm& term, const Vector& x) {
  if (term.has_analytic_gradient()) return term.analytic_gradient(x);
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  const double f0 = term.value(x);
  Vector g(x.size());
  Vector xp = x;
  for (int i = 0; i < x.size(); ++i) {
    const double h =
        term.fd_step > 0.0 ? term.fd_step : sqrt_eps * (1.0 + std::abs(x[i]));
    xp[i] = x[i] + h;
    g[i] = (term.value(xp) - f0) / h;
    xp[i] = x[i];
  }
  return g;
}

ActiveSubgradient active_subgradients(const MOProblem& problem, const Vector& x,
                                      int j, std::optional<double> tau_act) {
  if (j < 0 || j >= problem.m) throw std::invalid_argument("objective index out of range");
  if (x.size() != problem.n) throw std::invalid_argument("dimension mismatch");
  if (tau_act && *tau_act <= 0.0) throw std::invalid_argument("tau_act must be > 0");

  const NonsmoothTerm& g = problem.objectives[static_cast<size_t>(j)].nonsmooth;
  ActiveSubgradient out;
  out.objective_index = j;

  switch (g.kind) {
    case NonsmoothTerm::Kind::Zero: {
      out.active_pieces = {0};
      out.generators = {Vector::Zero(problem.n)};
      break;
    }
    case NonsmoothTerm::Kind::MaxOfQuadratics: {
      const double gx = g.value(x);
      const double tol = tau_act ? *tau_act : default_activity_tol(gx);
      for (int i = 0; i < static_cast<int>(g.pieces.size()); ++i) {
        if (gx - g.pieces[static_cast<size_t>(i)].value(x) <= tol) {
          out.active_pieces.push_back(i);
          out.generators.push_back(g.pieces[static_cast<size_t>(i)].gradient(x));
        }
      }
      break;
    }
    case NonsmoothTerm::Kind::WeightedL1: {
      const double gx = g.value(x);
      const double tol = tau_act ? *tau_act : default_activity_tol(gx);
      const double w = 0.5 * g.nu;
      Vector base(problem.n);
      std::vector<int> free_coords;
      for (int i = 0; i < problem.n; ++i) {
        if (std::abs(x[i]) <= tol) {
          free_coords.push_back(i);
          base[i] = 0.0;
        } else {
          base[i] = (x[i] > 0.0 ? w : -w);
        }
      }
      out.active_pieces = free_coords;
      if (free_coords.size() > 20) {
        throw std::runtime_error(
            "weighted-l1 subdifferential has too many vertex generators "
            "(more than 20 coordinates at zero)");
      }
      const size_t count = size_t{1} << free_coords.size();
      out.generators.reserve(count);
      for (size_t mask = 0; mask < count; ++mask) {
        Vector gen = base;
        for (size_t bit = 0; bit < free_coords.size(); ++bit) {
          gen[free_coords[bit]] = (mask >> bit & 1) ? w : -w;
        }
        out.generators.push_back(std::move(gen));
      }
      break;
    }
  }
  return out;
}

Evaluator::Evaluator(const MOProblem& problem) : problem_(&problem) {
  problem.validate();
  cache_.resize(static_cast<size_t>(problem.m));
}

double Evaluator::smooth_value_counted(const Vector& x, int j) {
  auto& slot = cache_[static_cast<size_t>(j)];
  const double f = problem_->objectives[static_cast<size_t>(j)].smooth.value(x);
  check_finite(f, "objective value");
  counters_.f_evals += 1;
  slot.x = x;
  slot.f = f;
  slot.valid = true;
  return f;
}

Vector Evaluator::objectives(const Vector& x) {
  auto [f, g] = components(x);
  return f + g;
}

std::pair<Vector, Vector> Evaluator::components(const Vector& x) {
  if (x.size() != problem_->n) throw std::invalid_argument("dimension mismatch");
  Vector f(problem_->m), g(problem_->m);
  for (int j = 0; j < problem_->m; ++j) {
    f[j] = smooth_value_counted(x, j);
    g[j] = problem_->objectives[static_cast<size_t>(j)].nonsmooth.value(x);
    counters_.g_evals += 1;
  }
  check_finite(g, "nonsmooth value");
  return {f, g};
}

double Evaluator::nonsmooth_value(const Vector& x, int j) {
  if (j < 0 || j >= problem_->m) throw std::invalid_argument("objective index out of range");
  if (x.size() != problem_->n) throw std::invalid_argument("dimension mismatch");
  const double g = problem_->objectives[static_cast<size_t>(j)].nonsmooth.value(x);
  check_finite(g, "nonsmooth value");
  counters_.g_evals += 1;
  return g;
}

Vector Evaluator::smooth_gradient(const Vector& x, int j) {
  if (j < 0 || j >= problem_->m) throw std::invalid_argument("objective index out of range");
  if (x.size() != problem_->n) throw std::invalid_argument("dimension mismatch");
  const SmoothTerm& term = problem_->objectives[static_cast<size_t>(j)].smooth;

  if (term.gradient_mode == SmoothTerm::GradientMode::Analytic) {
    Vector grad = term.analytic_gradient(x);
    check_finite(grad, "gradient");
    counters_.grad_evals += 1;
    return grad;
  }

  // Forward difference. Reuses the cached f_j(x) when the last smooth
  // evaluation of objective j was at this exact point.
  auto& slot = cache_[static_cast<size_t>(j)];
  double f0;
  if (slot.valid && slot.x.size() == x.size() && slot.x == x) {
    f0 = slot.f;
  } else {
    f0 = smooth_value_counted(x, j);
  }
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  Vector grad(problem_->n);
  Vector xp = x;
  for (int i = 0; i < problem_->n; ++i) {
    const double h = term.fd_step > 0.0 ? term.fd_step
                                        : sqrt_eps * (1.0 + std::abs(x[i]));
    xp[i] = x[i] + h;
    const double fp = term.value(xp);
    check_finite(fp, "objective value");
    counters_.f_evals += 1;
    grad[i] = (fp - f0) / h;
    xp[i] = x[i];
  }
  check_finite(grad, "gradient");
  counters_.grad_evals += 1;
  return grad;
}

}  // namespace motrpg
