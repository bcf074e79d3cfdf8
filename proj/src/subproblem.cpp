#include "motrpg/subproblem.hpp"
#include <cstdio>
#include <cstdlib>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace motrpg {

namespace {

using Real = long double;  // barrier internals carry extra precision
using VecR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using MatR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

VecR to_real(const Vector& v) { return v.cast<Real>(); }
MatR to_real(const Matrix& m) { return m.cast<Real>(); }
Vector to_double(const VecR& v) { return v.cast<double>(); }

// Shared data of the model Q at a fixed base point.
struct ModelData {
  const MOProblem* prob;
  const std::vector<Matrix>* B;
  Vector x;
  std::vector<Vector> grad_f;  // per objective
  Vector g_at_x;               // per objective

  ModelData(const Vector& x_in, const MOProblem& p, const std::vector<Matrix>& Bs)
      : prob(&p), B(&Bs), x(x_in) {
    grad_f.reserve(static_cast<size_t>(p.m));
    g_at_x.resize(p.m);
    for (int j = 0; j < p.m; ++j) {
      const auto& obj = p.objectives[static_cast<size_t>(j)];
      grad_f.push_back(smooth_gradient_raw(obj.smooth, x_in));
      g_at_x[j] = obj.nonsmooth.value(x_in);
      if (!grad_f.back().allFinite() || !std::isfinite(g_at_x[j])) {
        throw std::runtime_error("non-finite model data at base point");
      }
    }
  }

  double q_j(const Vector& d, int j) const {
    const auto& obj = prob->objectives[static_cast<size_t>(j)];
    return grad_f[static_cast<size_t>(j)].dot(d) +
           0.5 * d.dot((*B)[static_cast<size_t>(j)] * d) +
           obj.nonsmooth.value(x + d) - g_at_x[j];
  }

  double value(const Vector& d) const {
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < prob->m; ++j) best = std::max(best, q_j(d, j));
    return best;
  }
};

// One inequality row c(z) <= 0 of the epigraph program,
//   c(z) = 1/2 d'Hd d + ad'd + at*t + au'u + c0,
// over z = [d; t; u].
struct Row {
  enum class Type { Piece, L1Epi, Link, Ball };
  Type type;
  int objective = -1;  // epigraph rows only
  MatR Hd;             // empty when the row is linear in d
  VecR ad;
  Real at = 0;
  VecR au;  // empty when the program has no u block
  Real c0 = 0;

  Real eval(const VecR& d, Real t, const VecR& u) const {
    Real v = ad.dot(d) + at * t + c0;
    if (Hd.size() > 0) v += Real(0.5) * d.dot(Hd * d);
    if (au.size() > 0) v += au.dot(u);
    return v;
  }
};

struct Program {
  int n = 0;  // d block
  int q = 0;  // u block (n when any weighted-l1 term is present, else 0)
  std::vector<Row> rows;
  int ball_row = -1;

  int dim() const { return n + 1 + q; }
};

Program build_program(const ModelData& md, double Delta) {
  const MOProblem& p = *md.prob;
  Program prog;
  prog.n = p.n;
  const bool any_l1 = std::any_of(
      p.objectives.begin(), p.objectives.end(), [](const Objective& o) {
        return o.nonsmooth.kind == NonsmoothTerm::Kind::WeightedL1;
      });
  prog.q = any_l1 ? p.n : 0;

  for (int j = 0; j < p.m; ++j) {
    const auto& obj = p.objectives[static_cast<size_t>(j)];
    const MatR Bj = to_real((*md.B)[static_cast<size_t>(j)]);
    const VecR gf = to_real(md.grad_f[static_cast<size_t>(j)]);
    switch (obj.nonsmooth.kind) {
      case NonsmoothTerm::Kind::Zero: {
        Row r;
        r.type = Row::Type::Piece;
        r.objective = j;
        r.Hd = Bj;
        r.ad = gf;
        r.at = -1;
        r.c0 = 0;
        prog.rows.push_back(std::move(r));
        break;
      }
      case NonsmoothTerm::Kind::MaxOfQuadratics: {
        for (const auto& piece : obj.nonsmooth.pieces) {
          Row r;
          r.type = Row::Type::Piece;
          r.objective = j;
          r.Hd = Bj + to_real(piece.P);
          r.ad = gf + to_real(Vector(piece.P * md.x + piece.q));
          r.at = -1;
          r.c0 = Real(piece.value(md.x)) - Real(md.g_at_x[j]);
          prog.rows.push_back(std::move(r));
        }
        break;
      }
      case NonsmoothTerm::Kind::WeightedL1: {
        Row r;
        r.type = Row::Type::L1Epi;
        r.objective = j;
        r.Hd = Bj;
        r.ad = gf;
        r.at = -1;
        r.au = VecR::Constant(prog.q, Real(0.5) * Real(obj.nonsmooth.nu));
        r.c0 = -Real(md.g_at_x[j]);
        prog.rows.push_back(std::move(r));
        break;
      }
    }
  }

  if (prog.q > 0) {
    // u_i >= |x_i + d_i| as two linear rows per coordinate
    for (int i = 0; i < p.n; ++i) {
      for (int sign : {+1, -1}) {
        Row r;
        r.type = Row::Type::Link;
        r.ad = VecR::Zero(p.n);
        r.ad[i] = Real(sign);
        r.au = VecR::Zero(prog.q);
        r.au[i] = -1;
        r.c0 = Real(sign) * Real(md.x[i]);
        prog.rows.push_back(std::move(r));
      }
    }
  }

  Row ball;
  ball.type = Row::Type::Ball;
  ball.Hd = MatR::Identity(p.n, p.n) * Real(2);
  ball.ad = VecR::Zero(p.n);
  ball.c0 = -Real(Delta) * Real(Delta);
  prog.ball_row = static_cast<int>(prog.rows.size());
  prog.rows.push_back(std::move(ball));
  return prog;
}

struct BarrierState {
  VecR d;
  Real t = 0;
  VecR u;
};

Real row_value(const Row& r, const BarrierState& z) { return r.eval(z.d, z.t, z.u); }

// grad c in packed coordinates [d; t; u]
VecR row_grad(const Row& r, const Program& prog, const BarrierState& z) {
  VecR g = VecR::Zero(prog.dim());
  VecR gd = r.ad;
  if (r.Hd.size() > 0) gd += r.Hd * z.d;
  g.head(prog.n) = gd;
  g[prog.n] = r.at;
  if (r.au.size() > 0) g.tail(prog.q) = r.au;
  return g;
}

struct BarrierResult {
  BarrierState z;
  std::vector<Real> duals;  // one per row, = 1/(tau * slack)
  int newton_steps = 0;
  bool budget_exhausted = false;
};

void polish(const Program& prog, Real tau, BarrierResult& res);

// Logarithmic-barrier path following with exact Newton centering steps.
// Minimizes t subject to rows < 0; barrier weight tau is multiplied by 10
// per stage until m_rows / tau <= tol / 10. The barrier is self-concordant,
// so centering uses the damped Newton step alpha = 1/(1 + lambda) while the
// decrement lambda is large and full steps in the quadratic phase; only
// strict feasibility is line searched, no merit comparisons.
BarrierResult solve_barrier(const Program& prog, const BarrierState& start,
                            double tol) {
  const int dim = prog.dim();
  const Real m_rows = static_cast<Real>(prog.rows.size());
  const Real gap_target = Real(tol) / 10;

  BarrierState z = start;
  std::vector<Real> slack(prog.rows.size());
  auto refresh_slack = [&](const BarrierState& s, std::vector<Real>& out) {
    for (size_t k = 0; k < prog.rows.size(); ++k) {
      out[k] = -row_value(prog.rows[k], s);
      if (!(out[k] > 0)) return false;
    }
    return true;
  };
  if (!refresh_slack(z, slack)) {
    throw std::runtime_error("barrier start point is not strictly feasible");
  }

  BarrierResult res;
  res.z = z;
  const int max_total_newton = 4000;
  int total_newton = 0;

  Real tau = 1;
  for (;;) {
    const bool last_stage = (m_rows / tau <= gap_target);
    const int max_iters = last_stage ? 100 : 50;
    for (int it = 0; it < max_iters; ++it) {
      if (total_newton >= max_total_newton) {
        res.budget_exhausted = true;
        break;
      }
      VecR g = VecR::Zero(dim);
      g[prog.n] = tau;
      MatR H = MatR::Zero(dim, dim);
      for (size_t k = 0; k < prog.rows.size(); ++k) {
        const Row& r = prog.rows[k];
        const VecR gr = row_grad(r, prog, z);
        const Real inv_s = Real(1) / slack[k];
        g += inv_s * gr;
        H.noalias() += (inv_s * inv_s) * (gr * gr.transpose());
        if (r.Hd.size() > 0) H.topLeftCorner(prog.n, prog.n) += inv_s * r.Hd;
      }

      // Newton direction, with a growing ridge if the factorization is in
      // trouble or fails to produce descent
      VecR p;
      Real ridge = 0;
      for (int attempt = 0;; ++attempt) {
        MatR Hr = H;
        if (ridge > 0) Hr.diagonal().array() += ridge;
        Eigen::LDLT<MatR> ldlt(Hr);
        p = ldlt.solve(-g);
        const bool ok = ldlt.info() == Eigen::Success && p.allFinite() &&
                        g.dot(p) < 0;
        if (ok || attempt >= 6) break;
        ridge = (ridge == 0) ? Real(1e-18) * (1 + H.diagonal().maxCoeff())
                             : ridge * 10000;
      }
      if (!p.allFinite() || g.dot(p) >= 0) break;  // no usable direction

      const Real lambda2 = -g.dot(p);
      // the reachable decrement floor scales with tau in fixed precision
      const Real lambda_stop = std::max(Real(1e-12), Real(2e-17) * tau);
      if (lambda2 / 2 <= lambda_stop * lambda_stop / 2) break;  // centered
      const Real lambda = std::sqrt(lambda2);

      Real alpha = lambda > Real(0.25) ? Real(1) / (1 + lambda) : Real(1);
      BarrierState zt;
      std::vector<Real> slack_t(prog.rows.size());
      bool moved = false;
      for (int ls = 0; ls < 120; ++ls) {
        zt.d = z.d + alpha * p.head(prog.n);
        zt.t = z.t + alpha * p[prog.n];
        zt.u = prog.q > 0 ? VecR(z.u + alpha * p.tail(prog.q)) : z.u;
        if (refresh_slack(zt, slack_t)) {
          moved = true;
          break;
        }
        alpha *= Real(0.7);
      }
      if (!moved) break;
      z = zt;
      slack.swap(slack_t);
      ++total_newton;
    }
    if (std::getenv("MOTRPG_BARRIER_DEBUG")) {
      std::fprintf(stderr, "stage tau=%.1Le newton_total=%d t=%.10Lf\n", tau,
                   total_newton, z.t);
    }
    if (last_stage || res.budget_exhausted) break;
    tau *= 10;
  }

  res.z = z;
  res.newton_steps = total_newton;
  res.duals.resize(prog.rows.size());
  for (size_t k = 0; k < prog.rows.size(); ++k) {
    res.duals[k] = Real(1) / (tau * slack[k]);
  }
  polish(prog, tau, res);
  return res;
}

// Active-set refinement. The path-following iterate identifies the active
// rows through their dual magnitudes; Newton steps on the square KKT system
//   e_t + sum_{k in A} nu_k grad c_k(z) = 0,  c_k(z) = 0 (k in A)
// then sharpen primal and dual values to machine precision, which the
// ill-conditioned late-stage barrier Hessians cannot deliver on their own.
// Falls back to the unpolished iterate whenever the refined point is worse.
void polish(const Program& prog, Real tau, BarrierResult& res) {
  const int dim = prog.dim();
  std::vector<size_t> active;
  for (size_t k = 0; k < prog.rows.size(); ++k) {
    if (res.duals[k] > Real(1e-7)) active.push_back(k);
  }
  if (active.empty() || static_cast<int>(active.size()) > dim) return;

  auto kkt_residual = [&](const BarrierState& s, const VecR& nu) {
    VecR r = VecR::Zero(dim);
    r[prog.n] = 1;
    for (size_t a = 0; a < active.size(); ++a) {
      r += nu[static_cast<long>(a)] * row_grad(prog.rows[active[a]], prog, s);
    }
    Real worst = r.cwiseAbs().maxCoeff();
    for (size_t a = 0; a < active.size(); ++a) {
      worst = std::max(worst, std::abs(row_value(prog.rows[active[a]], s)));
    }
    return worst;
  };

  BarrierState z = res.z;
  VecR nu(static_cast<long>(active.size()));
  for (size_t a = 0; a < active.size(); ++a) {
    nu[static_cast<long>(a)] = res.duals[active[a]];
  }
  Real best = kkt_residual(z, nu);
  BarrierState z_best = z;
  VecR nu_best = nu;

  const long na = static_cast<long>(active.size());
  for (int step = 0; step < 4; ++step) {
    MatR K = MatR::Zero(dim + na, dim + na);
    VecR rhs = VecR::Zero(dim + na);
    VecR r1 = VecR::Zero(dim);
    r1[prog.n] = 1;
    for (long a = 0; a < na; ++a) {
      const Row& row = prog.rows[active[static_cast<size_t>(a)]];
      const VecR gr = row_grad(row, prog, z);
      r1 += nu[a] * gr;
      K.block(0, dim + a, dim, 1) = gr;
      K.block(dim + a, 0, 1, dim) = gr.transpose();
      rhs[dim + a] = -row_value(row, z);
      if (row.Hd.size() > 0) {
        K.topLeftCorner(prog.n, prog.n) += nu[a] * row.Hd;
      }
    }
    rhs.head(dim) = -r1;

    Eigen::FullPivLU<MatR> lu(K);
    if (!lu.isInvertible()) break;
    const VecR delta = lu.solve(rhs);
    if (!delta.allFinite()) break;

    BarrierState zt = z;
    zt.d += delta.head(prog.n);
    zt.t += delta[prog.n];
    if (prog.q > 0) zt.u += delta.segment(prog.n + 1, prog.q);
    const VecR nut = nu + delta.tail(na);

    // reject steps that leave the inequality region; tolerate roundoff-level
    // negative multipliers (weakly active rows sit at exactly zero)
    bool ok = nut.minCoeff() >= -Real(1e-9);
    for (size_t k = 0; k < prog.rows.size() && ok; ++k) {
      if (std::find(active.begin(), active.end(), k) != active.end()) continue;
      if (row_value(prog.rows[k], zt) >= 0) ok = false;
    }
    if (!ok) break;
    z = zt;
    nu = nut.cwiseMax(Real(0));
    const Real now = kkt_residual(z, nu);
    if (now < best) {
      best = now;
      z_best = z;
      nu_best = nu;
    }
    if (now < Real(1e-18)) break;
  }

  res.z = z_best;
  for (size_t k = 0; k < prog.rows.size(); ++k) {
    const Real s = -row_value(prog.rows[k], res.z);
    res.duals[k] = s > 0 ? Real(1) / (tau * s) : Real(0);
  }
  for (size_t a = 0; a < active.size(); ++a) {
    res.duals[active[a]] = nu_best[static_cast<long>(a)];
  }
}

}  // namespace

QuadModelSet QuadModelSet::clamped(std::vector<Matrix> Bs, double sigma_floor,
                                   double b_cap) {
  if (sigma_floor <= 0 || b_cap < sigma_floor) {
    throw std::invalid_argument("model clamps need 0 < sigma_floor <= b_cap");
  }
  QuadModelSet out;
  out.sigma_floor = sigma_floor;
  out.b_cap = b_cap;
  out.B.reserve(Bs.size());
  for (auto& B : Bs) {
    if (!B.allFinite()) throw std::runtime_error("non-finite model matrix");
    Matrix sym = 0.5 * (B + B.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    Vector ev = es.eigenvalues().cwiseMax(sigma_floor).cwiseMin(b_cap);
    Matrix clamped_B =
        es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    out.B.push_back(0.5 * (clamped_B + clamped_B.transpose()));
  }
  return out;
}

QuadModelSet QuadModelSet::identity(int m, int n, double sigma_floor,
                                    double b_cap) {
  QuadModelSet out;
  out.sigma_floor = sigma_floor;
  out.b_cap = b_cap;
  out.B.assign(static_cast<size_t>(m), Matrix::Identity(n, n));
  return out;
}

double model_value(const Vector& x, const MOProblem& problem,
                   const std::vector<Matrix>& B, const Vector& d) {
  return ModelData(x, problem, B).value(d);
}

Vector model_values(const Vector& x, const MOProblem& problem,
                    const std::vector<Matrix>& B, const Vector& d) {
  ModelData md(x, problem, B);
  Vector q(problem.m);
  for (int j = 0; j < problem.m; ++j) q[j] = md.q_j(d, j);
  return q;
}

namespace {

SubproblemSolution solve_impl(const Vector& x, const MOProblem& problem,
                              const std::vector<Matrix>& B, double Delta,
                              double tol) {
  if (Delta <= 0) throw std::invalid_argument("trust region radius must be > 0");
  if (tol <= 0) throw std::invalid_argument("tolerance must be > 0");
  if (x.size() != problem.n) throw std::invalid_argument("dimension mismatch");
  problem.validate();
  if (static_cast<int>(B.size()) != problem.m) {
    throw std::invalid_argument("model set size does not match objective count");
  }

  ModelData md(x, problem, B);
  Program prog = build_program(md, Delta);

  // strictly feasible start: d = 0, u_i = |x_i| + 1, t above every epigraph row
  BarrierState start;
  start.d = VecR::Zero(problem.n);
  start.u = VecR::Zero(prog.q);
  for (int i = 0; i < prog.q; ++i) start.u[i] = std::abs(x[i]) + 1;
  Real t0 = 0;
  for (const Row& r : prog.rows) {
    if (r.at == 0) continue;
    const Real v = r.c0 + (r.au.size() > 0 ? r.au.dot(start.u) : Real(0));
    t0 = std::max(t0, v);
  }
  start.t = t0 + 1;

  BarrierResult br = solve_barrier(prog, start, tol);

  SubproblemSolution sol;
  sol.d = to_double(br.z.d);
  sol.barrier_iterations = br.newton_steps;
  sol.t = md.value(sol.d);

  // multipliers: lambda_j aggregates epigraph-row duals per objective,
  // renormalized onto the simplex; mu = 2 * (ball-row dual) so that the
  // stationarity condition carries + mu d rather than the raw + 2 nu d.
  Vector lambda_raw = Vector::Zero(problem.m);
  for (size_t k = 0; k < prog.rows.size(); ++k) {
    const Row& r = prog.rows[k];
    if (r.objective >= 0) {
      lambda_raw[r.objective] += static_cast<double>(br.duals[k]);
    }
  }
  const double lambda_sum = lambda_raw.sum();
  sol.lambda = lambda_sum > 0 ? Vector(lambda_raw / lambda_sum) : lambda_raw;
  sol.mu = 2.0 * static_cast<double>(br.duals[static_cast<size_t>(prog.ball_row)]);

  // per-objective subgradient estimates at x + d
  const Vector y = x + sol.d;
  sol.xi.assign(static_cast<size_t>(problem.m), Vector::Zero(problem.n));
  double l1_weight_sum = 0;  // sum over l1 objectives of lambda_raw_j * nu_j / 2
  for (int j = 0; j < problem.m; ++j) {
    const auto& g = problem.objectives[static_cast<size_t>(j)].nonsmooth;
    if (g.kind == NonsmoothTerm::Kind::WeightedL1) {
      l1_weight_sum += lambda_raw[j] * 0.5 * g.nu;
    }
  }
  Vector l1_sign = Vector::Zero(problem.n);
  if (prog.q > 0) {
    if (l1_weight_sum > 1e-300) {
      // link-row duals: +row minus -row per coordinate, scaled back to [-1,1]
      for (size_t k = 0; k < prog.rows.size(); ++k) {
        const Row& r = prog.rows[k];
        if (r.type != Row::Type::Link) continue;
        for (int i = 0; i < problem.n; ++i) {
          if (r.ad[i] != 0) {
            l1_sign[i] += static_cast<double>(r.ad[i]) *
                          static_cast<double>(br.duals[k]) / l1_weight_sum;
          }
        }
      }
      l1_sign = l1_sign.cwiseMax(-1.0).cwiseMin(1.0);
    } else {
      for (int i = 0; i < problem.n; ++i) {
        l1_sign[i] = (y[i] > 0) - (y[i] < 0);
      }
    }
  }
  {
    std::vector<double> piece_weight;
    size_t row_idx = 0;
    for (int j = 0; j < problem.m; ++j) {
      const auto& g = problem.objectives[static_cast<size_t>(j)].nonsmooth;
      switch (g.kind) {
        case NonsmoothTerm::Kind::Zero:
          ++row_idx;
          break;
        case NonsmoothTerm::Kind::WeightedL1:
          sol.xi[static_cast<size_t>(j)] = 0.5 * g.nu * l1_sign;
          ++row_idx;
          break;
        case NonsmoothTerm::Kind::MaxOfQuadratics: {
          piece_weight.clear();
          double wsum = 0;
          for (size_t i = 0; i < g.pieces.size(); ++i) {
            piece_weight.push_back(static_cast<double>(br.duals[row_idx + i]));
            wsum += piece_weight.back();
          }
          Vector xi = Vector::Zero(problem.n);
          if (wsum > 1e-300) {
            for (size_t i = 0; i < g.pieces.size(); ++i) {
              xi += (piece_weight[i] / wsum) * g.pieces[i].gradient(y);
            }
          } else {
            // all piece duals vanished; fall back to the max-attaining piece
            size_t best = 0;
            double bv = g.pieces[0].value(y);
            for (size_t i = 1; i < g.pieces.size(); ++i) {
              const double v = g.pieces[i].value(y);
              if (v > bv) bv = v, best = i;
            }
            xi = g.pieces[best].gradient(y);
          }
          sol.xi[static_cast<size_t>(j)] = xi;
          row_idx += g.pieces.size();
          break;
        }
      }
    }
  }

  // KKT residual (max norm over all blocks)
  double res = 0;
  Vector stat = Vector::Zero(problem.n);
  for (int j = 0; j < problem.m; ++j) {
    stat += sol.lambda[j] * (md.grad_f[static_cast<size_t>(j)] +
                             B[static_cast<size_t>(j)] * sol.d +
                             sol.xi[static_cast<size_t>(j)]);
  }
  stat += sol.mu * sol.d;
  res = std::max(res, stat.cwiseAbs().maxCoeff());
  const double ball_gap = sol.d.squaredNorm() - Delta * Delta;
  res = std::max(res, std::max(0.0, ball_gap));           // primal ball
  res = std::max(res, std::abs(sol.mu * ball_gap));       // complementarity ball
  res = std::max(res, std::max(0.0, -sol.mu));            // dual feasibility
  res = std::max(res, std::abs(lambda_sum - 1.0));        // simplex defect
  for (int j = 0; j < problem.m; ++j) {
    res = std::max(res, std::max(0.0, -sol.lambda[j]));
    const double cj = md.q_j(sol.d, j) - sol.t;            // <= 0 by t = max_j
    res = std::max(res, std::max(0.0, cj));
    res = std::max(res, std::abs(sol.lambda[j] * cj));
  }
  sol.kkt_residual = res;
  sol.tolerance_reached = !br.budget_exhausted && res <= tol;
  return sol;
}

}  // namespace

SubproblemSolution solve_subproblem(const Vector& x, const MOProblem& problem,
                                    const QuadModelSet& models, double Delta,
                                    double tol) {
  return solve_impl(x, problem, models.B, Delta, tol);
}

SubproblemSolution theta_solution(const Vector& x, const MOProblem& problem,
                                  double Delta, double tol) {
  std::vector<Matrix> zeros(static_cast<size_t>(problem.m),
                            Matrix::Zero(problem.n, problem.n));
  return solve_impl(x, problem, zeros, Delta, tol);
}

double theta(const Vector& x, const MOProblem& problem, double Delta,
             double tol) {
  return theta_solution(x, problem, Delta, tol).t;
}

std::vector<EpigraphRowInfo> epigraph_rows(const Vector& x,
                                           const MOProblem& problem,
                                           const QuadModelSet& models,
                                           double Delta) {
  if (Delta <= 0) throw std::invalid_argument("trust region radius must be > 0");
  ModelData md(x, problem, models.B);
  Program prog = build_program(md, Delta);
  std::vector<EpigraphRowInfo> out;
  out.reserve(prog.rows.size());
  for (const Row& r : prog.rows) {
    EpigraphRowInfo info;
    switch (r.type) {
      case Row::Type::Piece:
        info.type = "piece";
        break;
      case Row::Type::L1Epi:
        info.type = "l1-epigraph";
        break;
      case Row::Type::Link:
        info.type = "l1-link";
        break;
      case Row::Type::Ball:
        info.type = "ball";
        break;
    }
    info.objective = r.objective;
    if (r.Hd.size() > 0) info.Hd = r.Hd.cast<double>();
    info.ad = to_double(r.ad);
    info.at = static_cast<double>(r.at);
    if (r.au.size() > 0) info.au = to_double(r.au);
    info.c0 = static_cast<double>(r.c0);
    out.push_back(std::move(info));
  }
  return out;
}

std::pair<Vector, double> grid_oracle(const Vector& x, const MOProblem& problem,
                                      const QuadModelSet& models, double Delta,
                                      int resolution) {
  if (problem.n > 2) throw std::invalid_argument("grid oracle supports n <= 2 only");
  if (Delta <= 0) throw std::invalid_argument("trust region radius must be > 0");
  if (resolution < 4) resolution = 4;
  ModelData md(x, problem, models.B);

  Vector best_d = Vector::Zero(problem.n);
  double best_v = md.value(best_d);  // d = 0 is always feasible, value 0

  if (problem.n == 1) {
    const int pts = 8 * resolution;
    for (int i = 0; i <= pts; ++i) {
      Vector d(1);
      d[0] = -Delta + 2.0 * Delta * i / pts;
      const double v = md.value(d);
      if (v < best_v) best_v = v, best_d = d;
    }
  } else {
    // The model is convex along every line, so the minimum over each ray
    // from the origin is an exact 1-D ternary search; scan the angle, then
    // refine the angle around the best ray.
    const auto ray_min = [&](double angle) {
      Vector u(2);
      u << std::cos(angle), std::sin(angle);
      double lo = 0, hi = Delta;
      for (int it = 0; it < 80; ++it) {
        const double m1 = lo + (hi - lo) / 3;
        const double m2 = hi - (hi - lo) / 3;
        if (md.value(m1 * u) < md.value(m2 * u)) {
          hi = m2;
        } else {
          lo = m1;
        }
        if (hi - lo < 1e-14 * Delta) break;
      }
      const double r = 0.5 * (lo + hi);
      return std::make_pair(Vector(r * u), md.value(r * u));
    };

    const int angles = 8 * resolution;
    const double step = 2.0 * M_PI / angles;
    double best_angle = 0;
    for (int ia = 0; ia < angles; ++ia) {
      auto [d, v] = ray_min(ia * step);
      if (v < best_v) best_v = v, best_d = d, best_angle = ia * step;
    }
    // angular ternary refinement within the bracketing grid cells
    double alo = best_angle - step, ahi = best_angle + step;
    for (int it = 0; it < 80; ++it) {
      const double a1 = alo + (ahi - alo) / 3;
      const double a2 = ahi - (ahi - alo) / 3;
      if (ray_min(a1).second < ray_min(a2).second) {
        ahi = a2;
      } else {
        alo = a1;
      }
      if (ahi - alo < 1e-13) break;
    }
    auto [dr, vr] = ray_min(0.5 * (alo + ahi));
    if (vr < best_v) best_v = vr, best_d = dr;
  }

  // coordinate-descent refinement: exact 1-D ternary searches (the model is
  // convex along every line), plus diagonal sweeps so kinks cannot stall the
  // axis directions
  std::vector<Vector> dirs;
  dirs.push_back(Vector::Unit(problem.n, 0));
  if (problem.n == 2) {
    dirs.push_back(Vector::Unit(2, 1));
    Vector diag(2);
    diag << M_SQRT1_2, M_SQRT1_2;
    dirs.push_back(diag);
    diag << M_SQRT1_2, -M_SQRT1_2;
    dirs.push_back(diag);
  }
  auto line_search = [&](const Vector& base, const Vector& dir) {
    // feasible segment of base + s * dir inside ||d|| <= Delta
    const double a = dir.squaredNorm();
    const double b = 2.0 * base.dot(dir);
    const double c = base.squaredNorm() - Delta * Delta;
    const double disc = b * b - 4 * a * c;
    if (disc <= 0) return std::make_pair(base, md.value(base));
    double lo = (-b - std::sqrt(disc)) / (2 * a);
    double hi = (-b + std::sqrt(disc)) / (2 * a);
    for (int it = 0; it < 200; ++it) {
      const double m1 = lo + (hi - lo) / 3;
      const double m2 = hi - (hi - lo) / 3;
      if (md.value(base + m1 * dir) < md.value(base + m2 * dir)) {
        hi = m2;
      } else {
        lo = m1;
      }
      if (hi - lo < 1e-13 * (1 + std::abs(lo) + std::abs(hi))) break;
    }
    const double s = 0.5 * (lo + hi);
    Vector nd = base + s * dir;
    return std::make_pair(nd, md.value(nd));
  };
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool improved = false;
    for (const Vector& dir : dirs) {
      auto [nd, nv] = line_search(best_d, dir);
      if (nv < best_v - 1e-15 * (1 + std::abs(best_v))) {
        best_v = nv;
        best_d = nd;
        improved = true;
      }
    }
    if (!improved) break;
  }
  return {best_d, best_v};
}

}  // namespace motrpg
