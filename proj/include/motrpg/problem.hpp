#ifndef MOTRPG_PROBLEM_HPP
#define MOTRPG_PROBLEM_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "motrpg/types.hpp"

namespace motrpg {

/// Smooth convex part f_j of a composite objective. Either an analytic closed
/// form (value + optional gradient callbacks, identified by a family name for
/// serialization) or a least-squares term 1/2 ||A x - b||^2.
struct SmoothTerm {
  enum class Kind { AnalyticClosedForm, QuadraticLeastSquares };
  enum class GradientMode { Analytic, ForwardDifference };

  Kind kind = Kind::AnalyticClosedForm;

  // AnalyticClosedForm
  std::string family;  // registry id; empty for ad-hoc terms built in tests
  std::function<double(const Vector&)> value_fn;
  std::function<Vector(const Vector&)> gradient_fn;

  // QuadraticLeastSquares: f(x) = 1/2 ||A x - b||^2
  Matrix A;
  Vector b;

  GradientMode gradient_mode = GradientMode::Analytic;
  // Fixed forward-difference step; 0 selects the per-coordinate default
  // h_i = sqrt(eps) * (1 + |x_i|).
  double fd_step = 0.0;

  double value(const Vector& x) const;
  /// Analytic gradient (closed form or A^T(Ax-b)). Throws if the term has no
  /// analytic gradient.
  Vector analytic_gradient(const Vector& x) const;
  bool has_analytic_gradient() const;

  static SmoothTerm least_squares(Matrix A, Vector b);
  static SmoothTerm analytic(std::string family,
                             std::function<double(const Vector&)> value,
                             std::function<Vector(const Vector&)> gradient);
};

/// One convex quadratic piece of a max-of-quadratics term:
/// value(y) = 1/2 y'P y + q'y + r with P positive semidefinite.
struct QuadPiece {
  Matrix P;
  Vector q;
  double r = 0.0;

  double value(const Vector& y) const { return 0.5 * y.dot(P * y) + q.dot(y) + r; }
  Vector gradient(const Vector& y) const { return P * y + q; }
};

/// Nonsmooth convex part g_j: zero, a weighted l1 norm (nu/2)*||y||_1, or a
/// pointwise maximum of convex quadratic pieces.
struct NonsmoothTerm {
  enum class Kind { Zero, WeightedL1, MaxOfQuadratics };

  Kind kind = Kind::Zero;
  double nu = 0.0;                 // WeightedL1 weight, >= 0
  std::vector<QuadPiece> pieces;   // MaxOfQuadratics, nonempty

  double value(const Vector& y) const;

  static NonsmoothTerm zero();
  static NonsmoothTerm weighted_l1(double nu);
  static NonsmoothTerm max_of_quadratics(std::vector<QuadPiece> pieces);
};

struct Objective {
  SmoothTerm smooth;
  NonsmoothTerm nonsmooth;
};

/// An m-objective composite problem F_j = f_j + g_j on R^n.
struct MOProblem {
  std::string name;
  int m = 0;
  int n = 0;
  std::vector<Objective> objectives;
  std::optional<Box> box;  // start-sampling box, when the problem ships one

  void validate() const;  // throws std::invalid_argument on bad data
};

/// Subgradient information of g_j at a point: the active pieces (within an
/// activity tolerance) and one generator per piece. For weighted-l1 terms the
/// generators are the vertices of the subdifferential box, and active_pieces
/// lists the coordinates whose sign is ambiguous (|y_i| <= tau_act). For the
/// zero term there is a single zero generator.
struct ActiveSubgradient {
  int objective_index = 0;
  std::vector<int> active_pieces;
  std::vector<Vector> generators;
};

/// Default activity tolerance: 1e-8 * (1 + |g_j(x)|).
double default_activity_tol(double g_value);

/// Gradient of a smooth term (analytic when available, else forward
/// difference) without touching any evaluation counters. Model construction
/// and diagnostics use this; counted evaluation goes through Evaluator.
Vector smooth_gradient_raw(const SmoothTerm& term, const Vector& x);

/// Active subgradient generators of g_j at x. Pure analysis; does not touch
/// evaluation counters. tau_act must be > 0 when given; defaults to
/// default_activity_tol(g_j(x)).
ActiveSubgradient active_subgradients(const MOProblem& problem, const Vector& x,
                                      int j, std::optional<double> tau_act = {});

/// Counted evaluation access to one problem. Each solver run owns one
/// Evaluator; the problem itself stays immutable and shareable.
///
/// Counting contract:
///   objectives()/components(): f_evals += m, g_evals += m
///   nonsmooth_value():         g_evals += 1
///   smooth_gradient():         grad_evals += 1, plus in forward-difference
///                              mode f_evals += n (+1 when f_j(x) is not in
///                              the one-point cache)
class Evaluator {
 public:
  explicit Evaluator(const MOProblem& problem);
  explicit Evaluator(MOProblem&&) = delete;  // the problem must outlive this

  /// F(x) = (F_1(x), ..., F_m(x)).
  Vector objectives(const Vector& x);

  /// Smooth and nonsmooth parts separately; counts exactly like objectives().
  std::pair<Vector, Vector> components(const Vector& x);

  /// grad f_j(x), j in [0, m).
  Vector smooth_gradient(const Vector& x, int j);

  /// g_j(x).
  double nonsmooth_value(const Vector& x, int j);

  const EvalCounters& counters() const { return counters_; }
  const MOProblem& problem() const { return *problem_; }

 private:
  double smooth_value_counted(const Vector& x, int j);

  const MOProblem* problem_;
  EvalCounters counters_;
  struct CacheSlot {
    Vector x;
    double f = 0.0;
    bool valid = false;
  };
  std::vector<CacheSlot> cache_;  // last smooth value per objective
};

}  // namespace motrpg

#endif  // MOTRPG_PROBLEM_HPP
