#ifndef MOTRPG_TYPES_HPP
#define MOTRPG_TYPES_HPP

#include <Eigen/Dense>
#include <cstdint>

namespace motrpg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Evaluation counters for one solver run. Monotonically nondecreasing,
/// never reset mid-run.
struct EvalCounters {
  std::int64_t f_evals = 0;
  std::int64_t grad_evals = 0;
  std::int64_t g_evals = 0;
};

/// Axis-aligned box, used for sampling start points.
struct Box {
  Vector lb;
  Vector ub;

  bool valid() const {
    if (lb.size() != ub.size() || lb.size() == 0) return false;
    return (lb.array() < ub.array()).all();
  }
};

}  // namespace motrpg

#endif  // MOTRPG_TYPES_HPP
