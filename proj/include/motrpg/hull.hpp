#ifndef MOTRPG_HULL_HPP
#define MOTRPG_HULL_HPP

#include <vector>

#include "motrpg/types.hpp"

namespace motrpg {

struct MinNormPoint {
  Vector point;     // nearest point of the hull to the origin
  Vector weights;   // convex coefficients over the input generators
  double distance = 0.0;
};

/// Minimum-norm point in the convex hull of a finite generator set, by
/// Wolfe's corral algorithm. Exact up to the stated tolerance; terminates
/// finitely on affinely independent corrals and falls back to the best
/// iterate on numerically degenerate input.
MinNormPoint min_norm_point(const std::vector<Vector>& generators,
                            double tol = 1e-12);

}  // namespace motrpg

#endif  // MOTRPG_HULL_HPP
