#pragma once

#include <cstddef>
#include <vector>

#include "abb/expr.hpp"
#include "abb/interval.hpp"

namespace abb {

struct MinimizeResult {
  double value = 0.0;
  std::vector<double> minimizer;
  std::size_t iterations = 0;
  bool converged = false;
};

struct MinimizeOptions {
  double armijo = 1e-4;
  double shrink = 0.5;
  double initial_step = 1.0;
  double tolerance = 1e-9;
  std::size_t max_iterations = 100000;
};

// Projected gradient descent with Armijo backtracking from the box midpoint.
// Stops when the projected gradient norm is at most tolerance * (1 + |g|).
// Intended for convex g; on non-convex input it returns a local minimum.
MinimizeResult convex_lower_bound(const Expr& g, const Box& box, const MinimizeOptions& opt = {});

}  // namespace abb
