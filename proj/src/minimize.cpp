#include "abb/minimize.hpp"

#include <algorithm>
#include <cmath>

#include "abb/symdiff.hpp"

namespace abb {

namespace {

void project(std::vector<double>& x, const Box& box) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], box[i].lo(), box[i].hi());
}

}  // namespace

MinimizeResult convex_lower_bound(const Expr& g, const Box& box, const MinimizeOptions& opt) {
  const std::size_t n = box.dim();
  const std::vector<Expr> grad = gradient(g, n);
  auto gradient_at = [&](const std::vector<double>& x) {
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = eval_point(grad[i], x);
    return d;
  };

  MinimizeResult r;
  std::vector<double> x = box.midpoint();
  double fx = eval_point(g, x);
  std::vector<double> dx = gradient_at(x);
  std::vector<double> trial(n);

  for (; r.iterations < opt.max_iterations; ++r.iterations) {
    double pg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double step = std::clamp(x[i] - dx[i], box[i].lo(), box[i].hi()) - x[i];
      pg += step * step;
    }
    if (std::sqrt(pg) <= opt.tolerance * (1.0 + std::fabs(fx))) {
      r.converged = true;
      break;
    }
    double t = opt.initial_step;
    bool accepted = false;
    double ft = fx;
    while (t > 1e-30) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - t * dx[i];
      project(trial, box);
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) decrease += dx[i] * (trial[i] - x[i]);
      ft = eval_point(g, trial);
      if (ft <= fx + opt.armijo * decrease) {
        accepted = true;
        break;
      }
      t *= opt.shrink;
    }
    if (!accepted || trial == x) {
      // No representable descent step is left; x is stationary to working precision.
      r.converged = std::sqrt(pg) <= 1e-6 * (1.0 + std::fabs(fx));
      break;
    }
    x = trial;
    fx = ft;
    dx = gradient_at(x);
  }
  r.value = fx;
  r.minimizer = std::move(x);
  return r;
}

}  // namespace abb
