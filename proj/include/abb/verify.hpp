#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "abb/expr.hpp"
#include "abb/interval.hpp"

namespace abb {

// `count` Halton points mapped into the box, starting at sequence index
// 1 + seed. Zero-width components stay at their value.
std::vector<std::vector<double>> halton_points(const Box& box, std::size_t count, std::uint64_t seed = 0);

// Smallest eigenvalue of a symmetric n x n row-major matrix (cyclic Jacobi).
double min_eigenvalue(std::vector<double> a, std::size_t n, double tol = 1e-12);

// f(x) >= g(x) - 1e-9 at every sample.
bool verify_underestimation(const Expr& f, const Expr& g, const Box& box, std::size_t samples,
                            std::uint64_t seed = 0);

// The point Hessian of g has smallest eigenvalue >= -1e-7 at every sample.
// Zero-width variables are left out of the Hessian.
bool verify_convexity_sampled(const Expr& g, const Box& box, std::size_t samples, std::uint64_t seed = 0);

}  // namespace abb
