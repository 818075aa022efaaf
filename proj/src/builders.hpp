#pragma once

// Node constructors with local constant folding and identity removal.
// Used by differentiation (to keep derivatives free of 0*x and x^1 noise)
// and by the constant-folding pass.

#include <vector>

#include "abb/expr.hpp"

namespace abb::build {

Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr neg(const Expr& a);
Expr sub(const Expr& a, const Expr& b);
Expr div(const Expr& a, const Expr& b);
Expr pow(const Expr& base, int k);
Expr func(Function fn, const Expr& a);

inline bool is_zero(const Expr& e) { return e.is_constant(0.0); }
inline bool is_one(const Expr& e) { return e.is_constant(1.0); }

}  // namespace abb::build
