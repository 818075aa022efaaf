#pragma once

#include "abb/expr.hpp"
#include "abb/interval.hpp"

namespace abb {

// Interval Hessian by forward-mode second-order automatic differentiation:
// every node carries (value, gradient, Hessian) enclosures combined by the
// product, quotient and chain rules, with no symbolic rewriting. Squares use
// the tight square rule; higher integer powers are taken as repeated
// products, as an operator-overloading AD tool would.
//
// Throws UnsupportedNode on abs and EvalError on domain violations.
IntervalMatrix interval_hessian_ad(const Expr& f, const Box& box);

}  // namespace abb
