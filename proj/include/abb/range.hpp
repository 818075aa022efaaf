#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "abb/expr.hpp"
#include "abb/interval.hpp"

namespace abb {

enum class RangeForm { Natural, MeanValue, Slope, Monotone, Best };

// "natural", "mvf", "slope", "mono", "best".
std::string_view to_string(RangeForm form);
std::optional<RangeForm> parse_range_form(std::string_view name);

// Recursive interval evaluation. Domain violations (division by an interval
// containing zero, log or sqrt outside the domain, overflow) raise EvalError
// with the path of the failing node.
Interval natural_eval(const Expr& e, const Box& box);

// Enclosure data f(c) + slope^T (x - c) for x in the box.
struct SlopePair {
  Interval value_at_center;
  std::vector<Interval> slope;
};

SlopePair slope_pair(const Expr& e, const Box& box, std::span<const double> center);

// The three derived forms are intersected with natural_eval before returning.
// An empty center means the box midpoint.
Interval mean_value_form(const Expr& e, const Box& box, std::span<const double> center = {});
// slope_form is additionally intersected with mean_value_form when e has no abs.
Interval slope_form(const Expr& e, const Box& box, std::span<const double> center = {});
// One pass: each variable with a sign-stable partial derivative is pinned at
// the endpoint that minimizes (for the lower bound) or maximizes (for the
// upper bound) e.
Interval monotonic_refine(const Expr& e, const Box& box);

// Intersection of the selected forms. Best stands for all four. Forms that
// cannot handle the expression (derivative-based forms on abs) are skipped
// as long as at least one selected form succeeds. Throws InconsistentEnclosure
// when the intersection is empty.
Interval best_enclosure(const Expr& e, const Box& box, std::span<const RangeForm> forms);

Interval enclose(const Expr& e, const Box& box, RangeForm form);

}  // namespace abb
