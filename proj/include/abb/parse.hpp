#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "abb/expr.hpp"

namespace abb {

// Parses infix text into an Expr.
//
// Precedence, loosest first: binary + and - (left-assoc), * and /
// (left-assoc), unary -, ^ (right-assoc; exponent must fold to an integer
// constant). Function calls are `name(expr)` for sin, cos, exp, log, sqrt,
// abs. Identifiers must be one of `var_names` (mapped to their position) or
// a function name. Juxtaposition is a syntax error.
//
// `x^k` with k < 0 becomes 1/x^(-k).
//
// Throws ParseError carrying the 0-based character position.
Expr parse(std::string_view text, const std::vector<std::string>& var_names);

// Parseable text. Variables print as `var_names[i]`, or `x<i+1>` when no
// name is supplied. Constants use the shortest decimal that round-trips.
std::string format(const Expr& e, const std::vector<std::string>& var_names = {});

std::string format_number(double v);

}  // namespace abb
