#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abb/alphabb.hpp"
#include "abb/expr.hpp"
#include "abb/interval.hpp"
#include "abb/range.hpp"

namespace abb {

// A problem file, one directive per line, `#` to end of line is a comment:
//
//   var x1 in [-1, 2]
//   var x2 in [-1, 1]
//   objective cos(x1)*sin(x2) - x1/(x2^2+1)
//   d = [3, 2]            (optional scaling vector)
//   route = symbolic      (optional defaults for the analysis)
//   abs = sign-drop
//   form = best
//   simplify = full
struct Problem {
  std::string name;
  std::vector<std::string> variables;
  Box box;
  std::string objective_text;
  Expr objective;
  std::optional<std::vector<double>> d;
  std::optional<HessianRoute> route;
  std::optional<AbsMode> abs;
  std::optional<RangeForm> form;
  std::optional<SimplifyLevel> simplify;
};

// Throws ProblemError with the 1-based line number of the offending line.
Problem parse_problem(std::string_view text, std::string name = "problem");
Problem load_problem(const std::filesystem::path& path);

// Analysis options seeded from the problem's settings.
AnalysisOptions default_options(const Problem& p);

}  // namespace abb
