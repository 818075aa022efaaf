#include "abb/problem.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "abb/errors.hpp"
#include "abb/parse.hpp"

namespace abb {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool starts_with_word(std::string_view s, std::string_view word) {
  return s.size() > word.size() && s.substr(0, word.size()) == word &&
         (s[word.size()] == ' ' || s[word.size()] == '\t');
}

double parse_real(std::string_view s, std::size_t line) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ProblemError("malformed number '" + std::string(s) + "'", line);
  }
  if (!std::isfinite(v)) throw ProblemError("bound must be finite", line);
  return v;
}

// "[a, b, ...]" -> numbers
std::vector<double> parse_list(std::string_view s, std::size_t line) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw ProblemError("expected a bracketed list", line);
  s = s.substr(1, s.size() - 2);
  std::vector<double> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_real(s.substr(0, comma), line));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

bool valid_name(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

}  // namespace

Problem parse_problem(std::string_view text, std::string name) {
  Problem p;
  p.name = std::move(name);
  std::vector<Interval> bounds;
  std::size_t objective_line = 0;
  std::size_t d_line = 0;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;

    if (starts_with_word(s, "var")) {
      if (objective_line) throw ProblemError("variables must be declared before the objective", line);
      std::string_view rest = trim(s.substr(3));
      const auto in_pos = rest.find(" in ");
      if (in_pos == std::string_view::npos) throw ProblemError("expected 'var <name> in [lo, hi]'", line);
      const std::string var(trim(rest.substr(0, in_pos)));
      if (!valid_name(var)) throw ProblemError("invalid variable name '" + var + "'", line);
      for (const auto& existing : p.variables) {
        if (existing == var) throw ProblemError("variable '" + var + "' declared twice", line);
      }
      const auto b = parse_list(rest.substr(in_pos + 4), line);
      if (b.size() != 2) throw ProblemError("a domain needs exactly two bounds", line);
      if (b[0] > b[1]) throw ProblemError("lower bound exceeds upper bound for '" + var + "'", line);
      p.variables.push_back(var);
      bounds.emplace_back(b[0], b[1]);
    } else if (starts_with_word(s, "objective")) {
      if (objective_line) throw ProblemError("objective given twice", line);
      if (p.variables.empty()) throw ProblemError("no variables declared before the objective", line);
      p.objective_text = std::string(trim(s.substr(9)));
      try {
        p.objective = parse(p.objective_text, p.variables);
      } catch (const ParseError& err) {
        throw ProblemError(err.what(), line);
      }
      objective_line = line;
    } else if (const auto eq = s.find('='); eq != std::string_view::npos) {
      const std::string_view key = trim(s.substr(0, eq));
      const std::string_view value = trim(s.substr(eq + 1));
      auto bad = [&] {
        return ProblemError("invalid value '" + std::string(value) + "' for " + std::string(key), line);
      };
      if (key == "d") {
        p.d = parse_list(value, line);
        d_line = line;
      } else if (key == "route") {
        if (!(p.route = parse_route(value))) throw bad();
      } else if (key == "abs") {
        if (!(p.abs = parse_abs_mode(value))) throw bad();
      } else if (key == "form") {
        if (!(p.form = parse_range_form(value))) throw bad();
      } else if (key == "simplify") {
        if (!(p.simplify = parse_simplify(value))) throw bad();
      } else {
        throw ProblemError("unknown setting '" + std::string(key) + "'", line);
      }
    } else {
      throw ProblemError("unrecognized line '" + std::string(s) + "'", line);
    }
  }
  if (p.variables.empty()) throw ProblemError("no variables declared", 0);
  if (!objective_line) throw ProblemError("no objective", 0);
  if (p.d) {
    if (p.d->size() != p.variables.size()) {
      throw ProblemError("d has " + std::to_string(p.d->size()) + " entries for " +
                             std::to_string(p.variables.size()) + " variables",
                         d_line);
    }
    for (double v : *p.d) {
      if (v <= 0.0) throw ProblemError("d entries must be positive", d_line);
    }
  }
  p.box = Box(bounds);
  return p;
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError("cannot open " + path.string(), 0);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str(), path.stem().string());
}

AnalysisOptions default_options(const Problem& p) {
  AnalysisOptions o;
  if (p.route) o.route = *p.route;
  if (p.abs) o.abs = *p.abs;
  if (p.form) o.form = *p.form;
  if (p.simplify) o.simplify = *p.simplify;
  o.d = p.d;
  return o;
}

}  // namespace abb
