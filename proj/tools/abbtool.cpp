// abb: convex underestimators for problem files.
//
//   abb analyze PROBLEM [--route R] [--abs A] [--form F] [--simplify S] [--d width|custom|v1,v2,...]
//                       [--rigorous] [--seed N] [--samples N]
//   abb compare PROBLEM [--route R,...] [--abs A,...] [--form F,...] [--simplify S,...] [--json] [--jobs N]
//   abb plot PROBLEM --out FILE [--grid N] [analysis flags]
//
// Exit status: 0 success, 1 input error, 2 sampled verification failed.

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "abb/alphabb.hpp"
#include "abb/problem.hpp"
#include "abb/report.hpp"

namespace {

constexpr int kInputError = 1;
constexpr int kVerifyFailed = 2;

struct AnalysisFlags {
  std::string route;
  std::string abs;
  std::string form;
  std::string simplify;
  std::string d;
  bool rigorous = false;
  std::uint64_t seed = 0;
  std::size_t samples = 10000;
  std::size_t convexity_samples = 1000;
};

template <class T>
std::map<std::string, T> choices(std::initializer_list<T> values) {
  std::map<std::string, T> m;
  for (T v : values) m.emplace(std::string(abb::to_string(v)), v);
  return m;
}

const auto kRoutes = choices({abb::HessianRoute::IntervalDirect, abb::HessianRoute::SymbolicSimplified});
const auto kAbs = choices({abb::AbsMode::MagConstant, abb::AbsMode::SignDrop, abb::AbsMode::ShiftSurrogate,
                           abb::AbsMode::LinearSurrogate});
const auto kForms = choices({abb::RangeForm::Natural, abb::RangeForm::MeanValue, abb::RangeForm::Slope,
                             abb::RangeForm::Monotone, abb::RangeForm::Best});
const auto kLevels = choices({abb::SimplifyLevel::None, abb::SimplifyLevel::Entries, abb::SimplifyLevel::Full});

template <class T>
CLI::IsMember member_of(const std::map<std::string, T>& m) {
  std::vector<std::string> keys;
  for (const auto& [k, v] : m) keys.push_back(k);
  return CLI::IsMember(keys);
}

void add_sampling_flags(CLI::App* cmd, AnalysisFlags& f) {
  cmd->add_flag("--rigorous", f.rigorous, "Outward rounding plus a certified bound from interval evaluation of g");
  cmd->add_option("--seed", f.seed, "Offset into the low-discrepancy sequence used for verification");
  cmd->add_option("--samples", f.samples, "Points for the underestimation check")->check(CLI::PositiveNumber);
  cmd->add_option("--convexity-samples", f.convexity_samples, "Points for the convexity check")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--d", f.d, "Scaling vector: width, custom (from the problem file) or a list v1,v2,...");
}

void add_single_mode_flags(CLI::App* cmd, AnalysisFlags& f) {
  cmd->add_option("--route", f.route, "Hessian route")->check(member_of(kRoutes));
  cmd->add_option("--abs", f.abs, "Handling of |h_ij|")->check(member_of(kAbs));
  cmd->add_option("--form", f.form, "Range enclosure form")->check(member_of(kForms));
  cmd->add_option("--simplify", f.simplify, "What to simplify: none, entries or full")->check(member_of(kLevels));
}

std::vector<double> parse_d_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("malformed --d value '" + item + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

abb::AnalysisOptions options_for(const abb::Problem& p, const AnalysisFlags& f) {
  abb::AnalysisOptions o = abb::default_options(p);
  if (!f.route.empty()) o.route = kRoutes.at(f.route);
  if (!f.abs.empty()) o.abs = kAbs.at(f.abs);
  if (!f.form.empty()) o.form = kForms.at(f.form);
  if (!f.simplify.empty()) o.simplify = kLevels.at(f.simplify);
  if (f.d == "width") {
    o.d.reset();
  } else if (f.d == "custom") {
    if (!p.d) throw std::invalid_argument("--d custom needs a 'd = [...]' line in the problem file");
  } else if (!f.d.empty()) {
    o.d = parse_d_list(f.d);
  }
  o.rigorous = f.rigorous;
  o.seed = f.seed;
  o.underestimation_samples = f.samples;
  o.convexity_samples = f.convexity_samples;
  return o;
}

int verified_status(const abb::UnderestimatorReport& r) {
  return r.verified.underestimation && r.verified.convexity ? 0 : kVerifyFailed;
}

template <class T>
std::vector<T> pick(const std::vector<std::string>& names, const std::map<std::string, T>& all) {
  std::vector<T> out;
  if (names.empty()) {
    for (const auto& [k, v] : all) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
  }
  for (const auto& n : names) out.push_back(all.at(n));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex underestimators by interval and symbolic Hessians"};
  app.require_subcommand(1);

  std::string problem_path;
  AnalysisFlags flags;

  auto* analyze = app.add_subcommand("analyze", "Analyze one configuration and print a JSON report");
  analyze->add_option("problem", problem_path, "Problem file")->required()->check(CLI::ExistingFile);
  add_single_mode_flags(analyze, flags);
  add_sampling_flags(analyze, flags);

  std::vector<std::string> routes, abs_modes, forms, levels;
  bool as_json = false;
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* compare = app.add_subcommand("compare", "Run a matrix of configurations");
  compare->add_option("problem", problem_path, "Problem file")->required()->check(CLI::ExistingFile);
  compare->add_option("--route", routes, "Routes to include")->delimiter(',')->check(member_of(kRoutes));
  compare->add_option("--abs", abs_modes, "Abs modes to include")->delimiter(',')->check(member_of(kAbs));
  compare->add_option("--form", forms, "Range forms to include")->delimiter(',')->check(member_of(kForms));
  compare->add_option("--simplify", levels, "Simplify levels to include")->delimiter(',')->check(member_of(kLevels));
  compare->add_flag("--json", as_json, "Print JSON instead of a table");
  compare->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  add_sampling_flags(compare, flags);

  std::string out_path;
  std::size_t grid = 101;
  auto* plot = app.add_subcommand("plot", "Write f and g on a grid as CSV");
  plot->add_option("problem", problem_path, "Problem file")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", out_path, "Output CSV path")->required();
  plot->add_option("--grid", grid, "Points per axis")->check(CLI::Range(2, 100000));
  add_single_mode_flags(plot, flags);
  add_sampling_flags(plot, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  abb::Problem problem;
  abb::AnalysisOptions opt;
  try {
    problem = abb::load_problem(problem_path);
    opt = options_for(problem, flags);
  } catch (const std::exception& err) {
    std::cerr << "abb: " << err.what() << '\n';
    return kInputError;
  }

  try {
    if (analyze->parsed()) {
      const auto report = abb::analyze(problem.objective, problem.box, opt);
      std::cout << abb::report_to_json(report, problem).dump(2) << '\n';
      for (const auto& w : report.warnings) std::cerr << "abb: warning: " << w << '\n';
      return verified_status(report);
    }
    if (compare->parsed()) {
      const auto configs = abb::compare_matrix(pick(routes, kRoutes), pick(abs_modes, kAbs), pick(forms, kForms),
                                               pick(levels, kLevels));
      const auto rows = abb::run_compare(problem, configs, opt, jobs);
      if (as_json) {
        std::cout << abb::compare_to_json(rows, problem).dump(2) << '\n';
      } else {
        std::cout << abb::format_compare_table(rows);
      }
      return 0;
    }
    if (plot->parsed()) {
      if (problem.box.dim() > 2) {
        std::cerr << "abb: plot supports problems with one or two variables\n";
        return kInputError;
      }
      const auto report = abb::analyze(problem.objective, problem.box, opt);
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "abb: cannot write " << out_path << '\n';
        return kInputError;
      }
      abb::write_plot_csv(out, problem, report.underestimator, grid);
      return verified_status(report);
    }
  } catch (const std::exception& err) {
    std::cerr << "abb: " << err.what() << '\n';
    return kInputError;
  }
  return 0;
}
