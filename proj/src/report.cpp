#include "abb/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "abb/parse.hpp"

namespace abb {

namespace {

using ojson = nlohmann::ordered_json;

ojson interval_json(const Interval& a) { return ojson::array({a.lo(), a.hi()}); }

ojson mode_json(HessianRoute route, AbsMode abs, RangeForm form, SimplifyLevel simplify) {
  ojson m;
  m["route"] = to_string(route);
  m["abs"] = to_string(abs);
  m["form"] = to_string(form);
  m["simplify"] = to_string(simplify);
  return m;
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s = buf;
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ojson report_to_json(const UnderestimatorReport& r, const Problem& p) {
  ojson j;
  j["problem"] = p.name;
  j["variables"] = p.variables;
  j["objective"] = p.objective_text;
  j["alpha"] = r.alpha;
  j["lower_bound"] = r.lower_bound;
  if (r.certified_bound) j["certified_lower_bound"] = *r.certified_bound;
  j["minimizer"] = r.minimizer;
  j["converged"] = r.converged;
  ojson h = ojson::array();
  for (std::size_t i = 0; i < r.hessian_enclosure.size(); ++i) {
    ojson row = ojson::array();
    for (std::size_t k = 0; k < r.hessian_enclosure.size(); ++k) row.push_back(interval_json(r.hessian_enclosure(i, k)));
    h.push_back(row);
  }
  j["hessian"] = h;
  ojson hi = ojson::array();
  for (const auto& e : r.hi_enclosures) hi.push_back(interval_json(e));
  j["hi"] = hi;
  if (!r.hi.empty()) {
    ojson texts = ojson::array();
    for (const auto& e : r.hi) texts.push_back(format(e, p.variables));
    j["hi_expressions"] = texts;
  }
  j["underestimator"] = format(r.underestimator, p.variables);
  ojson mode = mode_json(r.route, r.abs, r.form, r.simplify);
  mode["rigorous"] = r.rigorous;
  j["mode"] = mode;
  j["d"] = r.d_used;
  j["verified"] = {{"underestimation", r.verified.underestimation}, {"convexity", r.verified.convexity}};
  j["warnings"] = r.warnings;
  return j;
}

std::vector<CompareConfig> compare_matrix(const std::vector<HessianRoute>& routes,
                                          const std::vector<AbsMode>& abs_modes,
                                          const std::vector<RangeForm>& forms,
                                          const std::vector<SimplifyLevel>& levels) {
  std::vector<CompareConfig> out;
  for (HessianRoute route : routes) {
    if (route == HessianRoute::IntervalDirect) {
      out.push_back({route, AbsMode::MagConstant, RangeForm::Natural, SimplifyLevel::None});
      continue;
    }
    for (AbsMode abs : abs_modes) {
      for (RangeForm form : forms) {
        for (SimplifyLevel level : levels) out.push_back({route, abs, form, level});
      }
    }
  }
  return out;
}

std::vector<CompareRow> run_compare(const Problem& p, const std::vector<CompareConfig>& configs,
                                    const AnalysisOptions& base, std::size_t threads) {
  std::vector<CompareRow> rows(configs.size());
  auto run_one = [&](std::size_t k) {
    rows[k].config = configs[k];
    AnalysisOptions o = base;
    o.route = configs[k].route;
    o.abs = configs[k].abs;
    o.form = configs[k].form;
    o.simplify = configs[k].simplify;
    try {
      rows[k].report = analyze(p.objective, p.box, o);
    } catch (const std::exception& err) {
      rows[k].error = err.what();
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, configs.size()));
  if (threads == 1) {
    for (std::size_t k = 0; k < configs.size(); ++k) run_one(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    for (std::size_t t = 0; t < threads; ++t) {
      workers.push_back(std::async(std::launch::async, [&] {
        for (std::size_t k = next++; k < configs.size(); k = next++) run_one(k);
      }));
    }
    for (auto& w : workers) w.get();
  }
  std::stable_sort(rows.begin(), rows.end(), [](const CompareRow& a, const CompareRow& b) {
    if (a.report.has_value() != b.report.has_value()) return a.report.has_value();
    if (!a.report) return false;
    return a.report->lower_bound > b.report->lower_bound;
  });
  return rows;
}

std::string format_compare_table(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-9s %-10s %-8s %-9s %14s  %-8s %-7s %s\n", "route", "abs", "form", "simplify",
                "lower_bound", "underest", "convex", "alpha");
  out << line;
  for (const auto& r : rows) {
    const bool direct = r.config.route == HessianRoute::IntervalDirect;
    const std::string abs = direct ? "-" : std::string(to_string(r.config.abs));
    const std::string form = direct ? "-" : std::string(to_string(r.config.form));
    const std::string simp = direct ? "-" : std::string(to_string(r.config.simplify));
    if (!r.report) {
      std::snprintf(line, sizeof line, "%-9s %-10s %-8s %-9s %14s  error: ", std::string(to_string(r.config.route)).c_str(),
                    abs.c_str(), form.c_str(), simp.c_str(), "-");
      out << line << r.error << '\n';
      continue;
    }
    std::string alpha = "[";
    for (std::size_t i = 0; i < r.report->alpha.size(); ++i) {
      if (i) alpha += ", ";
      alpha += fixed4(r.report->alpha[i]);
    }
    alpha += "]";
    std::snprintf(line, sizeof line, "%-9s %-10s %-8s %-9s %14s  %-8s %-7s ", std::string(to_string(r.config.route)).c_str(),
                  abs.c_str(), form.c_str(), simp.c_str(), fixed4(r.report->lower_bound).c_str(),
                  r.report->verified.underestimation ? "yes" : "NO", r.report->verified.convexity ? "yes" : "NO");
    out << line << alpha << '\n';
  }
  return out.str();
}

ojson compare_to_json(const std::vector<CompareRow>& rows, const Problem& p) {
  ojson j;
  j["problem"] = p.name;
  ojson arr = ojson::array();
  for (const auto& r : rows) {
    ojson row = mode_json(r.config.route, r.config.abs, r.config.form, r.config.simplify);
    if (r.report) {
      row["alpha"] = r.report->alpha;
      row["lower_bound"] = r.report->lower_bound;
      row["verified"] = {{"underestimation", r.report->verified.underestimation},
                         {"convexity", r.report->verified.convexity}};
      row["warnings"] = r.report->warnings;
    } else {
      row["error"] = r.error;
    }
    arr.push_back(row);
  }
  j["rows"] = arr;
  return j;
}

void write_plot_csv(std::ostream& out, const Problem& p, const Expr& g, std::size_t n) {
  const std::size_t dim = p.box.dim();
  if (dim < 1 || dim > 2) throw std::invalid_argument("plot supports problems with one or two variables");
  if (n < 2) throw std::invalid_argument("plot grid needs at least 2 points per axis");
  auto coord = [&](std::size_t axis, std::size_t k) {
    const Interval& iv = p.box[axis];
    if (k + 1 == n) return iv.hi();
    return iv.lo() + iv.width() * static_cast<double>(k) / static_cast<double>(n - 1);
  };
  for (const auto& v : p.variables) out << v << ',';
  out << "f,g\n";
  std::vector<double> x(dim);
  auto emit = [&] {
    for (double xi : x) out << full_precision(xi) << ',';
    out << full_precision(eval_point(p.objective, x)) << ',' << full_precision(eval_point(g, x)) << '\n';
  };
  for (std::size_t a = 0; a < n; ++a) {
    x[0] = coord(0, a);
    if (dim == 1) {
      emit();
      continue;
    }
    for (std::size_t b = 0; b < n; ++b) {
      x[1] = coord(1, b);
      emit();
    }
  }
}

}  // namespace abb
