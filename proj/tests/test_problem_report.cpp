#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "abb/errors.hpp"
#include "abb/parse.hpp"
#include "abb/report.hpp"
#include "test_support.hpp"

using abb::AbsMode;
using abb::HessianRoute;
using abb::RangeForm;
using abb::SimplifyLevel;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    abb::parse_problem(text);
  } catch (const abb::ProblemError& e) {
    return e.line() == 0 ? 1000 : e.line();
  }
  return 0;
}

std::string error_text(const std::string& text) {
  try {
    abb::parse_problem(text);
  } catch (const abb::ProblemError& e) {
    return e.what();
  }
  return "";
}

std::vector<std::vector<double>> read_csv(const std::string& text, std::string* header) {
  std::istringstream in(text);
  std::getline(in, *header);
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<double> row;
    std::istringstream cells(line);
    for (std::string cell; std::getline(cells, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::vector<abb::CompareConfig> full_matrix() {
  return abb::compare_matrix({HessianRoute::IntervalDirect, HessianRoute::SymbolicSimplified},
                             {AbsMode::MagConstant, AbsMode::SignDrop, AbsMode::ShiftSurrogate, AbsMode::LinearSurrogate},
                             {RangeForm::Natural, RangeForm::MeanValue, RangeForm::Slope, RangeForm::Monotone,
                              RangeForm::Best},
                             {SimplifyLevel::None, SimplifyLevel::Entries, SimplifyLevel::Full});
}

bool has_bound(const std::vector<abb::CompareRow>& rows, double value, double tol) {
  for (const auto& r : rows) {
    if (r.report && std::fabs(r.report->lower_bound - value) <= tol) return true;
  }
  return false;
}

}  // namespace

TEST(ProblemFile, LoadsTrig) {
  const auto p = abb::parse_problem(
      "var x1 in [-1,2]\nvar x2 in [-1,1]\nobjective cos(x1)*sin(x2) - x1/(x2^2+1)\n", "e2");
  EXPECT_EQ(p.name, "e2");
  EXPECT_EQ(p.variables, (std::vector<std::string>{"x1", "x2"}));
  EXPECT_EQ(p.box[0], abb::Interval(-1, 2));
  EXPECT_EQ(p.box[1], abb::Interval(-1, 1));
  EXPECT_TRUE(abb::structurally_equal(p.objective, abb::parse("cos(x1)*sin(x2) - x1/(x2^2+1)", p.variables)));
  EXPECT_FALSE(p.d.has_value());
}

TEST(ProblemFile, CommentsSettingsAndNames) {
  const auto p = abb::parse_problem(
      "# header\n"
      "var a in [0, 1]   # first\n"
      "var b in [-2.5, 1e1]\n"
      "\n"
      "objective a*b + exp(a)\n"
      "d = [1, 2]\n"
      "route = direct\n"
      "abs = linear\n"
      "form = slope\n"
      "simplify = entries\n");
  EXPECT_EQ(p.variables, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(p.box[1], abb::Interval(-2.5, 10));
  EXPECT_EQ(*p.d, (std::vector<double>{1, 2}));
  const auto o = abb::default_options(p);
  EXPECT_EQ(o.route, HessianRoute::IntervalDirect);
  EXPECT_EQ(o.abs, AbsMode::LinearSurrogate);
  EXPECT_EQ(o.form, RangeForm::Slope);
  EXPECT_EQ(o.simplify, SimplifyLevel::Entries);
  EXPECT_EQ(*o.d, (std::vector<double>{1, 2}));
}

TEST(ProblemFile, DefaultsWithoutSettings) {
  const auto o = abb::default_options(abb::testing::corpus("e3_quadratic"));
  EXPECT_EQ(o.route, HessianRoute::SymbolicSimplified);
  EXPECT_EQ(o.abs, AbsMode::SignDrop);
  EXPECT_EQ(o.form, RangeForm::Best);
  EXPECT_FALSE(o.d.has_value());
}

TEST(ProblemFile, ScalingOverrideReachesReport) {
  const auto p = abb::parse_problem("var x1 in [0,4]\nvar x2 in [0,2]\nobjective x1*x2\nd = [1,1]\n");
  const auto r = abb::analyze(p.objective, p.box, abb::default_options(p));
  EXPECT_EQ(r.d_used, (std::vector<double>{1, 1}));
}

TEST(ProblemFile, Errors) {
  EXPECT_NE(error_text("var x1 in [0,1]\n").find("no objective"), std::string::npos);
  EXPECT_NE(error_text("objective 1\n").find("no variables"), std::string::npos);
  EXPECT_EQ(error_line("var x1 in [0,1]\nobjective x1 + x2\n"), 2u);
  EXPECT_EQ(error_line("var x1 in [0,1]\nvar x1 in [0,2]\nobjective x1\n"), 2u);
  EXPECT_EQ(error_line("var x1 in [2,1]\nobjective x1\n"), 1u);
  EXPECT_EQ(error_line("var x1 in [0,inf]\nobjective x1\n"), 1u);
  EXPECT_EQ(error_line("var x1 in [0,1]\nobjective x1\nd = [1,2]\n"), 3u);
  EXPECT_EQ(error_line("var x1 in [0,1]\nobjective x1\ncolor = red\n"), 3u);
  EXPECT_EQ(error_line("var x1 in [0,1]\nobjective x1\nabs = huge\n"), 3u);
  EXPECT_EQ(error_line("var x1 from 0 to 1\nobjective x1\n"), 1u);
  EXPECT_THROW(abb::load_problem("/nonexistent/problem.prob"), abb::ProblemError);
}

TEST(Report, JsonHasSchemaAndRoundTripsExactly) {
  const auto p = abb::testing::corpus("e2_trig");
  auto o = abb::default_options(p);
  o.rigorous = true;
  const auto r = abb::analyze(p.objective, p.box, o);
  const auto j = abb::report_to_json(r, p);
  for (const char* key : {"alpha", "lower_bound", "certified_lower_bound", "minimizer", "hessian", "hi", "mode", "d",
                          "verified", "warnings", "underestimator"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  const auto back = nlohmann::json::parse(j.dump(2));
  const auto alpha = back["alpha"].get<std::vector<double>>();
  ASSERT_EQ(alpha.size(), r.alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) EXPECT_EQ(alpha[i], r.alpha[i]);
  EXPECT_EQ(back["lower_bound"].get<double>(), r.lower_bound);
  EXPECT_EQ(back["certified_lower_bound"].get<double>(), *r.certified_bound);
  EXPECT_EQ(back["hessian"][0][1][0].get<double>(), r.hessian_enclosure(0, 1).lo());
  EXPECT_EQ(back["hi"][1][0].get<double>(), r.hi_enclosures[1].lo());
  EXPECT_EQ(back["mode"]["abs"], "sign-drop");
  EXPECT_EQ(back["mode"]["form"], "best");
  // The formatted underestimator parses back to the same function.
  const auto g = abb::parse(back["underestimator"].get<std::string>(), p.variables);
  const std::vector<double> x{0.3, -0.7};
  EXPECT_NEAR(abb::eval_point(g, x), abb::eval_point(r.underestimator, x), 1e-12);
}

TEST(Report, IdenticalInputsGiveIdenticalBytes) {
  const auto p = abb::testing::corpus("e4_exp");
  auto o = abb::default_options(p);
  o.seed = 5;
  const std::string a = abb::report_to_json(abb::analyze(p.objective, p.box, o), p).dump(2);
  const std::string b = abb::report_to_json(abb::analyze(p.objective, p.box, o), p).dump(2);
  EXPECT_EQ(a, b);
}

TEST(Compare, QuarticContainsReferenceBounds) {
  const auto p = abb::testing::corpus("e1_quartic");
  const auto rows = abb::run_compare(p, full_matrix(), abb::default_options(p), 4);
  EXPECT_EQ(rows.size(), 1u + 4 * 5 * 3);
  EXPECT_TRUE(has_bound(rows, -85.1312, 1e-3));
  EXPECT_TRUE(has_bound(rows, -43.2171, 1e-3));
  EXPECT_TRUE(has_bound(rows, -1.9768, 1e-3));
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].report && rows[k - 1].report) EXPECT_GE(rows[k - 1].report->lower_bound, rows[k].report->lower_bound);
  }
}

TEST(Compare, CubicAlphaAcrossAbsModes) {
  const auto p = abb::testing::corpus("e5_cubic");
  const auto configs = abb::compare_matrix({HessianRoute::IntervalDirect, HessianRoute::SymbolicSimplified},
                                           {AbsMode::MagConstant, AbsMode::ShiftSurrogate, AbsMode::LinearSurrogate},
                                           {RangeForm::Natural}, {SimplifyLevel::Full});
  const auto rows = abb::run_compare(p, configs, abb::default_options(p), 2);
  std::map<std::string, double> alpha2;
  for (const auto& r : rows) {
    ASSERT_TRUE(r.report) << r.error;
    const std::string key = r.config.route == HessianRoute::IntervalDirect ? "direct" : std::string(abb::to_string(r.config.abs));
    alpha2[key] = r.report->alpha[1];
  }
  EXPECT_EQ(alpha2["direct"], 19);
  EXPECT_EQ(alpha2["mag"], 19);
  EXPECT_EQ(alpha2["shift"], 12);
  EXPECT_EQ(alpha2["linear"], 9);
}

TEST(Compare, ConvexOneVariableRowsAgree) {
  const auto p = abb::parse_problem("var t in [-1, 3]\nobjective (t-1)^2 + exp(t)\n", "convex");
  const auto rows = abb::run_compare(p, full_matrix(), abb::default_options(p), 3);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.report) << r.error;
    EXPECT_EQ(r.report->alpha, (std::vector<double>{0}));
    EXPECT_EQ(r.report->lower_bound, rows.front().report->lower_bound);
  }
}

TEST(Compare, FailuresStayInTheirRow) {
  const auto p = abb::parse_problem("var t in [-1, 1]\nobjective log(t)\n", "bad");
  const auto rows = abb::run_compare(p, abb::compare_matrix({HessianRoute::IntervalDirect}, {}, {}, {}),
                                     abb::default_options(p), 1);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].report.has_value());
  EXPECT_FALSE(rows[0].error.empty());
  EXPECT_NE(abb::format_compare_table(rows).find("error"), std::string::npos);
  EXPECT_TRUE(abb::compare_to_json(rows, p)["rows"][0].contains("error"));
}

TEST(Compare, TableFormatting) {
  const auto p = abb::testing::corpus("e3_quadratic");
  const auto rows = abb::run_compare(p, abb::compare_matrix({HessianRoute::IntervalDirect}, {}, {}, {}),
                                     abb::default_options(p), 1);
  const std::string table = abb::format_compare_table(rows);
  EXPECT_NE(table.find("-231.0459"), std::string::npos) << table;
  EXPECT_NE(table.find("[29.0000, 32.0000]"), std::string::npos) << table;
}

TEST(Plot, TrigFullGrid) {
  const auto p = abb::testing::corpus("e2_trig");
  const auto r = abb::analyze(p.objective, p.box, abb::default_options(p));
  std::ostringstream out;
  abb::write_plot_csv(out, p, r.underestimator, 101);
  std::string header;
  const auto rows = read_csv(out.str(), &header);
  EXPECT_EQ(header, "x1,x2,f,g");
  ASSERT_EQ(rows.size(), 10201u);
  for (const auto& row : rows) EXPECT_LE(row[3], row[2] + 1e-9);
}

TEST(Plot, CornersMatch) {
  for (const char* name : {"e2_trig", "e3_quadratic", "e4_exp", "e5_cubic"}) {
    const auto p = abb::testing::corpus(name);
    const auto r = abb::analyze(p.objective, p.box, abb::default_options(p));
    std::ostringstream out;
    abb::write_plot_csv(out, p, r.underestimator, 2);
    std::string header;
    const auto rows = read_csv(out.str(), &header);
    ASSERT_EQ(rows.size(), 4u);
    for (const auto& row : rows) {
      EXPECT_TRUE(row[0] == p.box[0].lo() || row[0] == p.box[0].hi());
      EXPECT_LE(std::fabs(row[2] - row[3]), 1e-9 * (1 + std::fabs(row[2]))) << name;
    }
  }
}

TEST(Plot, OneVariableAndErrors) {
  const auto p1 = abb::parse_problem("var t in [0, 2]\nobjective sin(3*t)\n");
  const auto r = abb::analyze(p1.objective, p1.box);
  std::ostringstream out;
  abb::write_plot_csv(out, p1, r.underestimator, 11);
  std::string header;
  const auto rows = read_csv(out.str(), &header);
  EXPECT_EQ(header, "t,f,g");
  EXPECT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows.back()[0], 2.0);

  const auto p3 = abb::parse_problem("var a in [0,1]\nvar b in [0,1]\nvar c in [0,1]\nobjective a*b*c\n");
  std::ostringstream sink;
  EXPECT_THROW(abb::write_plot_csv(sink, p3, p3.objective, 5), std::invalid_argument);
  EXPECT_THROW(abb::write_plot_csv(sink, p1, p1.objective, 1), std::invalid_argument);
}
