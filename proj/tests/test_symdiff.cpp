#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "abb/errors.hpp"
#include "abb/parse.hpp"
#include "abb/range.hpp"
#include "abb/symdiff.hpp"
#include "test_support.hpp"

using abb::Expr;

namespace {

const std::vector<std::string> kXY{"x1", "x2"};
const std::vector<std::string> kX4{"x1", "x2", "x3", "x4"};

double rel_err(double got, double want) { return std::fabs(got - want) / std::max(1.0, std::fabs(want)); }

// Relative error of two expressions at random points of the box, skipping
// points outside either domain.
double max_disagreement(const Expr& a, const Expr& b, const abb::Box& box, int points, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int k = 0; k < points; ++k) {
    const auto x = abb::testing::uniform_point(box, rng);
    double va, vb;
    try {
      va = abb::eval_point(a, x);
      vb = abb::eval_point(b, x);
    } catch (const abb::EvalError&) {
      continue;
    }
    worst = std::max(worst, rel_err(vb, va));
  }
  return worst;
}

double central_difference(const Expr& e, std::vector<double> x, std::size_t i, double h) {
  x[i] += h;
  const double up = abb::eval_point(e, x);
  x[i] -= 2 * h;
  const double down = abb::eval_point(e, x);
  return (up - down) / (2 * h);
}

}  // namespace

TEST(Diff, Examples) {
  const Expr q = abb::parse("-x1/(x2^2+1)", kXY);
  const Expr dq = abb::diff(q, 1);
  const Expr expected = abb::parse("2*x1*x2/(x2^2+1)^2", kXY);
  std::mt19937_64 rng(3);
  const abb::Box box{abb::Interval(-1, 2), abb::Interval(-1, 1)};
  EXPECT_LE(max_disagreement(dq, expected, box, 100, 3), 1e-12);
  for (int k = 0; k < 20; ++k) {
    const auto x = abb::testing::uniform_point(box, rng);
    EXPECT_LE(rel_err(abb::eval_point(dq, x), central_difference(q, x, 1, 1e-6)), 1e-6);
  }

  EXPECT_TRUE(abb::diff(Expr::constant(4), 0).is_constant(0.0));
  EXPECT_TRUE(abb::diff(Expr::variable(1), 0).is_constant(0.0));

  const Expr f4 = abb::parse("(1+x1-exp(x2))^2", kXY);
  EXPECT_TRUE(abb::simplify(abb::diff(abb::diff(f4, 0), 0)).is_constant(2.0));
}

TEST(Diff, AbsIsUnsupported) {
  EXPECT_THROW(abb::diff(abb::parse("abs(x1)", kXY), 0), abb::UnsupportedNode);
  // Independent of the variable: no differentiation through abs is needed.
  EXPECT_TRUE(abb::diff(abb::parse("abs(x2)+x1", kXY), 0).is_constant(1.0));
}

TEST(Hessian, QuarticEntries) {
  const auto p = abb::testing::corpus("e1_quartic");
  const abb::SymMatrix h = abb::hessian_sym(p.objective, 4);
  EXPECT_EQ(abb::format(h(0, 0), kX4), "2+120*(x1-x4)^2");
  EXPECT_EQ(abb::format(h(0, 1), kX4), "20");
  EXPECT_EQ(abb::format(h(1, 2), kX4), "-24*(x2-2*x3)^2");
  EXPECT_TRUE(h(0, 2).is_constant(0.0));
}

TEST(Hessian, OneDimensionalSquare) {
  const abb::SymMatrix h = abb::hessian_sym(abb::parse("x1^2", kXY), 1);
  EXPECT_TRUE(h(0, 0).is_constant(2.0));
}

TEST(Hessian, QuadraticMatchesHandDerivation) {
  const auto p = abb::testing::corpus("e3_quadratic");
  const abb::SymMatrix h = abb::hessian_sym(p.objective, 2);
  const Expr h11 = abb::parse("8+2*x2^2", kXY), h12 = abb::parse("2+4*x1*x2", kXY), h22 = abb::parse("2+2*x1^2", kXY);
  EXPECT_LE(max_disagreement(h(0, 0), h11, p.box, 20, 5), 1e-12);
  EXPECT_LE(max_disagreement(h(0, 1), h12, p.box, 20, 6), 1e-12);
  EXPECT_LE(max_disagreement(h(1, 1), h22, p.box, 20, 7), 1e-12);
}

TEST(Hessian, TrigSecondDerivativeFactor) {
  const auto p = abb::testing::corpus("e2_trig");
  const abb::SymMatrix h = abb::hessian_sym(p.objective, 2);
  // The quotient part of d2f/dx2^2 is 2*x1*(1-3*x2^2)/(x2^2+1)^3.
  const Expr want = abb::parse("-cos(x1)*sin(x2) + 2*x1*(1-3*x2^2)/(x2^2+1)^3", kXY);
  EXPECT_LE(max_disagreement(h(1, 1), want, p.box, 100, 8), 1e-9);
  const Expr doubled = abb::parse("-cos(x1)*sin(x2) + 4*x1*(1-3*x2^2)/(x2^2+1)^3", kXY);
  EXPECT_GT(max_disagreement(h(1, 1), doubled, p.box, 100, 8), 1e-3);
}

TEST(Hessian, SymmetricEntriesShareNodes) {
  for (const auto& name : abb::testing::corpus_names()) {
    const auto p = abb::testing::corpus(name);
    const std::size_t n = p.box.dim();
    for (bool simp : {false, true}) {
      const abb::SymMatrix h = abb::hessian_sym(p.objective, n, simp);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          EXPECT_TRUE(h(i, j).same_node(h(j, i)));
          EXPECT_TRUE(abb::structurally_equal(h(i, j), h(j, i)));
        }
      }
    }
  }
}

TEST(Diff, FiniteDifferencesOnCorpus) {
  for (const auto& name : abb::testing::corpus_names()) {
    const auto p = abb::testing::corpus(name);
    const std::size_t n = p.box.dim();
    const auto grad = abb::gradient(p.objective, n);
    const abb::SymMatrix hess = abb::hessian_sym(p.objective, n, false);
    std::mt19937_64 rng(11);
    for (int k = 0; k < 20; ++k) {
      auto x = abb::testing::uniform_point(p.box, rng);
      for (std::size_t i = 0; i < n; ++i) {
        const double fd = central_difference(p.objective, x, i, 1e-6);
        EXPECT_LE(rel_err(abb::eval_point(grad[i], x), fd), 1e-5) << name << " df/dx" << i + 1;
        for (std::size_t j = 0; j < n; ++j) {
          const double fd2 = central_difference(grad[j], x, i, 1e-6);
          EXPECT_LE(rel_err(abb::eval_point(hess(i, j), x), fd2), 1e-5) << name << " H" << i + 1 << j + 1;
        }
      }
    }
  }
}

TEST(Simplify, QuarticRowCollapsesToConstant) {
  const Expr e = abb::parse("2+120*(x1-x4)^2 - 20 - 120*(x1-x4)^2", kX4);
  EXPECT_TRUE(abb::simplify(e).is_constant(-18.0)) << abb::format(abb::simplify(e), kX4);
}

TEST(Simplify, ExponentialsMerge) {
  const Expr e = abb::parse("2*exp(x2)*exp(x2) - 2*(1+x1-exp(x2))*exp(x2) - exp(x2)", kXY);
  const Expr s = abb::simplify(e);
  const abb::Box box{abb::Interval(0, 1), abb::Interval(0, 2)};
  EXPECT_LE(max_disagreement(e, s, box, 100, 12), 1e-9);
  const Expr want = abb::parse("(-3-2*x1+4*exp(x2))*exp(x2)", kXY);
  EXPECT_LE(max_disagreement(want, s, box, 100, 13), 1e-9);
  EXPECT_LE(abb::node_count(s), abb::node_count(want)) << abb::format(s, kXY);
  EXPECT_EQ(abb::format(abb::simplify(abb::parse("exp(x1)*exp(x1)", kXY)), kXY), "exp(x1)^2");
  EXPECT_EQ(abb::format(abb::simplify(abb::parse("exp(x1)*exp(x2)", kXY)), kXY), "exp(x1+x2)");
}

TEST(Simplify, TrigQuotientReduces) {
  const Expr e = abb::parse("(2*x1*(x2^2+1)^2 - 8*x1*x2^2*(x2^2+1))/(x2^2+1)^4", kXY);
  const Expr s = abb::simplify(e);
  const abb::Box box{abb::Interval(-1, 2), abb::Interval(-1, 1)};
  EXPECT_LE(max_disagreement(e, s, box, 100, 14), 1e-9);
  EXPECT_EQ(abb::format(s, kXY), "2*(1-3*x2^2)*x1/(1+x2^2)^3");
}

TEST(Simplify, SmallRewrites) {
  EXPECT_EQ(abb::format(abb::simplify(abb::parse("-x1^2-(1-x1)*x1", kXY)), kXY), "-x1");
  EXPECT_EQ(abb::format(abb::simplify(abb::parse("(x1^2+x1)/x1", kXY)), kXY), "1+x1");
  EXPECT_EQ(abb::format(abb::simplify(abb::parse("1/(x1*x2)*x1", kXY)), kXY), "1/x2");
  EXPECT_EQ(abb::format(abb::simplify(abb::parse("x1+x1+2*x2-x2", kXY)), kXY), "2*x1+x2");
  EXPECT_TRUE(abb::simplify(abb::parse("x1-x1", kXY)).is_constant(0.0));
  EXPECT_TRUE(abb::simplify(abb::parse("2*3+1", kXY)).is_constant(7.0));
}

TEST(Simplify, StatsReportShrinkage) {
  abb::SimplifyStats st;
  abb::simplify(abb::parse("2+120*(x1-x4)^2 - 20 - 120*(x1-x4)^2", kX4), &st);
  EXPECT_GT(st.nodes_before, st.nodes_after);
  EXPECT_EQ(st.nodes_after, 1u);
  EXPECT_GE(st.rounds, 1);
}

TEST(Simplify, IndividualPassesPreserveValues) {
  using Pass = Expr (*)(const Expr&);
  const Pass all[] = {abb::passes::fold_constants, abb::passes::flatten, abb::passes::collect_terms,
                      abb::passes::extract_common_factors, abb::passes::cancel_quotients,
                      abb::passes::distribute_products};
  for (const auto& name : abb::testing::corpus_names()) {
    const auto p = abb::testing::corpus(name);
    const abb::SymMatrix raw = abb::hessian_sym(p.objective, p.box.dim(), false);
    for (std::size_t i = 0; i < p.box.dim(); ++i) {
      for (Pass pass : all) {
        EXPECT_LE(max_disagreement(raw(i, i), pass(raw(i, i)), p.box, 100, 15), 1e-9) << name;
      }
    }
  }
}

TEST(Simplify, SemanticPreservationOnPipelineExpressions) {
  for (const auto& name : abb::testing::corpus_names()) {
    const auto p = abb::testing::corpus(name);
    const std::size_t n = p.box.dim();
    const abb::SymMatrix raw = abb::hessian_sym(p.objective, n, false);
    const abb::IntervalMatrix h =
        abb::interval_hessian(p.objective, p.box, abb::HessianRoute::SymbolicSimplified, abb::RangeForm::Natural);
    const abb::ScalingVector d = abb::ScalingVector::widths(p.box);
    std::vector<Expr> inputs{p.objective};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) inputs.push_back(raw(i, j));
      for (abb::AbsMode m : {abb::AbsMode::MagConstant, abb::AbsMode::ShiftSurrogate, abb::AbsMode::LinearSurrogate}) {
        inputs.push_back(abb::build_hi(raw, i, d, h, m, false));
      }
    }
    for (const Expr& e : inputs) {
      EXPECT_LE(max_disagreement(e, abb::simplify(e), p.box, 100, 16), 1e-9) << name << ": " << abb::format(e);
    }
  }
}

TEST(Simplify, NeverWidensRowFunctionEnclosures) {
  for (const char* name : {"e1_quartic", "e2_trig", "e3_quadratic", "e4_exp"}) {
    const auto p = abb::testing::corpus(name);
    const std::size_t n = p.box.dim();
    const abb::SymMatrix raw = abb::hessian_sym(p.objective, n, false);
    const abb::IntervalMatrix h =
        abb::interval_hessian(p.objective, p.box, abb::HessianRoute::SymbolicSimplified, abb::RangeForm::Natural, false);
    const abb::ScalingVector d = abb::ScalingVector::widths(p.box);
    for (std::size_t i = 0; i < n; ++i) {
      for (abb::AbsMode m : {abb::AbsMode::MagConstant, abb::AbsMode::SignDrop, abb::AbsMode::LinearSurrogate}) {
        const Expr before = abb::build_hi(raw, i, d, h, m, false);
        const Expr after = abb::simplify(before);
        const double wb = abb::natural_eval(before, p.box).width();
        const double wa = abb::natural_eval(after, p.box).width();
        EXPECT_LE(wa, wb + 1e-12) << name << " h" << i + 1 << ": " << abb::format(before) << " -> "
                                  << abb::format(after);
      }
    }
  }
}
