#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "abb/errors.hpp"
#include "abb/expr.hpp"
#include "abb/parse.hpp"

using abb::Expr;
using abb::NodeKind;

namespace {

const std::vector<std::string> kXY{"x1", "x2"};

// Evaluation written directly against the node structure, independent of eval_point.
double reference_eval(const Expr& e, const std::vector<double>& x) {
  switch (e.kind()) {
    case NodeKind::Constant: return e.value();
    case NodeKind::Variable: return x.at(e.index());
    case NodeKind::Add: {
      double s = 0.0;
      for (const Expr& c : e.children()) s += reference_eval(c, x);
      return s;
    }
    case NodeKind::Mul: {
      double p = 1.0;
      for (const Expr& c : e.children()) p *= reference_eval(c, x);
      return p;
    }
    case NodeKind::Neg: return -reference_eval(e.child(0), x);
    case NodeKind::Sub: return reference_eval(e.child(0), x) - reference_eval(e.child(1), x);
    case NodeKind::Div: return reference_eval(e.child(0), x) / reference_eval(e.child(1), x);
    case NodeKind::Pow: return std::pow(reference_eval(e.child(0), x), e.exponent());
    case NodeKind::Func: {
      const double a = reference_eval(e.child(0), x);
      switch (e.function()) {
        case abb::Function::Sin: return std::sin(a);
        case abb::Function::Cos: return std::cos(a);
        case abb::Function::Exp: return std::exp(a);
        case abb::Function::Log: return std::log(a);
        case abb::Function::Sqrt: return std::sqrt(a);
        case abb::Function::Abs: return std::fabs(a);
      }
    }
  }
  return NAN;
}

Expr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 10);
  auto sub = [&] { return random_expr(rng, depth - 1); };
  switch (pick(rng)) {
    case 0: return Expr::constant(std::uniform_int_distribution<int>(-9, 9)(rng) * 0.5);
    case 1: return Expr::variable(std::uniform_int_distribution<int>(0, 1)(rng));
    case 2: return Expr::add({sub(), sub()});
    case 3: return Expr::add({sub(), sub(), sub()});
    case 4: return Expr::mul({sub(), sub()});
    case 5: return Expr::neg(sub());
    case 6: return Expr::sub(sub(), sub());
    case 7: return Expr::div(sub(), Expr::add({Expr::constant(3), Expr::pow(sub(), 2)}));
    case 8: return Expr::pow(sub(), std::uniform_int_distribution<int>(2, 3)(rng));
    case 9: return Expr::func(abb::Function::Sin, sub());
    default: return Expr::func(abb::Function::Exp, Expr::func(abb::Function::Cos, sub()));
  }
}

}  // namespace

TEST(Parse, TrigStructure) {
  const Expr e = abb::parse("cos(x1)*sin(x2) - x1/(x2^2+1)", kXY);
  ASSERT_EQ(e.kind(), NodeKind::Sub);
  const Expr& prod = e.child(0);
  ASSERT_EQ(prod.kind(), NodeKind::Mul);
  ASSERT_EQ(prod.children().size(), 2u);
  EXPECT_EQ(prod.child(0).kind(), NodeKind::Func);
  EXPECT_EQ(prod.child(0).function(), abb::Function::Cos);
  EXPECT_EQ(prod.child(0).child(0).index(), 0u);
  EXPECT_EQ(prod.child(1).function(), abb::Function::Sin);
  EXPECT_EQ(prod.child(1).child(0).index(), 1u);
  const Expr& quot = e.child(1);
  ASSERT_EQ(quot.kind(), NodeKind::Div);
  EXPECT_EQ(quot.child(0).index(), 0u);
  const Expr& den = quot.child(1);
  ASSERT_EQ(den.kind(), NodeKind::Add);
  EXPECT_EQ(den.child(0).kind(), NodeKind::Pow);
  EXPECT_EQ(den.child(0).exponent(), 2);
  EXPECT_EQ(den.child(0).child(0).index(), 1u);
  EXPECT_TRUE(den.child(1).is_constant(1.0));
}

TEST(Parse, Precedence) {
  EXPECT_EQ(abb::format(abb::parse("1+2*x1^2", kXY), kXY), "1+2*x1^2");
  EXPECT_EQ(abb::format(abb::parse("-x1^2", kXY), kXY), "-x1^2");
  const Expr neg = abb::parse("-x1^2", kXY);
  EXPECT_EQ(neg.kind(), NodeKind::Neg);
  EXPECT_EQ(neg.child(0).kind(), NodeKind::Pow);
  const Expr sub = abb::parse("x1-x2-1", kXY);
  ASSERT_EQ(sub.kind(), NodeKind::Sub);
  EXPECT_EQ(sub.child(0).kind(), NodeKind::Sub);
  const Expr div = abb::parse("x1/x2/2", kXY);
  ASSERT_EQ(div.kind(), NodeKind::Div);
  EXPECT_EQ(div.child(0).kind(), NodeKind::Div);
  const double v = abb::eval_point(abb::parse("2^3^2", kXY), std::vector<double>{0, 0});
  EXPECT_EQ(v, 512.0);
}

TEST(Parse, NegativeExponentBecomesQuotient) {
  const Expr e = abb::parse("x1^-2", kXY);
  ASSERT_EQ(e.kind(), NodeKind::Div);
  EXPECT_TRUE(e.child(0).is_constant(1.0));
  EXPECT_EQ(e.child(1).exponent(), 2);
}

TEST(Parse, ErrorsCarryPositions) {
  auto position_of = [](const std::string& text) -> std::size_t {
    try {
      abb::parse(text, kXY);
    } catch (const abb::ParseError& e) {
      return e.position();
    }
    ADD_FAILURE() << "no error for " << text;
    return static_cast<std::size_t>(-1);
  };
  EXPECT_EQ(position_of("x1 +* x2"), 4u);
  EXPECT_EQ(position_of("x1 x2"), 3u);
  EXPECT_EQ(position_of("x3 + 1"), 0u);
  EXPECT_EQ(position_of("sin(x1"), 6u);
  EXPECT_EQ(position_of("x1^1.5"), 3u);
  EXPECT_THROW(abb::parse("", kXY), abb::ParseError);
  EXPECT_THROW(abb::parse("tan(x1)", kXY), abb::ParseError);
  EXPECT_THROW(abb::parse("x1)", kXY), abb::ParseError);
}

TEST(Format, NumbersAndParentheses) {
  EXPECT_EQ(abb::format_number(10), "10");
  EXPECT_EQ(abb::format_number(0.1), "0.1");
  EXPECT_EQ(abb::format_number(-2.5), "-2.5");
  EXPECT_EQ(abb::format(abb::parse("x1*(-1)", kXY), kXY), "x1*(-1)");
  EXPECT_EQ(abb::format(abb::parse("(x1-x2)^2", kXY), kXY), "(x1-x2)^2");
  EXPECT_EQ(abb::format(abb::parse("x1-(x2-1)", kXY), kXY), "x1-(x2-1)");
  EXPECT_EQ(abb::format(Expr::variable(2)), "x3");
}

TEST(Format, RoundTripOnRandomTrees) {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 1000; ++k) {
    const Expr e = random_expr(rng, 4);
    const std::string text = abb::format(e, kXY);
    const Expr back = abb::parse(text, kXY);
    ASSERT_TRUE(abb::structurally_equal(abb::normalize_structure(back), abb::normalize_structure(e)))
        << text << "\n  reparsed as " << abb::format(back, kXY);
  }
}

TEST(Eval, MatchesIndependentEvaluator) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 1000; ++k) {
    const Expr e = random_expr(rng, 4);
    const std::vector<double> x{u(rng), u(rng)};
    const double want = reference_eval(e, x);
    const double got = abb::eval_point(e, x);
    ASSERT_NEAR(got, want, 1e-12 * (1 + std::fabs(want))) << abb::format(e, kXY);
  }
}

TEST(Eval, Examples) {
  const Expr e2 = abb::parse("cos(x1)*sin(x2) - x1/(x2^2+1)", kXY);
  EXPECT_NEAR(abb::eval_point(e2, std::vector<double>{0, 0}), 0.0, 1e-15);
  EXPECT_NEAR(abb::eval_point(e2, std::vector<double>{1, 1}), std::cos(1.0) * std::sin(1.0) - 0.5, 1e-15);
  const std::vector<std::string> four{"x1", "x2", "x3", "x4"};
  const Expr e1 = abb::parse("(x1+10*x2)^2 + 5*(x3-x4)^2 + (x2-2*x3)^4 + 10*(x1-x4)^4", four);
  EXPECT_EQ(abb::eval_point(e1, std::vector<double>{1, 1, 1, 1}), 122.0);
  EXPECT_EQ(abb::eval_point(e1, std::vector<double>{0, 0, 0, 0}), 0.0);
}

TEST(Eval, ErrorsNameTheNode) {
  const Expr e = abb::parse("x1 + log(x2)", kXY);
  try {
    abb::eval_point(e, std::vector<double>{1, -1});
    FAIL();
  } catch (const abb::EvalError& err) {
    EXPECT_EQ(err.path(), "1");
  }
  const Expr q = abb::parse("1/(x1-x1)", kXY);
  try {
    abb::eval_point(q, std::vector<double>{3, 0});
    FAIL();
  } catch (const abb::EvalError& err) {
    EXPECT_EQ(err.path(), "");
  }
  EXPECT_THROW(abb::eval_point(e, std::vector<double>{1}), abb::EvalError);
}

TEST(ExprUtilities, FreeVarsSubstituteCounts) {
  const Expr e = abb::parse("x1*sin(x2) + 3", kXY);
  EXPECT_EQ(abb::free_vars(e), (std::set<std::size_t>{0, 1}));
  const Expr s = abb::substitute(e, 1, Expr::constant(0));
  EXPECT_EQ(abb::eval_point(s, std::vector<double>{5, 9}), 3.0);
  EXPECT_TRUE(abb::contains_function(abb::parse("abs(x1)+1", kXY), abb::Function::Abs));
  EXPECT_FALSE(abb::contains_function(e, abb::Function::Abs));
  EXPECT_EQ(abb::node_count(abb::parse("x1+x2", kXY)), 3u);
}

TEST(ExprFactories, FlattenNestedSumsAndProducts) {
  const Expr x = Expr::variable(0), y = Expr::variable(1);
  const Expr s = Expr::add({Expr::add({x, y}), x});
  EXPECT_EQ(s.children().size(), 3u);
  const Expr p = Expr::mul({x, Expr::mul({y, y})});
  EXPECT_EQ(p.children().size(), 3u);
  EXPECT_TRUE(Expr::add({x}).same_node(x));
}
