#include "abb/expr.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <variant>

#include "abb/errors.hpp"

namespace abb {

struct Expr::Node {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;
  std::size_t index = 0;
  int exponent = 0;
  Function fn = Function::Sin;
  std::vector<Expr> children;
};

std::string_view function_name(Function fn) {
  switch (fn) {
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Exp: return "exp";
    case Function::Log: return "log";
    case Function::Sqrt: return "sqrt";
    case Function::Abs: return "abs";
  }
  return "?";
}

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Constant;
  n->value = value == 0.0 ? 0.0 : value;  // no negative zero
  return Expr(std::move(n));
}

Expr Expr::variable(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Variable;
  n->index = index;
  return Expr(std::move(n));
}

namespace {

std::vector<Expr> flatten_into(NodeKind kind, std::vector<Expr> items) {
  std::vector<Expr> out;
  out.reserve(items.size());
  for (auto& item : items) {
    if (item.kind() == kind) {
      for (const auto& c : item.children()) out.push_back(c);
    } else {
      out.push_back(std::move(item));
    }
  }
  return out;
}

}  // namespace

Expr Expr::add(std::vector<Expr> terms) {
  terms = flatten_into(NodeKind::Add, std::move(terms));
  if (terms.empty()) return constant(0.0);
  if (terms.size() == 1) return terms.front();
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Add;
  n->children = std::move(terms);
  return Expr(std::move(n));
}

Expr Expr::mul(std::vector<Expr> factors) {
  factors = flatten_into(NodeKind::Mul, std::move(factors));
  if (factors.empty()) return constant(1.0);
  if (factors.size() == 1) return factors.front();
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Mul;
  n->children = std::move(factors);
  return Expr(std::move(n));
}

Expr Expr::neg(Expr child) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Neg;
  n->children = {std::move(child)};
  return Expr(std::move(n));
}

Expr Expr::sub(Expr left, Expr right) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Sub;
  n->children = {std::move(left), std::move(right)};
  return Expr(std::move(n));
}

Expr Expr::div(Expr numerator, Expr denominator) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Div;
  n->children = {std::move(numerator), std::move(denominator)};
  return Expr(std::move(n));
}

Expr Expr::pow(Expr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Pow;
  n->exponent = exponent;
  n->children = {std::move(base)};
  return Expr(std::move(n));
}

Expr Expr::func(Function fn, Expr child) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Func;
  n->fn = fn;
  n->children = {std::move(child)};
  return Expr(std::move(n));
}

NodeKind Expr::kind() const noexcept { return node_->kind; }

double Expr::value() const {
  if (node_->kind != NodeKind::Constant) throw std::logic_error("value() on non-constant node");
  return node_->value;
}

std::size_t Expr::index() const {
  if (node_->kind != NodeKind::Variable) throw std::logic_error("index() on non-variable node");
  return node_->index;
}

int Expr::exponent() const {
  if (node_->kind != NodeKind::Pow) throw std::logic_error("exponent() on non-power node");
  return node_->exponent;
}

Function Expr::function() const {
  if (node_->kind != NodeKind::Func) throw std::logic_error("function() on non-function node");
  return node_->fn;
}

std::span<const Expr> Expr::children() const noexcept { return node_->children; }

const Expr& Expr::child(std::size_t i) const { return node_->children.at(i); }

bool Expr::is_constant(double v) const noexcept {
  return node_->kind == NodeKind::Constant && node_->value == v;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sub(a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::div(a, b); }
Expr operator-(const Expr& a) { return Expr::neg(a); }
Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
Expr operator+(double a, const Expr& b) { return Expr::constant(a) + b; }
Expr operator-(const Expr& a, double b) { return a - Expr::constant(b); }
Expr operator-(double a, const Expr& b) { return Expr::constant(a) - b; }
Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
Expr operator*(const Expr& a, double b) { return a * Expr::constant(b); }

Expr sin(const Expr& e) { return Expr::func(Function::Sin, e); }
Expr cos(const Expr& e) { return Expr::func(Function::Cos, e); }
Expr exp(const Expr& e) { return Expr::func(Function::Exp, e); }
Expr log(const Expr& e) { return Expr::func(Function::Log, e); }
Expr sqrt(const Expr& e) { return Expr::func(Function::Sqrt, e); }
Expr abs(const Expr& e) { return Expr::func(Function::Abs, e); }
Expr pow(const Expr& base, int exponent) { return Expr::pow(base, exponent); }

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.same_node(b)) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case NodeKind::Constant: return a.value() == b.value();
    case NodeKind::Variable: return a.index() == b.index();
    case NodeKind::Pow:
      if (a.exponent() != b.exponent()) return false;
      break;
    case NodeKind::Func:
      if (a.function() != b.function()) return false;
      break;
    default: break;
  }
  const auto ca = a.children();
  const auto cb = b.children();
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (!structurally_equal(ca[i], cb[i])) return false;
  }
  return true;
}

namespace {

void append_key(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case NodeKind::Constant: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "#%.17g", e.value());
      out += buf;
      return;
    }
    case NodeKind::Variable:
      out += 'v';
      out += std::to_string(e.index());
      return;
    case NodeKind::Add: out += "+("; break;
    case NodeKind::Mul: out += "*("; break;
    case NodeKind::Neg: out += "~("; break;
    case NodeKind::Sub: out += "-("; break;
    case NodeKind::Div: out += "/("; break;
    case NodeKind::Pow:
      out += "^";
      out += std::to_string(e.exponent());
      out += '(';
      break;
    case NodeKind::Func:
      out += function_name(e.function());
      out += '(';
      break;
  }
  bool first = true;
  for (const auto& c : e.children()) {
    if (!first) out += ',';
    first = false;
    append_key(c, out);
  }
  out += ')';
}

}  // namespace

std::string canonical_key(const Expr& e) {
  std::string out;
  append_key(e, out);
  return out;
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& c : e.children()) n += node_count(c);
  return n;
}

namespace {

void collect_vars(const Expr& e, std::set<std::size_t>& out) {
  if (e.kind() == NodeKind::Variable) out.insert(e.index());
  for (const auto& c : e.children()) collect_vars(c, out);
}

Expr rebuild(const Expr& e, std::vector<Expr> kids) {
  switch (e.kind()) {
    case NodeKind::Constant:
    case NodeKind::Variable: return e;
    case NodeKind::Add: return Expr::add(std::move(kids));
    case NodeKind::Mul: return Expr::mul(std::move(kids));
    case NodeKind::Neg: return Expr::neg(std::move(kids[0]));
    case NodeKind::Sub: return Expr::sub(std::move(kids[0]), std::move(kids[1]));
    case NodeKind::Div: return Expr::div(std::move(kids[0]), std::move(kids[1]));
    case NodeKind::Pow: return Expr::pow(std::move(kids[0]), e.exponent());
    case NodeKind::Func: return Expr::func(e.function(), std::move(kids[0]));
  }
  return e;
}

}  // namespace

std::set<std::size_t> free_vars(const Expr& e) {
  std::set<std::size_t> out;
  collect_vars(e, out);
  return out;
}

bool contains_function(const Expr& e, Function fn) {
  if (e.kind() == NodeKind::Func && e.function() == fn) return true;
  for (const auto& c : e.children()) {
    if (contains_function(c, fn)) return true;
  }
  return false;
}

Expr substitute(const Expr& e, std::size_t index, const Expr& value) {
  if (e.kind() == NodeKind::Variable) return e.index() == index ? value : e;
  if (e.children().empty()) return e;
  std::vector<Expr> kids;
  kids.reserve(e.children().size());
  for (const auto& c : e.children()) kids.push_back(substitute(c, index, value));
  return rebuild(e, std::move(kids));
}

Expr normalize_structure(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Constant:
    case NodeKind::Variable: return e;
    case NodeKind::Sub:
      return normalize_structure(
          Expr::add({e.child(0), Expr::mul({Expr::constant(-1.0), e.child(1)})}));
    case NodeKind::Neg:
      return normalize_structure(Expr::mul({Expr::constant(-1.0), e.child(0)}));
    case NodeKind::Pow:
      if (e.exponent() < 0) {
        return normalize_structure(
            Expr::div(Expr::constant(1.0), Expr::pow(e.child(0), -e.exponent())));
      }
      return Expr::pow(normalize_structure(e.child(0)), e.exponent());
    case NodeKind::Div:
      return Expr::div(normalize_structure(e.child(0)), normalize_structure(e.child(1)));
    case NodeKind::Func:
      return Expr::func(e.function(), normalize_structure(e.child(0)));
    case NodeKind::Add:
    case NodeKind::Mul: {
      const bool is_add = e.kind() == NodeKind::Add;
      std::vector<Expr> kids;
      for (const auto& c : e.children()) kids.push_back(normalize_structure(c));
      kids = flatten_into(e.kind(), std::move(kids));
      double folded = is_add ? 0.0 : 1.0;
      bool any_constant = false;
      std::vector<Expr> rest;
      for (auto& k : kids) {
        if (k.is_constant()) {
          folded = is_add ? folded + k.value() : folded * k.value();
          any_constant = true;
        } else {
          rest.push_back(std::move(k));
        }
      }
      const double identity = is_add ? 0.0 : 1.0;
      if (any_constant && (folded != identity || rest.empty())) {
        if (is_add) {
          rest.push_back(Expr::constant(folded));
        } else {
          rest.insert(rest.begin(), Expr::constant(folded));
        }
      }
      return is_add ? Expr::add(std::move(rest)) : Expr::mul(std::move(rest));
    }
  }
  return e;
}

namespace {

struct PointEvaluator {
  std::span<const double> point;
  std::vector<std::size_t> path;

  [[noreturn]] void fail(const std::string& what) const {
    std::string p;
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i) p += '/';
      p += std::to_string(path[i]);
    }
    throw EvalError(what, p);
  }

  double child(const Expr& e, std::size_t i) {
    path.push_back(i);
    const double v = eval(e.child(i));
    path.pop_back();
    return v;
  }

  double eval(const Expr& e) {
    switch (e.kind()) {
      case NodeKind::Constant: return e.value();
      case NodeKind::Variable:
        if (e.index() >= point.size()) fail("variable index out of range");
        return point[e.index()];
      case NodeKind::Add: {
        double s = 0.0;
        for (std::size_t i = 0; i < e.children().size(); ++i) s += child(e, i);
        return s;
      }
      case NodeKind::Mul: {
        double p = 1.0;
        for (std::size_t i = 0; i < e.children().size(); ++i) p *= child(e, i);
        return p;
      }
      case NodeKind::Neg: return -child(e, 0);
      case NodeKind::Sub: return child(e, 0) - child(e, 1);
      case NodeKind::Div: {
        const double n = child(e, 0);
        const double d = child(e, 1);
        if (d == 0.0) fail("division by zero");
        return n / d;
      }
      case NodeKind::Pow: {
        const double b = child(e, 0);
        if (e.exponent() < 0 && b == 0.0) fail("negative power of zero");
        return std::pow(b, e.exponent());
      }
      case NodeKind::Func: {
        const double a = child(e, 0);
        switch (e.function()) {
          case Function::Sin: return std::sin(a);
          case Function::Cos: return std::cos(a);
          case Function::Exp: return std::exp(a);
          case Function::Log:
            if (a <= 0.0) fail("log of non-positive value");
            return std::log(a);
          case Function::Sqrt:
            if (a < 0.0) fail("sqrt of negative value");
            return std::sqrt(a);
          case Function::Abs: return std::fabs(a);
        }
      }
    }
    fail("unknown node");
  }
};

}  // namespace

double eval_point(const Expr& e, std::span<const double> point) {
  PointEvaluator ev{point, {}};
  return ev.eval(e);
}

}  // namespace abb
