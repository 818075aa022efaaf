#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace abb {

enum class NodeKind { Constant, Variable, Add, Mul, Neg, Sub, Div, Pow, Func };

enum class Function { Sin, Cos, Exp, Log, Sqrt, Abs };

std::string_view function_name(Function fn);

// Immutable expression tree with shared subtrees.
//
// Variables are positional (0-based index). Add and Mul are n-ary with at
// least two children; the factories flatten nested Add/Mul and collapse
// one-child lists. Pow carries a signed integer exponent.
class Expr {
 public:
  // The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable(std::size_t index);
  static Expr add(std::vector<Expr> terms);
  static Expr mul(std::vector<Expr> factors);
  static Expr neg(Expr child);
  static Expr sub(Expr left, Expr right);
  static Expr div(Expr numerator, Expr denominator);
  static Expr pow(Expr base, int exponent);
  static Expr func(Function fn, Expr child);

  NodeKind kind() const noexcept;
  // Constant nodes only.
  double value() const;
  // Variable nodes only.
  std::size_t index() const;
  // Pow nodes only.
  int exponent() const;
  // Func nodes only.
  Function function() const;

  std::span<const Expr> children() const noexcept;
  const Expr& child(std::size_t i) const;

  bool is_constant() const noexcept { return kind() == NodeKind::Constant; }
  bool is_constant(double v) const noexcept;

  // Nodes are shared; identity comparison is cheap and implies structural equality.
  bool same_node(const Expr& other) const noexcept { return node_ == other.node_; }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator+(const Expr& a, double b);
Expr operator+(double a, const Expr& b);
Expr operator-(const Expr& a, double b);
Expr operator-(double a, const Expr& b);
Expr operator*(double a, const Expr& b);
Expr operator*(const Expr& a, double b);

Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sqrt(const Expr& e);
Expr abs(const Expr& e);
Expr pow(const Expr& base, int exponent);

bool structurally_equal(const Expr& a, const Expr& b);

// Unambiguous serialization, used for atom identity and deterministic ordering.
std::string canonical_key(const Expr& e);

std::size_t node_count(const Expr& e);

std::set<std::size_t> free_vars(const Expr& e);

bool contains_function(const Expr& e, Function fn);

// Replaces variable `index` everywhere by `value`.
Expr substitute(const Expr& e, std::size_t index, const Expr& value);

// Structural normal form used for round-trip comparisons: Sub and Neg become
// Add / Mul by -1, negative exponents become divisions, Add/Mul lists are
// flattened and their constant members multiplied or summed into one.
Expr normalize_structure(const Expr& e);

// Real-valued evaluation. Throws EvalError (with node path) on domain
// violations or a point of the wrong dimension.
double eval_point(const Expr& e, std::span<const double> point);

}  // namespace abb
