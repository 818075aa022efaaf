#pragma once

#include <cstddef>
#include <vector>

#include "abb/expr.hpp"

namespace abb {

// Symmetric matrix of expressions; (i,j) and (j,i) share one node.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), entries_(n * n) {}

  std::size_t size() const noexcept { return n_; }
  const Expr& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, const Expr& e) {
    entries_.at(i * n_ + j) = e;
    entries_.at(j * n_ + i) = e;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Expr> entries_;
};

// d e / d x_index by sum, product, quotient, power and chain rules. The result
// is cleaned of trivial zeros and ones but otherwise left factored.
// Throws UnsupportedNode when differentiating through abs.
Expr diff(const Expr& e, std::size_t index);

std::vector<Expr> gradient(const Expr& e, std::size_t n);

// Second derivatives. With `simplified`, entry (i,j) is
// simplify(diff(diff(f, i), j)); otherwise the raw derivative. Only the upper
// triangle is computed.
SymMatrix hessian_sym(const Expr& f, std::size_t n, bool simplified = true);

struct SimplifyStats {
  int rounds = 0;
  std::size_t nodes_before = 0;
  std::size_t nodes_after = 0;
};

// Rewrites e into an equivalent (on its domain) expression that is usually
// tighter under interval evaluation. See simplify.cpp for the pass list.
Expr simplify(const Expr& e, SimplifyStats* stats = nullptr);

// Individual passes, exposed for testing. Each is semantics-preserving on
// its own; simplify() combines them under a size-non-increasing guard.
namespace passes {
Expr fold_constants(const Expr& e);
Expr flatten(const Expr& e);
Expr collect_terms(const Expr& e);
Expr extract_common_factors(const Expr& e);
Expr cancel_quotients(const Expr& e);
Expr distribute_products(const Expr& e);
}  // namespace passes

}  // namespace abb
