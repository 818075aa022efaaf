#include <cmath>

#include "abb/errors.hpp"
#include "abb/symdiff.hpp"
#include "builders.hpp"

namespace abb {

namespace build {

Expr add(std::vector<Expr> terms) {
  double c = 0.0;
  bool has_constant = false;
  std::vector<Expr> rest;
  for (auto& t : terms) {
    if (t.kind() == NodeKind::Add) {
      for (const auto& k : t.children()) {
        if (k.is_constant()) {
          c += k.value();
          has_constant = true;
        } else {
          rest.push_back(k);
        }
      }
    } else if (t.is_constant()) {
      c += t.value();
      has_constant = true;
    } else {
      rest.push_back(std::move(t));
    }
  }
  if (has_constant && (c != 0.0 || rest.empty())) rest.insert(rest.begin(), Expr::constant(c));
  return Expr::add(std::move(rest));
}

Expr mul(std::vector<Expr> factors) {
  double c = 1.0;
  std::vector<Expr> rest;
  auto take = [&](const Expr& f) {
    if (f.is_constant()) {
      c *= f.value();
    } else if (f.kind() == NodeKind::Neg) {
      c = -c;
      rest.push_back(f.child(0));
    } else {
      rest.push_back(f);
    }
  };
  for (const auto& f : factors) {
    if (f.kind() == NodeKind::Mul) {
      for (const auto& k : f.children()) take(k);
    } else {
      take(f);
    }
  }
  if (c == 0.0) return Expr::constant(0.0);
  if (rest.empty()) return Expr::constant(c);
  if (c == -1.0) return Expr::neg(Expr::mul(std::move(rest)));
  if (c != 1.0) rest.insert(rest.begin(), Expr::constant(c));
  return Expr::mul(std::move(rest));
}

Expr neg(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.kind() == NodeKind::Neg) return a.child(0);
  if (a.kind() == NodeKind::Mul && a.child(0).is_constant()) {
    return mul({Expr::constant(-1.0), a});
  }
  return Expr::neg(a);
}

Expr sub(const Expr& a, const Expr& b) {
  if (is_zero(b)) return a;
  if (is_zero(a)) return neg(b);
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() - b.value());
  if (b.kind() == NodeKind::Neg) return add({a, b.child(0)});
  return Expr::sub(a, b);
}

Expr div(const Expr& a, const Expr& b) {
  if (is_zero(a)) return a;
  if (is_one(b)) return a;
  if (a.is_constant() && b.is_constant() && b.value() != 0.0) {
    return Expr::constant(a.value() / b.value());
  }
  return Expr::div(a, b);
}

Expr pow(const Expr& base, int k) {
  if (k == 0) return Expr::constant(1.0);
  if (k == 1) return base;
  if (base.is_constant() && (base.value() != 0.0 || k > 0)) {
    return Expr::constant(std::pow(base.value(), k));
  }
  if (base.kind() == NodeKind::Pow) {
    const long long combined = static_cast<long long>(base.exponent()) * k;
    if (combined > -1000000 && combined < 1000000) {
      return build::pow(base.child(0), static_cast<int>(combined));
    }
  }
  return Expr::pow(base, k);
}

Expr func(Function fn, const Expr& a) {
  if (a.is_constant()) {
    const double v = a.value();
    switch (fn) {
      case Function::Sin: return Expr::constant(std::sin(v));
      case Function::Cos: return Expr::constant(std::cos(v));
      case Function::Exp: return Expr::constant(std::exp(v));
      case Function::Abs: return Expr::constant(std::fabs(v));
      case Function::Log:
        if (v > 0.0) return Expr::constant(std::log(v));
        break;
      case Function::Sqrt:
        if (v >= 0.0) return Expr::constant(std::sqrt(v));
        break;
    }
  }
  return Expr::func(fn, a);
}

}  // namespace build

namespace {

bool depends_on(const Expr& e, std::size_t index) {
  if (e.kind() == NodeKind::Variable) return e.index() == index;
  for (const auto& c : e.children()) {
    if (depends_on(c, index)) return true;
  }
  return false;
}

Expr d(const Expr& e, std::size_t i) {
  if (!depends_on(e, i)) return Expr::constant(0.0);
  switch (e.kind()) {
    case NodeKind::Constant: return Expr::constant(0.0);
    case NodeKind::Variable: return Expr::constant(1.0);
    case NodeKind::Add: {
      std::vector<Expr> terms;
      for (const auto& c : e.children()) terms.push_back(d(c, i));
      return build::add(std::move(terms));
    }
    case NodeKind::Sub: return build::sub(d(e.child(0), i), d(e.child(1), i));
    case NodeKind::Neg: return build::neg(d(e.child(0), i));
    case NodeKind::Mul: {
      const auto kids = e.children();
      std::vector<Expr> terms;
      for (std::size_t k = 0; k < kids.size(); ++k) {
        Expr dk = d(kids[k], i);
        if (build::is_zero(dk)) continue;
        std::vector<Expr> factors(kids.begin(), kids.end());
        factors[k] = dk;
        terms.push_back(build::mul(std::move(factors)));
      }
      return build::add(std::move(terms));
    }
    case NodeKind::Div: {
      const Expr& u = e.child(0);
      const Expr& v = e.child(1);
      Expr du = d(u, i);
      Expr dv = d(v, i);
      if (build::is_zero(dv)) return build::div(du, v);
      Expr num = build::sub(build::mul({du, v}), build::mul({u, dv}));
      return build::div(num, build::pow(v, 2));
    }
    case NodeKind::Pow: {
      const int k = e.exponent();
      const Expr& u = e.child(0);
      return build::mul({Expr::constant(static_cast<double>(k)), build::pow(u, k - 1), d(u, i)});
    }
    case NodeKind::Func: {
      const Expr& u = e.child(0);
      Expr du = d(u, i);
      switch (e.function()) {
        case Function::Sin: return build::mul({build::func(Function::Cos, u), du});
        case Function::Cos: return build::mul({build::neg(build::func(Function::Sin, u)), du});
        case Function::Exp: return build::mul({e, du});
        case Function::Log: return build::div(du, u);
        case Function::Sqrt:
          return build::div(du, build::mul({Expr::constant(2.0), e}));
        case Function::Abs:
          throw UnsupportedNode("cannot differentiate through abs");
      }
    }
  }
  return Expr::constant(0.0);
}

}  // namespace

Expr diff(const Expr& e, std::size_t index) { return d(e, index); }

std::vector<Expr> gradient(const Expr& e, std::size_t n) {
  std::vector<Expr> g;
  g.reserve(n);
  for (std::size_t i = 0; i < n; ++i) g.push_back(diff(e, i));
  return g;
}

SymMatrix hessian_sym(const Expr& f, std::size_t n, bool simplified) {
  SymMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Expr gi = diff(f, i);
    for (std::size_t j = i; j < n; ++j) {
      Expr hij = diff(gi, j);
      h.set(i, j, simplified ? simplify(hij) : hij);
    }
  }
  return h;
}

}  // namespace abb
