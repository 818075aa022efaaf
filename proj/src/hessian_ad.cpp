#include "abb/hessian_ad.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "abb/errors.hpp"

namespace abb {

namespace {

struct Jet {
  Interval v;
  std::vector<Interval> g;  // n
  std::vector<Interval> h;  // n*n, row-major, kept symmetric
};

class HessianAD {
 public:
  explicit HessianAD(const Box& box) : box_(box), n_(box.dim()) {}

  Jet eval(const Expr& e) {
    switch (e.kind()) {
      case NodeKind::Constant: return constant(e.value());
      case NodeKind::Variable: {
        if (e.index() >= n_) throw EvalError("variable index out of range", "");
        Jet j = constant(0.0);
        j.v = box_[e.index()];
        j.g[e.index()] = Interval(1.0);
        return j;
      }
      case NodeKind::Add: {
        Jet acc = eval(e.child(0));
        for (std::size_t k = 1; k < e.children().size(); ++k) acc = add(acc, eval(e.child(k)), 1.0);
        return acc;
      }
      case NodeKind::Sub: return add(eval(e.child(0)), eval(e.child(1)), -1.0);
      case NodeKind::Neg: return scale(eval(e.child(0)), -1.0);
      case NodeKind::Mul: {
        Jet acc = eval(e.child(0));
        for (std::size_t k = 1; k < e.children().size(); ++k) acc = mul(acc, eval(e.child(k)));
        return acc;
      }
      case NodeKind::Div: return div(eval(e.child(0)), eval(e.child(1)));
      case NodeKind::Pow: return power(eval(e.child(0)), e.exponent());
      case NodeKind::Func: return func(e.function(), eval(e.child(0)));
    }
    return constant(0.0);
  }

 private:
  Jet constant(double c) const {
    return {Interval(c), std::vector<Interval>(n_), std::vector<Interval>(n_ * n_)};
  }

  Jet add(const Jet& a, const Jet& b, double sign) const {
    Jet r = a;
    const Interval s(sign);
    r.v += s * b.v;
    for (std::size_t i = 0; i < n_; ++i) r.g[i] += s * b.g[i];
    for (std::size_t k = 0; k < n_ * n_; ++k) r.h[k] += s * b.h[k];
    return r;
  }

  Jet scale(const Jet& a, double c) const {
    Jet r = a;
    const Interval s(c);
    r.v = s * r.v;
    for (auto& x : r.g) x = s * x;
    for (auto& x : r.h) x = s * x;
    return r;
  }

  Jet mul(const Jet& u, const Jet& w) const {
    Jet r = constant(0.0);
    r.v = u.v * w.v;
    for (std::size_t i = 0; i < n_; ++i) r.g[i] = u.g[i] * w.v + u.v * w.g[i];
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j) {
        const Interval hij = u.h[i * n_ + j] * w.v + u.g[i] * w.g[j] + w.g[i] * u.g[j] + u.v * w.h[i * n_ + j];
        r.h[i * n_ + j] = r.h[j * n_ + i] = hij;
      }
    }
    return r;
  }

  Jet div(const Jet& u, const Jet& w) const {
    Jet r = constant(0.0);
    r.v = u.v / w.v;
    const Interval w2 = sqr(w.v);
    for (std::size_t i = 0; i < n_; ++i) r.g[i] = (u.g[i] * w.v - u.v * w.g[i]) / w2;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j) {
        const Interval hij =
            (u.h[i * n_ + j] - r.g[i] * w.g[j] - w.g[i] * r.g[j] - r.v * w.h[i * n_ + j]) / w.v;
        r.h[i * n_ + j] = r.h[j * n_ + i] = hij;
      }
    }
    return r;
  }

  Jet power(const Jet& u, int k) const {
    if (k == 0) return constant(1.0);
    if (k < 0) return div(constant(1.0), power(u, -k));
    if (k == 1) return u;
    if (k == 2) {
      Jet r = constant(0.0);
      r.v = sqr(u.v);
      const Interval two(2.0);
      for (std::size_t i = 0; i < n_; ++i) r.g[i] = two * u.v * u.g[i];
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) {
          const Interval hij = two * u.g[i] * u.g[j] + two * u.v * u.h[i * n_ + j];
          r.h[i * n_ + j] = r.h[j * n_ + i] = hij;
        }
      }
      return r;
    }
    Jet acc = u;
    for (int m = 1; m < k; ++m) acc = mul(acc, u);
    return acc;
  }

  // Chain rule with first and second derivative enclosures d1, d2 of phi at u.
  Jet chain(const Interval& value, const Interval& d1, const Interval& d2, const Jet& u) const {
    Jet r = constant(0.0);
    r.v = value;
    for (std::size_t i = 0; i < n_; ++i) r.g[i] = d1 * u.g[i];
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j) {
        const Interval hij = d1 * u.h[i * n_ + j] + d2 * u.g[i] * u.g[j];
        r.h[i * n_ + j] = r.h[j * n_ + i] = hij;
      }
    }
    return r;
  }

  Jet func(Function fn, const Jet& u) const {
    const Interval& x = u.v;
    switch (fn) {
      case Function::Sin: return chain(sin(x), cos(x), -sin(x), u);
      case Function::Cos: return chain(cos(x), -sin(x), -cos(x), u);
      case Function::Exp: {
        const Interval ex = exp(x);
        return chain(ex, ex, ex, u);
      }
      case Function::Log: {
        const Interval inv = Interval(1.0) / x;
        return chain(log(x), inv, -sqr(inv), u);
      }
      case Function::Sqrt: {
        const Interval s = sqrt(x);
        const Interval d1 = Interval(1.0) / (Interval(2.0) * s);
        const Interval d2 = -(Interval(1.0) / (Interval(4.0) * x * s));
        return chain(s, d1, d2, u);
      }
      case Function::Abs: throw UnsupportedNode("abs has no second derivative");
    }
    return u;
  }

  const Box& box_;
  std::size_t n_;
};

}  // namespace

IntervalMatrix interval_hessian_ad(const Expr& f, const Box& box) {
  Jet j;
  try {
    j = HessianAD(box).eval(f);
  } catch (const DomainError& err) {
    throw EvalError(err.what(), "");
  } catch (const std::invalid_argument& err) {
    if (dynamic_cast<const UnsupportedNode*>(&err)) throw;
    throw EvalError(std::string("non-finite interval: ") + err.what(), "");
  }
  const std::size_t n = box.dim();
  IntervalMatrix h(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t jj = i; jj < n; ++jj) h.set(i, jj, j.h[i * n + jj]);
  }
  return h;
}

}  // namespace abb
