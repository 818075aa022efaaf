#include "abb/range.hpp"

#include <array>
#include <stdexcept>
#include <string>

#include "abb/errors.hpp"
#include "abb/symdiff.hpp"

namespace abb {

std::string_view to_string(RangeForm form) {
  switch (form) {
    case RangeForm::Natural: return "natural";
    case RangeForm::MeanValue: return "mvf";
    case RangeForm::Slope: return "slope";
    case RangeForm::Monotone: return "mono";
    case RangeForm::Best: return "best";
  }
  return "?";
}

std::optional<RangeForm> parse_range_form(std::string_view name) {
  for (RangeForm f : {RangeForm::Natural, RangeForm::MeanValue, RangeForm::Slope, RangeForm::Monotone,
                      RangeForm::Best}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

namespace {

class PathTracker {
 public:
  void push(std::size_t i) { stack_.push_back(i); }
  void pop() { stack_.pop_back(); }
  std::string str() const {
    std::string s;
    for (std::size_t k = 0; k < stack_.size(); ++k) {
      if (k) s += '/';
      s += std::to_string(stack_[k]);
    }
    return s;
  }

 private:
  std::vector<std::size_t> stack_;
};

// Runs op and rethrows interval failures as EvalError at the current node.
template <class Op>
Interval guarded(const PathTracker& path, Op&& op) {
  try {
    return op();
  } catch (const DomainError& err) {
    throw EvalError(err.what(), path.str());
  } catch (const std::invalid_argument& err) {
    throw EvalError(std::string("non-finite interval: ") + err.what(), path.str());
  }
}

Interval apply(Function fn, const Interval& a) {
  switch (fn) {
    case Function::Sin: return sin(a);
    case Function::Cos: return cos(a);
    case Function::Exp: return exp(a);
    case Function::Log: return log(a);
    case Function::Sqrt: return sqrt(a);
    case Function::Abs: return abs(a);
  }
  return a;
}

class Natural {
 public:
  explicit Natural(const Box& box) : box_(box) {}

  Interval eval(const Expr& e) {
    switch (e.kind()) {
      case NodeKind::Constant: return Interval(e.value());
      case NodeKind::Variable:
        if (e.index() >= box_.dim()) throw EvalError("variable index out of range", path_.str());
        return box_[e.index()];
      default: break;
    }
    std::vector<Interval> v;
    v.reserve(e.children().size());
    for (std::size_t i = 0; i < e.children().size(); ++i) {
      path_.push(i);
      v.push_back(eval(e.child(i)));
      path_.pop();
    }
    return guarded(path_, [&] {
      switch (e.kind()) {
        case NodeKind::Add: {
          Interval acc = v[0];
          for (std::size_t i = 1; i < v.size(); ++i) acc += v[i];
          return acc;
        }
        case NodeKind::Mul: {
          Interval acc = v[0];
          for (std::size_t i = 1; i < v.size(); ++i) acc *= v[i];
          return acc;
        }
        case NodeKind::Neg: return -v[0];
        case NodeKind::Sub: return v[0] - v[1];
        case NodeKind::Div: return v[0] / v[1];
        case NodeKind::Pow: return pow(v[0], e.exponent());
        case NodeKind::Func: return apply(e.function(), v[0]);
        default: return v[0];
      }
    });
  }

 private:
  const Box& box_;
  PathTracker path_;
};

struct SlopeNode {
  Interval range;
  Interval center;
  std::vector<Interval> slope;
};

Interval derivative_over(Function fn, const Interval& a) {
  switch (fn) {
    case Function::Sin: return cos(a);
    case Function::Cos: return -sin(a);
    case Function::Exp: return exp(a);
    case Function::Log: return Interval(1.0) / a;
    case Function::Sqrt: return Interval(1.0) / (Interval(2.0) * sqrt(a));
    case Function::Abs:
      if (a.zero_in_interior()) return Interval(-1.0, 1.0);
      return Interval(a.lo() >= 0.0 ? 1.0 : -1.0);
  }
  return a;
}

class Slopes {
 public:
  Slopes(const Box& box, std::span<const double> center) : box_(box), c_(center) {}

  SlopeNode eval(const Expr& e) {
    const std::size_t n = box_.dim();
    switch (e.kind()) {
      case NodeKind::Constant:
        return {Interval(e.value()), Interval(e.value()), std::vector<Interval>(n)};
      case NodeKind::Variable: {
        if (e.index() >= n) throw EvalError("variable index out of range", path_.str());
        SlopeNode s{box_[e.index()], Interval(c_[e.index()]), std::vector<Interval>(n)};
        s.slope[e.index()] = Interval(1.0);
        return s;
      }
      default: break;
    }
    std::vector<SlopeNode> v;
    v.reserve(e.children().size());
    for (std::size_t i = 0; i < e.children().size(); ++i) {
      path_.push(i);
      v.push_back(eval(e.child(i)));
      path_.pop();
    }
    SlopeNode out;
    guarded(path_, [&] {
      out = combine(e, v);
      return Interval();
    });
    return out;
  }

 private:
  static SlopeNode mul(const SlopeNode& u, const SlopeNode& w) {
    SlopeNode r{u.range * w.range, u.center * w.center, std::vector<Interval>(u.slope.size())};
    for (std::size_t i = 0; i < r.slope.size(); ++i) r.slope[i] = u.slope[i] * w.range + u.center * w.slope[i];
    return r;
  }

  static SlopeNode div(const SlopeNode& u, const SlopeNode& w) {
    SlopeNode r{u.range / w.range, u.center / w.center, std::vector<Interval>(u.slope.size())};
    for (std::size_t i = 0; i < r.slope.size(); ++i) r.slope[i] = (u.slope[i] - r.center * w.slope[i]) / w.range;
    return r;
  }

  static SlopeNode power(const SlopeNode& u, int k) {
    const std::size_t n = u.slope.size();
    if (k == 0) return {Interval(1.0), Interval(1.0), std::vector<Interval>(n)};
    if (k < 0) {
      SlopeNode one{Interval(1.0), Interval(1.0), std::vector<Interval>(n)};
      return div(one, power(u, -k));
    }
    // (t^k - c^k) / (t - c) = sum_j t^(k-1-j) c^j
    Interval q(0.0);
    for (int j = 0; j < k; ++j) q += pow(u.range, k - 1 - j) * pow(u.center, j);
    SlopeNode r{pow(u.range, k), pow(u.center, k), std::vector<Interval>(n)};
    for (std::size_t i = 0; i < n; ++i) r.slope[i] = q * u.slope[i];
    return r;
  }

  SlopeNode combine(const Expr& e, std::vector<SlopeNode>& v) {
    const std::size_t n = box_.dim();
    switch (e.kind()) {
      case NodeKind::Add: {
        SlopeNode acc = v[0];
        for (std::size_t k = 1; k < v.size(); ++k) {
          acc.range += v[k].range;
          acc.center += v[k].center;
          for (std::size_t i = 0; i < n; ++i) acc.slope[i] += v[k].slope[i];
        }
        return acc;
      }
      case NodeKind::Sub: {
        SlopeNode acc = v[0];
        acc.range -= v[1].range;
        acc.center -= v[1].center;
        for (std::size_t i = 0; i < n; ++i) acc.slope[i] -= v[1].slope[i];
        return acc;
      }
      case NodeKind::Neg: {
        SlopeNode acc = v[0];
        acc.range = -acc.range;
        acc.center = -acc.center;
        for (auto& s : acc.slope) s = -s;
        return acc;
      }
      case NodeKind::Mul: {
        SlopeNode acc = v[0];
        for (std::size_t k = 1; k < v.size(); ++k) acc = mul(acc, v[k]);
        return acc;
      }
      case NodeKind::Div: return div(v[0], v[1]);
      case NodeKind::Pow: return power(v[0], e.exponent());
      case NodeKind::Func: {
        const SlopeNode& u = v[0];
        const Interval dphi = derivative_over(e.function(), hull(u.range, u.center));
        SlopeNode r{apply(e.function(), u.range), apply(e.function(), u.center), std::vector<Interval>(n)};
        for (std::size_t i = 0; i < n; ++i) r.slope[i] = dphi * u.slope[i];
        return r;
      }
      default: return v[0];
    }
  }

  const Box& box_;
  std::span<const double> c_;
  PathTracker path_;
};

std::vector<double> center_or_mid(const Box& box, std::span<const double> center) {
  if (center.empty()) return box.midpoint();
  if (center.size() != box.dim()) throw std::invalid_argument("center dimension does not match box");
  std::vector<double> c(center.begin(), center.end());
  if (!box.contains(c)) throw std::invalid_argument("center lies outside the box");
  return c;
}

Interval narrowed(const Interval& form, const Interval& natural) {
  auto r = intersect(form, natural);
  if (!r) throw InconsistentEnclosure("enclosure " + to_string(form) + " misses natural " + to_string(natural));
  return *r;
}

}  // namespace

Interval natural_eval(const Expr& e, const Box& box) { return Natural(box).eval(e); }

SlopePair slope_pair(const Expr& e, const Box& box, std::span<const double> center) {
  const std::vector<double> c = center_or_mid(box, center);
  SlopeNode s = Slopes(box, c).eval(e);
  return {s.center, std::move(s.slope)};
}

Interval mean_value_form(const Expr& e, const Box& box, std::span<const double> center) {
  const std::vector<double> c = center_or_mid(box, center);
  const Interval natural = natural_eval(e, box);
  std::vector<Interval> point;
  for (double ci : c) point.emplace_back(ci);
  Interval acc = natural_eval(e, Box(point));
  const auto vars = free_vars(e);
  for (std::size_t i : vars) {
    const Interval g = natural_eval(simplify(diff(e, i)), box);
    acc += g * (box[i] - Interval(c[i]));
  }
  return narrowed(acc, natural);
}

Interval slope_form(const Expr& e, const Box& box, std::span<const double> center) {
  const std::vector<double> c = center_or_mid(box, center);
  const Interval natural = natural_eval(e, box);
  SlopeNode s = Slopes(box, c).eval(e);
  Interval acc = s.center;
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (s.slope[i] == Interval(0.0)) continue;
    acc += s.slope[i] * (box[i] - Interval(c[i]));
  }
  const Interval r = narrowed(acc, natural);
  // Slope arithmetic runs on e as written, while the derivative route sees
  // symbolically cancelled partials; keep whichever is tighter.
  if (contains_function(e, Function::Abs)) return r;
  return narrowed(r, mean_value_form(e, box, c));
}

Interval monotonic_refine(const Expr& e, const Box& box) {
  const Interval natural = natural_eval(e, box);
  std::vector<Interval> low = box.components();
  std::vector<Interval> high = box.components();
  bool any = false;
  for (std::size_t i : free_vars(e)) {
    if (box[i].is_point()) continue;
    const Interval g = natural_eval(simplify(diff(e, i)), box);
    if (g.lo() >= 0.0) {
      low[i] = Interval(box[i].lo());
      high[i] = Interval(box[i].hi());
      any = true;
    } else if (g.hi() <= 0.0) {
      low[i] = Interval(box[i].hi());
      high[i] = Interval(box[i].lo());
      any = true;
    }
  }
  if (!any) return natural;
  const double lo = natural_eval(e, Box(low)).lo();
  const double hi = natural_eval(e, Box(high)).hi();
  return narrowed(Interval(std::min(lo, hi), std::max(lo, hi)), natural);
}

Interval enclose(const Expr& e, const Box& box, RangeForm form) {
  switch (form) {
    case RangeForm::Natural: return natural_eval(e, box);
    case RangeForm::MeanValue: return mean_value_form(e, box);
    case RangeForm::Slope: return slope_form(e, box);
    case RangeForm::Monotone: return monotonic_refine(e, box);
    case RangeForm::Best: {
      constexpr std::array all{RangeForm::Natural, RangeForm::MeanValue, RangeForm::Slope,
                               RangeForm::Monotone};
      return best_enclosure(e, box, all);
    }
  }
  return natural_eval(e, box);
}

Interval best_enclosure(const Expr& e, const Box& box, std::span<const RangeForm> forms) {
  if (forms.empty()) throw std::invalid_argument("no range form selected");
  std::optional<Interval> acc;
  std::optional<UnsupportedNode> skipped;
  for (RangeForm f : forms) {
    Interval r;
    try {
      r = enclose(e, box, f);
    } catch (const UnsupportedNode& err) {
      skipped = err;
      continue;
    }
    if (!acc) {
      acc = r;
      continue;
    }
    auto both = intersect(*acc, r);
    if (!both) {
      throw InconsistentEnclosure(std::string(to_string(f)) + " enclosure " + to_string(r) +
                                  " is disjoint from " + to_string(*acc));
    }
    acc = *both;
  }
  if (!acc) throw *skipped;
  return *acc;
}

}  // namespace abb
