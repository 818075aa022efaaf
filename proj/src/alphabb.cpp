#include "abb/alphabb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "abb/errors.hpp"
#include "abb/hessian_ad.hpp"
#include "abb/minimize.hpp"
#include "abb/verify.hpp"

namespace abb {

std::string_view to_string(HessianRoute r) {
  return r == HessianRoute::IntervalDirect ? "direct" : "symbolic";
}

std::string_view to_string(AbsMode m) {
  switch (m) {
    case AbsMode::MagConstant: return "mag";
    case AbsMode::SignDrop: return "sign-drop";
    case AbsMode::ShiftSurrogate: return "shift";
    case AbsMode::LinearSurrogate: return "linear";
  }
  return "?";
}

std::string_view to_string(SimplifyLevel s) {
  switch (s) {
    case SimplifyLevel::None: return "none";
    case SimplifyLevel::Entries: return "entries";
    case SimplifyLevel::Full: return "full";
  }
  return "?";
}

std::optional<HessianRoute> parse_route(std::string_view s) {
  if (s == "direct") return HessianRoute::IntervalDirect;
  if (s == "symbolic") return HessianRoute::SymbolicSimplified;
  return std::nullopt;
}

std::optional<AbsMode> parse_abs_mode(std::string_view s) {
  for (AbsMode m : {AbsMode::MagConstant, AbsMode::SignDrop, AbsMode::ShiftSurrogate, AbsMode::LinearSurrogate}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::optional<SimplifyLevel> parse_simplify(std::string_view s) {
  for (SimplifyLevel l : {SimplifyLevel::None, SimplifyLevel::Entries, SimplifyLevel::Full}) {
    if (to_string(l) == s) return l;
  }
  return std::nullopt;
}

ScalingVector::ScalingVector(std::vector<double> d) : d_(std::move(d)) {
  for (double v : d_) {
    if (!std::isfinite(v) || v <= 0.0) throw std::invalid_argument("scaling vector components must be positive");
  }
}

ScalingVector ScalingVector::widths(const Box& box) { return ScalingVector(box.widths()); }

std::vector<Interval> gerschgorin_rows(const IntervalMatrix& h, const ScalingVector& d) {
  const std::size_t n = h.size();
  if (d.size() != n) throw std::invalid_argument("scaling vector length does not match the Hessian");
  std::vector<Interval> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) s += h(i, j).mag() * d[j] / d[i];
    }
    rows.emplace_back(h(i, i).lo() - s, h(i, i).hi() + s);
  }
  return rows;
}

std::vector<double> classical_alpha(const IntervalMatrix& h, const ScalingVector& d) {
  std::vector<double> alpha;
  for (const Interval& row : gerschgorin_rows(h, d)) alpha.push_back(std::max(0.0, -0.5 * row.lo()));
  return alpha;
}

LinearAbs linear_abs_coeffs(const Interval& y) {
  const double lo = y.lo();
  const double hi = y.hi();
  if (!(lo < hi)) throw DegenerateInput("linear surrogate needs a non-degenerate interval");
  const double w = hi - lo;
  return {(std::fabs(hi) - std::fabs(lo)) / w, (hi * std::fabs(lo) - lo * std::fabs(hi)) / w};
}

Expr build_hi(const SymMatrix& hess, std::size_t i, const ScalingVector& d, const IntervalMatrix& h,
              AbsMode mode, bool simplify_result) {
  const std::size_t n = hess.size();
  Expr acc = hess(i, i);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const Expr& hij = hess(i, j);
    if (hij.is_constant(0.0)) continue;
    const Interval y = h(i, j);
    Expr bound;
    if (!y.zero_in_interior()) {
      bound = y.lo() >= 0.0 ? hij : Expr::neg(hij);
    } else {
      switch (mode) {
        case AbsMode::MagConstant: bound = Expr::constant(y.mag()); break;
        case AbsMode::SignDrop: bound = Expr::func(Function::Abs, hij); break;
        case AbsMode::ShiftSurrogate:
          // sigma*h - lo(sigma*H) with sigma the sign of mid(H)
          bound = y.mid() >= 0.0 ? Expr::sub(hij, Expr::constant(y.lo()))
                                 : Expr::sub(Expr::constant(y.hi()), hij);
          break;
        case AbsMode::LinearSurrogate: {
          const LinearAbs c = linear_abs_coeffs(y);
          bound = Expr::add({Expr::mul({Expr::constant(c.gamma), hij}), Expr::constant(c.beta)});
          break;
        }
      }
    }
    const double ratio = d[j] / d[i];
    acc = Expr::sub(acc, ratio == 1.0 ? bound : Expr::mul({Expr::constant(ratio), bound}));
  }
  return simplify_result ? simplify(acc) : acc;
}

AlphaFromHi alpha_from_hi(std::span<const Expr> hi, const Box& box, RangeForm form) {
  AlphaFromHi r;
  for (const Expr& e : hi) {
    const Interval enc = enclose(e, box, form);
    r.enclosures.push_back(enc);
    r.alpha.push_back(std::max(0.0, -0.5 * enc.lo()));
  }
  return r;
}

IntervalMatrix interval_hessian(const Expr& f, const Box& box, HessianRoute route, RangeForm form,
                                bool simplify_entries) {
  if (route == HessianRoute::IntervalDirect) return interval_hessian_ad(f, box);
  const std::size_t n = box.dim();
  const SymMatrix s = hessian_sym(f, n, simplify_entries);
  IntervalMatrix h(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) h.set(i, j, enclose(s(i, j), box, form));
  }
  return h;
}

Expr build_underestimator(const Expr& f, std::span<const double> alpha, const Box& box) {
  if (alpha.size() != box.dim()) throw std::invalid_argument("alpha length does not match the box");
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 0.0) throw std::invalid_argument("alpha must be non-negative");
    if (alpha[i] == 0.0) continue;
    const Expr x = Expr::variable(i);
    const Expr up = Expr::sub(Expr::constant(box[i].hi()), x);
    const Expr low = box[i].lo() == 0.0 ? x : Expr::sub(x, Expr::constant(box[i].lo()));
    terms.push_back(Expr::mul({Expr::constant(alpha[i]), up, low}));
  }
  if (terms.empty()) return f;
  return Expr::sub(f, Expr::add(std::move(terms)));
}

namespace {

// The problem restricted to variables with a non-degenerate domain.
struct Reduced {
  Expr f;
  Box box;
  std::vector<std::size_t> active;  // reduced index -> original index
};

Reduced reduce(const Expr& f, const Box& box) {
  Reduced r;
  Expr e = f;
  std::vector<Interval> comps;
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (box[i].is_point()) {
      e = substitute(e, i, Expr::constant(box[i].lo()));
    } else {
      r.active.push_back(i);
      comps.push_back(box[i]);
    }
  }
  for (std::size_t k = 0; k < r.active.size(); ++k) {
    if (r.active[k] != k) e = substitute(e, r.active[k], Expr::variable(k));
  }
  r.f = e;
  if (!comps.empty()) r.box = Box(comps);
  return r;
}

}  // namespace

UnderestimatorReport analyze(const Expr& f, const Box& box, const AnalysisOptions& opt) {
  ScopedRounding rounding(opt.rigorous ? Rounding::Outward : current_rounding());
  const std::size_t n = box.dim();
  for (std::size_t v : free_vars(f)) {
    if (v >= n) throw std::invalid_argument("objective uses a variable outside the box");
  }
  if (opt.d && opt.d->size() != n) throw std::invalid_argument("scaling vector length does not match the box");

  UnderestimatorReport rep;
  rep.route = opt.route;
  rep.abs = opt.abs;
  rep.form = opt.form;
  rep.simplify = opt.simplify;
  rep.rigorous = opt.rigorous;
  rep.alpha.assign(n, 0.0);
  rep.hessian_enclosure = IntervalMatrix(n, true);
  rep.hi_enclosures.assign(n, Interval(0.0));
  rep.d_used = opt.d ? *opt.d : box.widths();

  const Reduced red = reduce(f, box);
  const std::size_t m = red.active.size();
  if (m < n) rep.warnings.push_back(std::to_string(n - m) + " zero-width variable(s) fixed at their value");

  if (m > 0) {
    std::vector<double> dr;
    for (std::size_t k : red.active) dr.push_back(rep.d_used[k]);
    const ScalingVector d(dr);

    IntervalMatrix h;
    std::vector<double> alpha;
    std::vector<Interval> rows;
    if (opt.route == HessianRoute::IntervalDirect) {
      h = interval_hessian_ad(red.f, red.box);
      alpha = classical_alpha(h, d);
      rows = gerschgorin_rows(h, d);
    } else {
      const SymMatrix s = hessian_sym(red.f, m, opt.simplify != SimplifyLevel::None);
      h = IntervalMatrix(m, true);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) h.set(i, j, enclose(s(i, j), red.box, opt.form));
      }
      std::vector<Expr> hi;
      for (std::size_t i = 0; i < m; ++i) {
        hi.push_back(build_hi(s, i, d, h, opt.abs, opt.simplify == SimplifyLevel::Full));
      }
      for (std::size_t i = 0; i < m; ++i) {
        Interval enc;
        try {
          enc = enclose(hi[i], red.box, opt.form);
        } catch (const UnsupportedNode&) {
          enc = natural_eval(hi[i], red.box);
          rep.warnings.push_back("h" + std::to_string(red.active[i] + 1) + " contains abs; " +
                                 std::string(to_string(opt.form)) + " form replaced by natural evaluation");
        }
        rows.push_back(enc);
        alpha.push_back(std::max(0.0, -0.5 * enc.lo()));
      }
      // Report h_i in the original variable numbering.
      for (Expr e : hi) {
        for (std::size_t k = m; k-- > 0;) {
          if (red.active[k] != k) e = substitute(e, k, Expr::variable(red.active[k]));
        }
        rep.hi.push_back(e);
      }
    }
    for (std::size_t a = 0; a < m; ++a) {
      rep.alpha[red.active[a]] = alpha[a];
      rep.hi_enclosures[red.active[a]] = rows[a];
      for (std::size_t b = a; b < m; ++b) rep.hessian_enclosure.set(red.active[a], red.active[b], h(a, b));
    }
  }

  rep.underestimator = build_underestimator(f, rep.alpha, box);
  const MinimizeResult mr = convex_lower_bound(rep.underestimator, box);
  rep.lower_bound = mr.value;
  rep.minimizer = mr.minimizer;
  rep.converged = mr.converged;
  if (!mr.converged) rep.warnings.push_back("minimizer stopped after " + std::to_string(mr.iterations) + " iterations without converging");
  if (opt.rigorous) rep.certified_bound = natural_eval(rep.underestimator, box).lo();

  if (opt.verify) {
    rep.verified.underestimation =
        verify_underestimation(f, rep.underestimator, box, opt.underestimation_samples, opt.seed);
    rep.verified.convexity = verify_convexity_sampled(rep.underestimator, box, opt.convexity_samples, opt.seed);
    if (!rep.verified.underestimation) rep.warnings.push_back("sampled underestimation check failed");
    if (!rep.verified.convexity) rep.warnings.push_back("sampled convexity check failed");
  }
  return rep;
}

}  // namespace abb
