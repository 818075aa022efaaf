#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abb/expr.hpp"
#include "abb/interval.hpp"
#include "abb/range.hpp"
#include "abb/symdiff.hpp"

namespace abb {

// How the interval Hessian is obtained.
//   IntervalDirect: interval automatic differentiation of f, the classical
//     baseline; alpha comes from the scaled Gerschgorin bound on it.
//   SymbolicSimplified: symbolic Hessian entries enclosed by a range form;
//     alpha comes from the row functions h_i.
enum class HessianRoute { IntervalDirect, SymbolicSimplified };

// Treatment of |h_ij| for entries whose enclosure has zero in its interior.
// Sign-stable entries always lose the absolute value in symbolic mode.
enum class AbsMode { MagConstant, SignDrop, ShiftSurrogate, LinearSurrogate };

// Which symbolic results go through simplify(): nothing, the Hessian
// entries, or the entries and every h_i.
enum class SimplifyLevel { None, Entries, Full };

std::string_view to_string(HessianRoute r);
std::string_view to_string(AbsMode m);
std::string_view to_string(SimplifyLevel s);
std::optional<HessianRoute> parse_route(std::string_view s);    // direct | symbolic
std::optional<AbsMode> parse_abs_mode(std::string_view s);      // mag | sign-drop | shift | linear
std::optional<SimplifyLevel> parse_simplify(std::string_view s);  // none | entries | full

// Positive weights d of the scaled Gerschgorin bound.
class ScalingVector {
 public:
  // Throws std::invalid_argument unless every component is finite and > 0.
  explicit ScalingVector(std::vector<double> d);
  // d = upper - lower. Throws for degenerate components.
  static ScalingVector widths(const Box& box);

  std::size_t size() const noexcept { return d_.size(); }
  double operator[](std::size_t i) const { return d_[i]; }
  const std::vector<double>& values() const noexcept { return d_; }

 private:
  std::vector<double> d_;
};

// alpha_i = max{0, -(lo(H_ii) - sum_{j!=i} mag(H_ij) d_j/d_i) / 2}.
std::vector<double> classical_alpha(const IntervalMatrix& h, const ScalingVector& d);

// The interval [lo(H_ii) - s_i, hi(H_ii) + s_i] with s_i the weighted
// off-diagonal magnitude sum; its lower end is the row bound of classical_alpha.
std::vector<Interval> gerschgorin_rows(const IntervalMatrix& h, const ScalingVector& d);

struct LinearAbs {
  double gamma;
  double beta;
};

// Best linear upper bound gamma*y + beta of |y| on [lo, hi], exact at both
// endpoints. Throws DegenerateInput for a point interval.
LinearAbs linear_abs_coeffs(const Interval& y);

// h_i(x) = h_ii(x) - sum_{j!=i} B_ij(x) d_j/d_i, where B_ij bounds |h_ij(x)|
// according to `mode` and the enclosure H(i,j).
Expr build_hi(const SymMatrix& hess, std::size_t i, const ScalingVector& d, const IntervalMatrix& h,
              AbsMode mode, bool simplify_result = true);

struct AlphaFromHi {
  std::vector<double> alpha;
  std::vector<Interval> enclosures;
};

// alpha_i = max{0, -lo(h_i(box)) / 2} with h_i enclosed by `form`.
AlphaFromHi alpha_from_hi(std::span<const Expr> hi, const Box& box, RangeForm form);

// Hessian enclosure by the chosen route. The symbolic route encloses
// hessian_sym(f, n, simplify_entries) entry-wise with `form`.
IntervalMatrix interval_hessian(const Expr& f, const Box& box, HessianRoute route, RangeForm form,
                                bool simplify_entries = true);

// g(x) = f(x) - sum_i alpha_i (ub_i - x_i)(x_i - lb_i); zero alphas are omitted.
Expr build_underestimator(const Expr& f, std::span<const double> alpha, const Box& box);

struct AnalysisOptions {
  HessianRoute route = HessianRoute::SymbolicSimplified;
  AbsMode abs = AbsMode::SignDrop;
  RangeForm form = RangeForm::Best;
  SimplifyLevel simplify = SimplifyLevel::Full;
  // Full-length override of the scaling vector; widths when absent.
  std::optional<std::vector<double>> d;
  // Outward-rounded interval arithmetic plus a certified bound from
  // natural_eval(g, box).
  bool rigorous = false;
  bool verify = true;
  std::uint64_t seed = 0;
  std::size_t underestimation_samples = 10000;
  std::size_t convexity_samples = 1000;
};

struct Verification {
  bool underestimation = true;
  bool convexity = true;
};

struct UnderestimatorReport {
  std::vector<double> alpha;
  IntervalMatrix hessian_enclosure;
  std::vector<Interval> hi_enclosures;
  // Symbolic route only.
  std::vector<Expr> hi;
  double lower_bound = 0.0;
  std::vector<double> minimizer;
  bool converged = true;
  std::optional<double> certified_bound;
  Expr underestimator;
  HessianRoute route = HessianRoute::SymbolicSimplified;
  AbsMode abs = AbsMode::SignDrop;
  RangeForm form = RangeForm::Best;
  SimplifyLevel simplify = SimplifyLevel::Full;
  bool rigorous = false;
  std::vector<double> d_used;
  Verification verified;
  std::vector<std::string> warnings;
};

// Full pipeline. Variables with a zero-width domain are fixed at their value
// and get alpha 0. Verification failures are reported in `verified` and
// `warnings` rather than thrown.
UnderestimatorReport analyze(const Expr& f, const Box& box, const AnalysisOptions& opt = {});

}  // namespace abb
