#include "abb/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "abb/errors.hpp"

namespace abb {

namespace {

thread_local Rounding tls_rounding = Rounding::Nearest;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

// Final step of every operation: optional outward widening, then checked
// construction.
Interval make(double lo, double hi) {
  if (tls_rounding == Rounding::Outward) {
    lo = std::nextafter(lo, -kInf);
    hi = std::nextafter(hi, kInf);
  }
  return Interval(lo, hi);
}

Interval clamp_unit(Interval a) {
  return Interval(std::max(a.lo(), -1.0), std::min(a.hi(), 1.0));
}

// True when some t = offset + 2*pi*k lies in [lo, hi].
bool hits_periodic(double lo, double hi, double offset) {
  const double k = std::ceil((lo - offset) / kTwoPi);
  return offset + kTwoPi * k <= hi;
}

}  // namespace

Rounding current_rounding() noexcept { return tls_rounding; }

ScopedRounding::ScopedRounding(Rounding mode) noexcept : saved_(tls_rounding) {
  tls_rounding = mode;
}

ScopedRounding::~ScopedRounding() { tls_rounding = saved_; }

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("interval endpoints must be finite");
  }
  if (lo > hi) {
    throw std::invalid_argument("interval lower endpoint exceeds upper endpoint");
  }
}

double Interval::mid() const noexcept { return 0.5 * (lo_ + hi_); }
double Interval::rad() const noexcept { return 0.5 * (hi_ - lo_); }
double Interval::mag() const noexcept { return std::max(std::fabs(lo_), std::fabs(hi_)); }

IntervalStats stats(const Interval& a) noexcept { return {a.mid(), a.rad(), a.mag()}; }

Interval operator+(const Interval& a, const Interval& b) {
  return make(a.lo() + b.lo(), a.hi() + b.hi());
}

Interval operator-(const Interval& a, const Interval& b) {
  return make(a.lo() - b.hi(), a.hi() - b.lo());
}

Interval operator*(const Interval& a, const Interval& b) {
  const double p[] = {a.lo() * b.lo(), a.lo() * b.hi(), a.hi() * b.lo(), a.hi() * b.hi()};
  return make(*std::min_element(std::begin(p), std::end(p)),
              *std::max_element(std::begin(p), std::end(p)));
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) {
    throw DomainError("division by interval " + to_string(b) + " containing zero");
  }
  const double q[] = {a.lo() / b.lo(), a.lo() / b.hi(), a.hi() / b.lo(), a.hi() / b.hi()};
  return make(*std::min_element(std::begin(q), std::end(q)),
              *std::max_element(std::begin(q), std::end(q)));
}

Interval operator-(const Interval& a) { return Interval(-a.hi(), -a.lo()); }

Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }
Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }

Interval arith(ArithOp op, const Interval& a, const Interval& b) {
  switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Div: return a / b;
  }
  throw std::logic_error("unknown arithmetic operation");
}

Interval sqr(const Interval& a) { return pow(a, 2); }

Interval pow(const Interval& a, int k) {
  if (k == 0) return Interval(1.0);
  if (k < 0) {
    if (a.contains_zero()) {
      throw DomainError("negative power of interval " + to_string(a) + " containing zero");
    }
    return Interval(1.0) / pow(a, -k);
  }
  if (k == 1) return a;
  const double pl = std::pow(a.lo(), k);
  const double ph = std::pow(a.hi(), k);
  if (k % 2 == 1) return make(pl, ph);
  if (a.lo() >= 0.0) return make(pl, ph);
  if (a.hi() <= 0.0) return make(ph, pl);
  Interval r = make(0.0, std::max(pl, ph));
  return Interval(0.0, r.hi());
}

Interval sin(const Interval& a) {
  if (a.width() >= kTwoPi) return Interval(-1.0, 1.0);
  const double s0 = std::sin(a.lo());
  const double s1 = std::sin(a.hi());
  double lo = std::min(s0, s1);
  double hi = std::max(s0, s1);
  if (hits_periodic(a.lo(), a.hi(), kHalfPi)) hi = 1.0;
  if (hits_periodic(a.lo(), a.hi(), -kHalfPi)) lo = -1.0;
  return clamp_unit(make(lo, hi));
}

Interval cos(const Interval& a) {
  if (a.width() >= kTwoPi) return Interval(-1.0, 1.0);
  const double c0 = std::cos(a.lo());
  const double c1 = std::cos(a.hi());
  double lo = std::min(c0, c1);
  double hi = std::max(c0, c1);
  if (hits_periodic(a.lo(), a.hi(), 0.0)) hi = 1.0;
  if (hits_periodic(a.lo(), a.hi(), std::numbers::pi)) lo = -1.0;
  return clamp_unit(make(lo, hi));
}

Interval exp(const Interval& a) {
  Interval r = make(std::exp(a.lo()), std::exp(a.hi()));
  return Interval(std::max(r.lo(), 0.0), r.hi());
}

Interval log(const Interval& a) {
  if (a.lo() <= 0.0) {
    throw DomainError("log of interval " + to_string(a) + " reaching non-positive values");
  }
  return make(std::log(a.lo()), std::log(a.hi()));
}

Interval sqrt(const Interval& a) {
  if (a.lo() < 0.0) {
    throw DomainError("sqrt of interval " + to_string(a) + " reaching negative values");
  }
  Interval r = make(std::sqrt(a.lo()), std::sqrt(a.hi()));
  return Interval(std::max(r.lo(), 0.0), r.hi());
}

Interval abs(const Interval& a) {
  if (a.lo() >= 0.0) return a;
  if (a.hi() <= 0.0) return -a;
  return Interval(0.0, a.mag());
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  const double lo = std::max(a.lo(), b.lo());
  const double hi = std::min(a.hi(), b.hi());
  if (lo > hi) return std::nullopt;
  return Interval(lo, hi);
}

std::string to_string(const Interval& a) {
  std::ostringstream os;
  os << a;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Interval& a) {
  return os << '[' << a.lo() << ", " << a.hi() << ']';
}

Box::Box(std::vector<Interval> components) : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("box must have at least one component");
}

Box::Box(std::initializer_list<Interval> components)
    : Box(std::vector<Interval>(components)) {}

std::vector<double> Box::midpoint() const {
  std::vector<double> m;
  m.reserve(dim());
  for (const auto& c : components_) m.push_back(c.mid());
  return m;
}

std::vector<double> Box::lower() const {
  std::vector<double> m;
  m.reserve(dim());
  for (const auto& c : components_) m.push_back(c.lo());
  return m;
}

std::vector<double> Box::upper() const {
  std::vector<double> m;
  m.reserve(dim());
  for (const auto& c : components_) m.push_back(c.hi());
  return m;
}

std::vector<double> Box::widths() const {
  std::vector<double> m;
  m.reserve(dim());
  for (const auto& c : components_) m.push_back(c.width());
  return m;
}

bool Box::contains(const std::vector<double>& point) const {
  if (point.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!components_[i].contains(point[i])) return false;
  }
  return true;
}

Box Box::with(std::size_t i, const Interval& value) const {
  Box b = *this;
  b.components_.at(i) = value;
  return b;
}

IntervalMatrix::IntervalMatrix(std::size_t n, bool symmetric)
    : n_(n), symmetric_(symmetric), entries_(n * n, Interval(0.0)) {}

void IntervalMatrix::set(std::size_t i, std::size_t j, const Interval& value) {
  entries_.at(i * n_ + j) = value;
  if (symmetric_) entries_.at(j * n_ + i) = value;
}

}  // namespace abb
