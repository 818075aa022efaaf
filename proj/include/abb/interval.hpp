#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace abb {

// Endpoint rounding policy for interval operations.
//
// Nearest uses the hardware default for every endpoint. Outward additionally
// moves each computed endpoint one ulp away from the interior, which makes
// every result a conservative enclosure of the exact real image.
enum class Rounding { Nearest, Outward };

// The policy in effect for interval operations on the calling thread.
Rounding current_rounding() noexcept;

// Sets the calling thread's rounding policy for the lifetime of the guard.
class ScopedRounding {
 public:
  explicit ScopedRounding(Rounding mode) noexcept;
  ~ScopedRounding();
  ScopedRounding(const ScopedRounding&) = delete;
  ScopedRounding& operator=(const ScopedRounding&) = delete;

 private:
  Rounding saved_;
};

// Closed bounded real interval [lo, hi]; lo == hi is a point.
class Interval {
 public:
  constexpr Interval() noexcept = default;
  // Throws std::invalid_argument unless both endpoints are finite and lo <= hi.
  Interval(double lo, double hi);
  explicit Interval(double point) : Interval(point, point) {}

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  double mid() const noexcept;
  double rad() const noexcept;
  double mag() const noexcept;
  double width() const noexcept { return hi_ - lo_; }

  bool is_point() const noexcept { return lo_ == hi_; }
  bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
  bool contains_zero() const noexcept { return lo_ <= 0.0 && 0.0 <= hi_; }
  bool zero_in_interior() const noexcept { return lo_ < 0.0 && 0.0 < hi_; }
  bool subset_of(const Interval& other) const noexcept {
    return other.lo_ <= lo_ && hi_ <= other.hi_;
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

struct IntervalStats {
  double mid;
  double rad;
  double mag;
};

IntervalStats stats(const Interval& a) noexcept;

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
// Throws DomainError when b contains zero.
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);

Interval& operator+=(Interval& a, const Interval& b);
Interval& operator-=(Interval& a, const Interval& b);
Interval& operator*=(Interval& a, const Interval& b);

enum class ArithOp { Add, Sub, Mul, Div };
Interval arith(ArithOp op, const Interval& a, const Interval& b);

// Image of t -> t^k. Negative k requires 0 not in a.
Interval pow(const Interval& a, int k);
Interval sqr(const Interval& a);

Interval sin(const Interval& a);
Interval cos(const Interval& a);
Interval exp(const Interval& a);
Interval log(const Interval& a);
Interval sqrt(const Interval& a);
Interval abs(const Interval& a);

// Smallest interval containing both.
Interval hull(const Interval& a, const Interval& b);
// Empty optional when the intervals are disjoint.
std::optional<Interval> intersect(const Interval& a, const Interval& b);

std::string to_string(const Interval& a);
std::ostream& operator<<(std::ostream& os, const Interval& a);

// Axis-aligned box: one interval per variable.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> components);
  Box(std::initializer_list<Interval> components);

  std::size_t dim() const noexcept { return components_.size(); }
  const Interval& operator[](std::size_t i) const { return components_[i]; }
  const std::vector<Interval>& components() const noexcept { return components_; }

  std::vector<double> midpoint() const;
  std::vector<double> lower() const;
  std::vector<double> upper() const;
  std::vector<double> widths() const;
  bool contains(const std::vector<double>& point) const;
  // Copy with component i replaced.
  Box with(std::size_t i, const Interval& value) const;

 private:
  std::vector<Interval> components_;
};

// Square matrix of intervals, stored row-major.
class IntervalMatrix {
 public:
  IntervalMatrix() = default;
  explicit IntervalMatrix(std::size_t n, bool symmetric = true);

  std::size_t size() const noexcept { return n_; }
  bool symmetric() const noexcept { return symmetric_; }

  const Interval& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  // For symmetric matrices, sets (i,j) and (j,i) together.
  void set(std::size_t i, std::size_t j, const Interval& value);

 private:
  std::size_t n_ = 0;
  bool symmetric_ = true;
  std::vector<Interval> entries_;
};

}  // namespace abb
