#include "abb/verify.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "abb/symdiff.hpp"

namespace abb {

namespace {

constexpr std::array<unsigned, 16> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

std::vector<std::vector<double>> halton_points(const Box& box, std::size_t count, std::uint64_t seed) {
  if (box.dim() > kPrimes.size()) throw std::invalid_argument("Halton sampling supports at most 16 variables");
  std::vector<std::vector<double>> pts(count, std::vector<double>(box.dim()));
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < box.dim(); ++i) {
      const double u = radical_inverse(k + 1 + seed, kPrimes[i]);
      pts[k][i] = box[i].lo() + u * box[i].width();
    }
  }
  return pts;
}

double min_eigenvalue(std::vector<double> a, std::size_t n, double tol) {
  if (n == 0) return 0.0;
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  double total = 0.0;
  for (double v : a) total += v * v;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    }
    if (std::sqrt(off) <= tol * std::sqrt(total) || off == 0.0) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  double m = at(0, 0);
  for (std::size_t i = 1; i < n; ++i) m = std::min(m, at(i, i));
  return m;
}

bool verify_underestimation(const Expr& f, const Expr& g, const Box& box, std::size_t samples,
                            std::uint64_t seed) {
  for (const auto& x : halton_points(box, samples, seed)) {
    if (eval_point(f, x) < eval_point(g, x) - 1e-9) return false;
  }
  return true;
}

bool verify_convexity_sampled(const Expr& g, const Box& box, std::size_t samples, std::uint64_t seed) {
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (!box[i].is_point()) active.push_back(i);
  }
  const std::size_t m = active.size();
  if (m == 0) return true;
  const SymMatrix h = hessian_sym(g, box.dim(), false);
  std::vector<double> a(m * m);
  for (const auto& x : halton_points(box, samples, seed)) {
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = r; c < m; ++c) {
        a[r * m + c] = a[c * m + r] = eval_point(h(active[r], active[c]), x);
      }
    }
    if (min_eigenvalue(a, m) < -1e-7) return false;
  }
  return true;
}

}  // namespace abb
