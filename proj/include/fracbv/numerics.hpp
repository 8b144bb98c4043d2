#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace fracbv {

/// Thrown when an iterative method fails to converge or produces non-finite values.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Root of a monotone function on a sign-changing bracket [lo, hi].
/// Illinois-modified regula falsi, falling back to bisection steps whenever
/// the secant estimate stalls; the bracket always shrinks.
template <class F>
double bracketed_root(const F& g, double lo, double hi, double xtol = 0.0, int max_iter = 400) {
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) throw NumericalError("bracketed_root: bracket does not change sign");
  int side = 0;
  for (int it = 0; it < max_iter; ++it) {
    double x = (it % 3 == 2) ? 0.5 * (lo + hi) : (lo * ghi - hi * glo) / (ghi - glo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    if (!(x > lo && x < hi)) return x;  // interval collapsed to adjacent doubles
    const double gx = g(x);
    if (gx == 0.0) return x;
    if ((gx > 0.0) == (ghi > 0.0)) {
      hi = x;
      ghi = gx;
      if (side == -1) glo *= 0.5;
      side = -1;
    } else {
      lo = x;
      glo = gx;
      if (side == 1) ghi *= 0.5;
      side = 1;
    }
    if (hi - lo <= xtol) break;
  }
  return std::abs(glo) < std::abs(ghi) ? lo : hi;
}

/// Plain bisection for a predicate that is false on the left and true on the right.
template <class Pred>
double bisect_predicate(const Pred& right_side, double lo, double hi, int iters = 200) {
  for (int it = 0; it < iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (right_side(mid)) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

/// Maximizer of a concave function on [a, b] by golden-section search.
template <class F>
std::pair<double, double> golden_section_max(const F& f, double a, double b, double tol = 1e-12) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace fracbv
