#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fracbv/numerics.hpp"

namespace fracbv {

/// Piecewise-constant source coefficient alpha(t) on [0, inf) for the
/// balance law u_t + f(u)_x = alpha(t) u.
///
/// Piece k covers [starts[k], starts[k+1]) with value values[k]; the last
/// piece extends to infinity. The primitive B(t) is piecewise linear, so
/// every integral of exp(k B) has a closed form per piece.
class SourceProfile {
 public:
  enum class Kind { zero, constant, piecewise };

  static SourceProfile zero();
  static SourceProfile constant(double a);
  /// `breakpoints` are the interior switch times (strictly increasing, > 0);
  /// `values` has one more entry than `breakpoints`.
  static SourceProfile piecewise(std::vector<double> breakpoints, std::vector<double> values);

  Kind kind() const { return kind_; }
  /// ||alpha||_inf
  double sup_norm() const { return sup_norm_; }
  const std::vector<double>& starts() const { return starts_; }
  const std::vector<double>& values() const { return values_; }

  double alpha(double t) const;
  /// B(t) = int_0^t alpha.
  double beta(double t) const;
  double max_beta(double t) const;
  double min_beta(double t) const;

  /// int_{t0}^{t1} exp(k B(s)) ds for any real k; t1 may be +inf.
  double exp_integral(double k, double t0, double t1) const;

  double gamma(double p, double t) const;
  double gamma_tail(double p) const;
  double gamma_inverse(double p, double target) const;

  /// int_{t0}^{t1} g(s, B(s)) ds by adaptive Gauss-Kronrod (relative tolerance `tol`),
  /// split at the breakpoints of alpha so every panel sees a smooth integrand.
  template <class G>
  double integrate(const G& g, double t0, double t1, double tol = 1e-14) const {
    if (!(t1 > t0)) return 0.0;
    double sum = 0.0;
    double lo = t0;
    for (std::size_t k = 0; k < starts_.size() && lo < t1; ++k) {
      const double end = (k + 1 < starts_.size()) ? starts_[k + 1] : kInf;
      if (end <= lo) continue;
      const double hi = end < t1 ? end : t1;
      const double b0 = beta(lo);
      const double a = values_[k];
      // Boost compares an unscaled error estimate with a scaled tolerance, so each
      // panel is mapped onto [-1, 1] first
      const double mid = 0.5 * (lo + hi);
      const double half = 0.5 * (hi - lo);
      auto integrand = [&](double z) {
        const double s = mid + half * z;
        return half * g(s, b0 + a * (s - lo));
      };
      sum += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(integrand, -1.0, 1.0, 12, tol);
      lo = hi;
    }
    if (!std::isfinite(sum)) throw NumericalError("integrate: non-finite integral");
    return sum;
  }

 private:
  SourceProfile() = default;
  std::size_t piece_index(double t) const;

  Kind kind_ = Kind::zero;
  std::vector<double> starts_{0.0};
  std::vector<double> values_{0.0};
  std::vector<double> beta_at_start_{0.0};
  double sup_norm_ = 0.0;
};

double beta(const SourceProfile& S, double t);
/// gamma_p(t) = int_0^t exp(p B(s)) ds.
double gamma(const SourceProfile& S, double p, double t);
/// B* = gamma_p(inf), possibly +inf.
double gamma_tail(const SourceProfile& S, double p);
/// Unique t with gamma_p(t) = target, or +inf when target >= B*.
double gamma_inverse(const SourceProfile& S, double p, double target);

}  // namespace fracbv
