#include "fracbv/source_profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracbv {

namespace {

// int_0^len exp(k (b0 + a s)) ds, len may be +inf.
double piece_exp_integral(double k, double b0, double a, double len) {
  const double scale = std::exp(k * b0);
  const double rate = k * a;
  if (std::isinf(len)) {
    if (rate < 0.0) return scale / (-rate);
    return kInf;
  }
  if (rate == 0.0) return scale * len;
  return scale * std::expm1(rate * len) / rate;
}

}  // namespace

SourceProfile SourceProfile::zero() { return SourceProfile{}; }

SourceProfile SourceProfile::constant(double a) {
  if (!std::isfinite(a)) throw std::invalid_argument("constant source must be finite");
  SourceProfile S;
  S.kind_ = Kind::constant;
  S.values_ = {a};
  S.sup_norm_ = std::abs(a);
  return S;
}

SourceProfile SourceProfile::piecewise(std::vector<double> breakpoints, std::vector<double> values) {
  if (values.size() != breakpoints.size() + 1)
    throw std::invalid_argument("piecewise source: need exactly one more value than breakpoints");
  double prev = 0.0;
  for (double b : breakpoints) {
    if (!(b > prev) || !std::isfinite(b))
      throw std::invalid_argument("piecewise source: breakpoints must be positive and strictly increasing");
    prev = b;
  }
  SourceProfile S;
  S.kind_ = Kind::piecewise;
  S.starts_.assign(1, 0.0);
  S.starts_.insert(S.starts_.end(), breakpoints.begin(), breakpoints.end());
  S.values_ = std::move(values);
  S.beta_at_start_.assign(S.starts_.size(), 0.0);
  for (std::size_t k = 1; k < S.starts_.size(); ++k) {
    S.beta_at_start_[k] = S.beta_at_start_[k - 1] + S.values_[k - 1] * (S.starts_[k] - S.starts_[k - 1]);
  }
  S.sup_norm_ = 0.0;
  for (double v : S.values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("piecewise source: values must be finite");
    S.sup_norm_ = std::max(S.sup_norm_, std::abs(v));
  }
  return S;
}

std::size_t SourceProfile::piece_index(double t) const {
  auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
  return static_cast<std::size_t>(it - starts_.begin()) - 1;
}

double SourceProfile::alpha(double t) const {
  if (t < 0.0) throw std::domain_error("alpha: t must be >= 0");
  return values_[piece_index(t)];
}

double SourceProfile::beta(double t) const {
  if (t < 0.0) throw std::domain_error("beta: t must be >= 0");
  const std::size_t k = piece_index(t);
  return beta_at_start_[k] + values_[k] * (t - starts_[k]);
}

double SourceProfile::max_beta(double t) const {
  double m = std::max(0.0, beta(t));
  for (std::size_t k = 1; k < starts_.size() && starts_[k] < t; ++k) m = std::max(m, beta_at_start_[k]);
  return m;
}

double SourceProfile::min_beta(double t) const {
  double m = std::min(0.0, beta(t));
  for (std::size_t k = 1; k < starts_.size() && starts_[k] < t; ++k) m = std::min(m, beta_at_start_[k]);
  return m;
}

double SourceProfile::exp_integral(double k, double t0, double t1) const {
  if (t0 < 0.0) throw std::domain_error("exp_integral: t0 must be >= 0");
  if (!(t1 > t0)) return 0.0;
  double sum = 0.0;
  for (std::size_t j = piece_index(t0); j < starts_.size(); ++j) {
    const double lo = std::max(t0, starts_[j]);
    const double end = (j + 1 < starts_.size()) ? starts_[j + 1] : kInf;
    const double hi = std::min(end, t1);
    if (hi > lo) sum += piece_exp_integral(k, beta(lo), values_[j], hi - lo);
    if (end >= t1) break;
  }
  return sum;
}

double SourceProfile::gamma(double p, double t) const {
  if (!(p >= 1.0)) throw std::domain_error("gamma: p must be >= 1");
  if (!(t >= 0.0)) throw std::domain_error("gamma: t must be >= 0");
  return exp_integral(p, 0.0, t);
}

double SourceProfile::gamma_tail(double p) const {
  if (!(p >= 1.0)) throw std::domain_error("gamma_tail: p must be >= 1");
  return exp_integral(p, 0.0, kInf);
}

double SourceProfile::gamma_inverse(double p, double target) const {
  if (!(p >= 1.0)) throw std::domain_error("gamma_inverse: p must be >= 1");
  if (!(target >= 0.0)) throw std::domain_error("gamma_inverse: target must be >= 0");
  if (target == 0.0) return 0.0;
  if (target >= gamma_tail(p)) return kInf;
  double cum = 0.0;
  for (std::size_t j = 0; j < starts_.size(); ++j) {
    const double end = (j + 1 < starts_.size()) ? starts_[j + 1] : kInf;
    const double b0 = beta_at_start_[j];
    const double piece = piece_exp_integral(p, b0, values_[j], end - starts_[j]);
    if (target < cum + piece) {
      const double rem = (target - cum) * std::exp(-p * b0);
      const double rate = p * values_[j];
      double dt = rate == 0.0 ? rem : std::log1p(rem * rate) / rate;
      double t = starts_[j] + dt;
      // one Newton polish on the monotone map; gamma' = exp(p B)
      const double resid = gamma(p, t) - target;
      t -= resid / std::exp(p * beta(t));
      return std::max(t, starts_[j]);
    }
    cum += piece;
  }
  return kInf;
}

double beta(const SourceProfile& S, double t) { return S.beta(t); }
double gamma(const SourceProfile& S, double p, double t) { return S.gamma(p, t); }
double gamma_tail(const SourceProfile& S, double p) { return S.gamma_tail(p); }
double gamma_inverse(const SourceProfile& S, double p, double target) { return S.gamma_inverse(p, target); }

}  // namespace fracbv
