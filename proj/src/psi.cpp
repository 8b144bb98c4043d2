#include "fracbv/psi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracbv/numerics.hpp"

namespace fracbv {

namespace {

double admissible_bound(const PsiContext& ctx, double t) {
  return ctx.flux.bound() * std::exp(-ctx.source.max_beta(t));
}

void check_range(const PsiContext& ctx, double v, double t) {
  const double V = admissible_bound(ctx, t);
  if (!(std::abs(v) <= V * (1.0 + 1e-12)))
    throw std::range_error("psi: value escapes the flux interval [-M e^{-max B}, M e^{-max B}]");
}

}  // namespace

double forward_map(const PsiContext& ctx, double v, double t) {
  if (!(t >= 0.0)) throw std::domain_error("forward_map: t must be >= 0");
  const Flux& F = ctx.flux;
  if (F.is_power_law()) {
    const double p = F.exponent();
    return F.derivative_unchecked(v) * ctx.source.gamma(p, t);
  }
  return forward_map_quadrature(ctx, v, t);
}

double forward_map_quadrature(const PsiContext& ctx, double v, double t) {
  if (!(t >= 0.0)) throw std::domain_error("forward_map: t must be >= 0");
  if (std::isinf(t)) throw std::domain_error("forward_map: infinite time needs a power-law flux");
  const Flux& F = ctx.flux;
  return ctx.source.integrate(
      [&](double, double b) { return F.derivative(v * std::exp(b)); }, 0.0, t);
}

double psi(const PsiContext& ctx, double x, double t) {
  if (!(t > 0.0)) throw std::domain_error("psi: t must be > 0");
  if (x == 0.0) return 0.0;
  if (!ctx.flux.is_power_law()) return psi_root(ctx, x, t);
  const double p = ctx.flux.exponent();
  const double g = ctx.source.gamma(p, t);
  const double v = std::copysign(std::pow(std::abs(x) / g, 1.0 / p), x);
  check_range(ctx, v, t);
  return v;
}

double psi_root(const PsiContext& ctx, double x, double t) {
  if (!(t > 0.0)) throw std::domain_error("psi: t must be > 0");
  if (x == 0.0) return 0.0;
  const double V = admissible_bound(ctx, t);
  auto resid = [&](double v) { return forward_map_quadrature(ctx, v, t) - x; };
  // grow a bracket [inner, outer] from |v| = min(V, 1) towards the admissible bound
  const double sign = x > 0.0 ? 1.0 : -1.0;
  double inner = 0.0;
  double outer = std::min(V, 1.0);
  while (sign * resid(sign * outer) < 0.0) {
    if (outer == V) throw std::range_error("psi: root escapes the flux interval [-M e^{-max B}, M e^{-max B}]");
    inner = outer;
    outer = std::min(V, 4.0 * outer);
  }
  const double lo = x > 0.0 ? inner : -outer;
  const double hi = x > 0.0 ? outer : -inner;
  return bracketed_root(resid, lo, hi, ctx.root_tol * 1e-3 * outer);
}

HolderGap psi_holder_gap(const PsiContext& ctx, double z1, double z2, double t) {
  const auto& deg = ctx.flux.degeneracy();
  if (!deg) throw std::invalid_argument("psi_holder_gap: flux has no degeneracy metadata");
  const double lhs = std::abs(psi(ctx, z1, t) - psi(ctx, z2, t));
  const double g = ctx.source.gamma(deg->p, t);
  const double rhs = std::pow(std::abs(z1 - z2) / (deg->c0 * g), 1.0 / deg->p);
  return {lhs, rhs};
}

double flux_weighted_integral(const PsiContext& ctx, double w, double t) {
  const Flux& F = ctx.flux;
  if (F.is_power_law()) return F.value_unchecked(w) * ctx.source.gamma(F.exponent(), t);
  return ctx.source.integrate(
      [&](double, double b) { return F.value(w * std::exp(b)) * std::exp(-b); }, 0.0, t);
}

double psi_primitive(const PsiContext& ctx, double y, double t) {
  if (y == 0.0) return 0.0;
  if (ctx.flux.is_power_law()) {
    const double p = ctx.flux.exponent();
    const double e = 1.0 + 1.0 / p;
    return std::pow(std::abs(y), e) / e * std::pow(ctx.source.gamma(p, t), -1.0 / p);
  }
  const double w = psi(ctx, y, t);
  return y * w - flux_weighted_integral(ctx, w, t);
}

double speed_bound(const Flux& F, const SourceProfile& S, double T) {
  const double M = F.bound();
  if (F.is_power_law()) return std::pow(M * std::exp(S.sup_norm() * T), F.exponent());
  return std::max(std::abs(F.derivative(-M)), std::abs(F.derivative(M)));
}

}  // namespace fracbv
