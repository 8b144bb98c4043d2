#include "fracbv/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracbv {

ShockState riemann_shock(const PsiContext& ctx, double w_minus, double w_plus, double x0, double t) {
  if (!(w_minus > w_plus)) throw std::invalid_argument("riemann_shock: need w_minus > w_plus");
  if (!(t >= 0.0)) throw std::domain_error("riemann_shock: t must be >= 0");
  const double lambda =
      (flux_weighted_integral(ctx, w_plus, t) - flux_weighted_integral(ctx, w_minus, t)) / (w_plus - w_minus);
  const double scale = std::exp(ctx.source.beta(t));
  return {x0 + lambda, w_minus * scale, w_plus * scale};
}

PiecewiseProfile riemann_profile(std::shared_ptr<const PsiContext> ctx, double w_minus, double w_plus,
                                 double x0, double t, double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("riemann_profile: empty window");
  PiecewiseProfile out(ctx, t);
  const double scale = out.scale();
  auto clip = [&](double x) { return std::clamp(x, lo, hi); };
  if (w_minus > w_plus) {
    const double s = clip(riemann_shock(*ctx, w_minus, w_plus, x0, t).position);
    out.append_constant(lo, s, w_minus * scale);
    out.append_constant(s, hi, w_plus * scale, true);
    return out;
  }
  const double e1 = clip(x0 + forward_map(*ctx, w_minus, t));
  const double e2 = clip(x0 + forward_map(*ctx, w_plus, t));
  out.append_constant(lo, e1, w_minus * scale);
  out.append_fan(e1, e2, x0);
  out.append_constant(e2, hi, w_plus * scale);
  return out;
}

Packet make_packet(const PsiContext& ctx, double x_n, double dx, double delta) {
  if (!ctx.flux.is_power_law()) throw std::invalid_argument("make_packet: packets need a power-law flux");
  if (!(dx > 0.0) || !(delta > 0.0)) throw std::invalid_argument("make_packet: dx and delta must be > 0");
  const double p = ctx.flux.exponent();
  const double t_n = ctx.source.gamma_inverse(p, dx / std::pow(delta, p));
  return {x_n, dx, delta, p, t_n};
}

FanEdges fan_edges(const PsiContext& ctx, const Packet& P, double t) {
  if (!(t >= 0.0)) throw std::domain_error("fan_edges: t must be >= 0");
  return {P.left() + forward_map(ctx, P.delta, t), P.right() + forward_map(ctx, -P.delta, t)};
}

void append_packet(PiecewiseProfile& out, const Packet& P) {
  const double t = out.time();
  const double xl = P.left();
  const double xr = P.right();
  if (t >= P.t_n) {
    out.append_fan(xl, P.x_n, xl);
    out.append_fan(P.x_n, xr, xr, true);
    return;
  }
  const FanEdges e = fan_edges(out.context(), P, t);
  const double zl = std::min(e.zeta_L, P.x_n);
  const double zr = std::max(e.zeta_R, P.x_n);
  const double plateau = P.delta * out.scale();
  out.append_fan(xl, zl, xl);
  out.append_constant(zl, P.x_n, plateau);
  out.append_constant(P.x_n, zr, -plateau, true);
  out.append_fan(zr, xr, xr);
}

PiecewiseProfile packet_profile(std::shared_ptr<const PsiContext> ctx, const Packet& P, double t) {
  PiecewiseProfile out(std::move(ctx), t);
  append_packet(out, P);
  return out;
}

double packet_solution(std::shared_ptr<const PsiContext> ctx, const Packet& P, double x, double t) {
  if (x < P.left() || x >= P.right()) return 0.0;
  return packet_profile(std::move(ctx), P, t)(x);
}

double planar_lift(const Evaluator1D& u, const Eigen::VectorXd& xi, double U_bar,
                   const Eigen::VectorXd& X, double t) {
  if (xi.size() != X.size()) throw std::invalid_argument("planar_lift: dimension mismatch");
  if (std::abs(xi.norm() - 1.0) > 1e-12) throw std::invalid_argument("planar_lift: xi must be a unit vector");
  return U_bar + u(xi.dot(X), t);
}

}  // namespace fracbv
