#pragma once

#include <functional>
#include <memory>

#include <Eigen/Dense>

#include "fracbv/profile.hpp"

namespace fracbv {

struct ShockState {
  double position;
  double left;   ///< w_minus e^{B(t)}
  double right;  ///< w_plus e^{B(t)}
};

/// Shock emanating from a single jump w_minus > w_plus at x0:
/// position x0 + lambda(t), lambda(t) = (w+ - w-)^{-1} int_0^t [f(w+ e^B) - f(w- e^B)] e^{-B}.
ShockState riemann_shock(const PsiContext& ctx, double w_minus, double w_plus, double x0, double t);

/// Profile of the Riemann problem (w_minus | w_plus at x0) restricted to the window [lo, hi).
/// Shock if w_minus > w_plus, centered fan otherwise.
PiecewiseProfile riemann_profile(std::shared_ptr<const PsiContext> ctx, double w_minus, double w_plus,
                                 double x0, double t, double lo, double hi);

/// Antisymmetric packet: delta on (x_n - dx, x_n), -delta on (x_n, x_n + dx), zero elsewhere.
struct Packet {
  double x_n;
  double dx;
  double delta;
  double p;
  double t_n;  ///< interaction time, +inf if the fan edges never meet
  double left() const { return x_n - dx; }
  double right() const { return x_n + dx; }
};

/// Packet with t_n solving gamma_p(t_n) = dx / delta^p. Needs a power-law flux.
Packet make_packet(const PsiContext& ctx, double x_n, double dx, double delta);

struct FanEdges {
  double zeta_L;  ///< Psi(zeta_L - x_L, t) = delta
  double zeta_R;  ///< Psi(zeta_R - x_R, t) = -delta
};

/// Inner edges of the two rarefaction fans, ignoring the interaction (t may be +inf).
FanEdges fan_edges(const PsiContext& ctx, const Packet& P, double t);

/// Exact profile of a single packet at time t > 0. For t >= t_n the two fans meet
/// at the stationary shock x_n.
PiecewiseProfile packet_profile(std::shared_ptr<const PsiContext> ctx, const Packet& P, double t);

/// Appends the packet's regions to an existing profile (regions must follow on).
void append_packet(PiecewiseProfile& out, const Packet& P);

double packet_solution(std::shared_ptr<const PsiContext> ctx, const Packet& P, double x, double t);

using Evaluator1D = std::function<double(double x, double t)>;

/// U(X, t) = U_bar + u(xi . X, t) for a unit direction xi.
double planar_lift(const Evaluator1D& u, const Eigen::VectorXd& xi, double U_bar,
                   const Eigen::VectorXd& X, double t);

}  // namespace fracbv
