#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "fracbv/flux.hpp"
#include "fracbv/source_profile.hpp"

namespace fracbv {

struct MeshRun {
  double x_lo;
  double x_hi;
  int cells;                   ///< >= 8
  double cfl = 0.9;            ///< in (0, 1)
  double t_end;
  std::vector<double> snapshots;  ///< output times in (0, t_end]; t_end is always recorded
  long max_steps = 50000000;
};

struct Snapshot {
  double time;
  Eigen::VectorXd u;  ///< cell averages
};

/// First-order Godunov scheme for u_t + f(u)_x = alpha(t) u with zero exterior state.
/// Each step transports with the exact Riemann flux, then multiplies by e^{B(t+dt) - B(t)}.
/// Throws fracbv::NumericalError when a non-finite value appears.
std::vector<Snapshot> godunov_solve(const Flux& F, const SourceProfile& S, const Eigen::VectorXd& u0,
                                    const MeshRun& run);

/// Exact Riemann flux for convex f with minimum at `sonic`.
double godunov_flux(const Flux& F, double sonic, double ul, double ur);

/// Cell averages from an exact primitive: integral(a, b) / h on each cell.
Eigen::VectorXd cell_averages(const std::function<double(double, double)>& integral, double x_lo, double x_hi,
                              int cells);

/// sum |u_i - v_i| h
double l1_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double h);

}  // namespace fracbv
