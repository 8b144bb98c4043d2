#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "fracbv/variation.hpp"

namespace fracbv {

/// Continuous solution u = sum_n w_n(x - x_n, t) of u_t + (|u|^{p+1}/(p+1))_x = 0
/// on [0, T], and the transport coefficient c = h(f'(u)).
/// Packet n sits on [x_n, x_n + 2 dx_n] with x_1 = 0, x_n = 2 sum_{m<n} dx_m.
struct TriangularSetup {
  double p;
  double s;  ///< 1/p
  double T;
  int N;
  double dt;  ///< RK4 step
  std::function<double(double)> h;
  std::vector<double> dx;  ///< dx_n = 1/(n log^2(n+1))
  std::vector<double> tn;  ///< t_n = log(n+1)/log 2 (T + 1)
  std::vector<double> dp;  ///< delta_n^p = dx_n / t_n
  std::vector<double> x;   ///< left end of packet n
};

/// dt = 0 selects T / 2^14; an empty h selects the identity.
TriangularSetup make_triangular_setup(double p, double T, int N, std::function<double(double)> h = {},
                                      double dt = 0.0);

/// w_n at local coordinate x in [0, 2 dx_n] (zero outside), 0 <= t <= T.
double w_n_eval(const TriangularSetup& S, int n, double x, double t);

/// One of the four branch formulas of w_n, evaluated without its domain test (seam checks).
double w_n_branch(const TriangularSetup& S, int n, int branch, double x, double t);

double u_eval(const TriangularSetup& S, double x, double t);

/// c(x, t) = h(f'(u(x, t)))
double transport_velocity(const TriangularSetup& S, double x, double t);

/// X(t1) for dX/dt = c(X, t), X(t0) = x0, classical RK4 with step <= dt.
double characteristic_flow(const TriangularSetup& S, double x0, double t0, double t1, double dt);
double characteristic_flow(const TriangularSetup& S, double x0, double t);

/// Flow of sorted starting points to time t. The step is halved (up to `max_halvings`
/// times) whenever the image is not strictly increasing.
Eigen::VectorXd flow_map(const TriangularSetup& S, const Eigen::VectorXd& x0, double t, int max_halvings = 6);

/// Alternating data: -1 on (2^{-2k}, 2^{-2k+1}), +1 on (2^{-2k-1}, 2^{-2k}), +1 for x > 1/2 or x < 0.
double alternating_v0(double x);

/// v(x, t) = v0(x0) where X(t, x0) = x, found by monotone shooting. With `jacobian`
/// the conservative dilution factor (dX/dx0)^{-1} is applied.
double v_eval(const TriangularSetup& S, const std::function<double(double)>& v0, double x, double t,
              bool jacobian = false);

struct VDivergence {
  std::vector<double> y;  ///< y_n = 1.5 2^{-n}, n = 1..Nv+1
  std::vector<double> z;  ///< X(t, y_n)
  std::vector<double> v;  ///< v(z_n, t) by backward tracing
  double sum;             ///< sum_{n <= Nv} |v_n - v_{n+1}|^{1/s'}
};

/// Double precision resolves the dyadic points y_n only while 2^{-n} stays far above
/// the rounding of X(t, y_n) ~ dx_1 t / t_1; Nv <= 40 is safe.
VDivergence v_divergence_sums(const TriangularSetup& S, const std::function<double(double)>& v0, double t,
                              double s_prime, int Nv);

/// Largest jump between adjacent branch formulas at the seams of every packet at time t.
double seam_defect(const TriangularSetup& S, double t);

/// 4 (dx_n / t_n)^{1/(1+p eps)} for n = 1..N, with running sums.
std::vector<PartialSum> triangular_tv_lower_bounds(const TriangularSetup& S, double eps, int N);

/// Samples u on packet n's support: every seam plus K points per branch.
SampledFunction sample_packet(const TriangularSetup& S, int n, double t, int K = 16);

}  // namespace fracbv
