#include "fracbv/triangular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracbv/numerics.hpp"

namespace fracbv {

namespace {

double spow(double a, double s) { return std::pow(std::max(0.0, a), s); }

// f'(u) for the power law
double dflux(double u, double p) { return std::copysign(std::pow(std::abs(u), p), u); }

double velocity_bound(const TriangularSetup& S) {
  double dpmax = 0.0;
  for (double d : S.dp) dpmax = std::max(dpmax, d);
  double c = 0.0;
  for (int k = -500; k <= 500; ++k) c = std::max(c, std::abs(S.h(dpmax * k / 500.0)));
  return c;
}

}  // namespace

TriangularSetup make_triangular_setup(double p, double T, int N, std::function<double(double)> h, double dt) {
  if (!(p >= 1.0)) throw std::invalid_argument("triangular: p must be >= 1");
  if (!(T > 0.0)) throw std::invalid_argument("triangular: T must be > 0");
  if (N < 1) throw std::invalid_argument("triangular: N must be >= 1");
  if (dt < 0.0) throw std::invalid_argument("triangular: dt must be >= 0");
  TriangularSetup S;
  S.p = p;
  S.s = 1.0 / p;
  S.T = T;
  S.N = N;
  S.dt = dt > 0.0 ? dt : T / 16384.0;
  S.h = h ? std::move(h) : [](double v) { return v; };
  double left = 0.0;
  for (int n = 1; n <= N; ++n) {
    const double l = std::log(n + 1.0);
    const double dx = 1.0 / (n * l * l);
    const double tn = l / std::log(2.0) * (T + 1.0);
    S.dx.push_back(dx);
    S.tn.push_back(tn);
    S.dp.push_back(dx / tn);
    S.x.push_back(left);
    left += 2.0 * dx;
  }
  return S;
}

double w_n_branch(const TriangularSetup& S, int n, int branch, double x, double t) {
  const std::size_t k = static_cast<std::size_t>(n - 1);
  const double dx = S.dx.at(k);
  const double tn = S.tn[k];
  switch (branch) {
    case 1: return spow(x / t, S.s);
    case 2: return spow((dx - x) / (tn - t), S.s);
    case 3: return -spow((x - dx) / (tn - t), S.s);
    case 4: return -spow((2.0 * dx - x) / t, S.s);
    default: throw std::invalid_argument("w_n_branch: branch must be 1..4");
  }
}

double w_n_eval(const TriangularSetup& S, int n, double x, double t) {
  if (n < 1 || n > S.N) throw std::invalid_argument("w_n_eval: packet index out of range");
  if (!(t >= 0.0 && t <= S.T)) throw std::domain_error("w_n_eval: need 0 <= t <= T");
  const std::size_t k = static_cast<std::size_t>(n - 1);
  const double dx = S.dx[k];
  if (!(x > 0.0 && x < 2.0 * dx)) return 0.0;
  const double edge = S.dp[k] * t;
  if (x < edge) return w_n_branch(S, n, 1, x, t);
  if (x <= dx) return w_n_branch(S, n, 2, x, t);
  if (x < 2.0 * dx - edge) return w_n_branch(S, n, 3, x, t);
  return w_n_branch(S, n, 4, x, t);
}

double u_eval(const TriangularSetup& S, double x, double t) {
  if (x <= 0.0 || x >= S.x.back() + 2.0 * S.dx.back()) return 0.0;
  const auto it = std::upper_bound(S.x.begin(), S.x.end(), x);
  const int n = static_cast<int>(it - S.x.begin());
  return w_n_eval(S, n, x - S.x[static_cast<std::size_t>(n - 1)], t);
}

double transport_velocity(const TriangularSetup& S, double x, double t) {
  return S.h(dflux(u_eval(S, x, t), S.p));
}

double characteristic_flow(const TriangularSetup& S, double x0, double t0, double t1, double dt) {
  if (!(t0 >= 0.0 && t1 >= t0 && t1 <= S.T)) throw std::domain_error("characteristic_flow: need 0 <= t0 <= t1 <= T");
  if (!(dt > 0.0)) throw std::invalid_argument("characteristic_flow: dt must be > 0");
  if (t1 == t0) return x0;
  const long steps = static_cast<long>(std::ceil((t1 - t0) / dt));
  const double h = (t1 - t0) / static_cast<double>(steps);
  double X = x0;
  for (long k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    const double k1 = transport_velocity(S, X, t);
    const double k2 = transport_velocity(S, X + 0.5 * h * k1, t + 0.5 * h);
    const double k3 = transport_velocity(S, X + 0.5 * h * k2, t + 0.5 * h);
    const double k4 = transport_velocity(S, X + h * k3, std::min(t + h, t1));
    X += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (!std::isfinite(X)) throw NumericalError("characteristic_flow: non-finite trajectory");
  return X;
}

double characteristic_flow(const TriangularSetup& S, double x0, double t) {
  return characteristic_flow(S, x0, 0.0, t, S.dt);
}

Eigen::VectorXd flow_map(const TriangularSetup& S, const Eigen::VectorXd& x0, double t, int max_halvings) {
  for (Eigen::Index i = 1; i < x0.size(); ++i)
    if (!(x0[i] > x0[i - 1])) throw std::invalid_argument("flow_map: starting points must be strictly increasing");
  double dt = S.dt;
  for (int attempt = 0; attempt <= max_halvings; ++attempt, dt *= 0.5) {
    Eigen::VectorXd X(x0.size());
    for (Eigen::Index i = 0; i < x0.size(); ++i) X[i] = characteristic_flow(S, x0[i], 0.0, t, dt);
    bool ordered = true;
    for (Eigen::Index i = 1; i < X.size() && ordered; ++i) ordered = X[i] > X[i - 1];
    if (ordered) return X;
  }
  throw NumericalError("flow_map: order preservation fails at every step size tried");
}

double alternating_v0(double x) {
  if (x <= 0.0 || x > 0.5) return 1.0;
  int e = 0;
  std::frexp(x, &e);  // x in [2^{e-1}, 2^e), i.e. the interval (2^{-m}, 2^{-m+1}) with m = 1 - e
  const int m = 1 - e;
  return m % 2 == 0 ? -1.0 : 1.0;
}

double v_eval(const TriangularSetup& S, const std::function<double(double)>& v0, double x, double t, bool jacobian) {
  if (!(t >= 0.0 && t <= S.T)) throw std::domain_error("v_eval: need 0 <= t <= T");
  if (t == 0.0) return v0(x);
  auto miss = [&](double z) { return characteristic_flow(S, z, t) - x; };
  double w = 1.05 * velocity_bound(S) * t + 1e-12 * (1.0 + std::abs(x));
  double lo = x - w;
  double hi = x + w;
  int grow = 0;
  while (miss(lo) > 0.0 || miss(hi) < 0.0) {
    if (++grow > 60) throw NumericalError("v_eval: cannot bracket the foot of the characteristic");
    w *= 2.0;
    lo = x - w;
    hi = x + w;
  }
  const double x0 = bracketed_root(miss, lo, hi);
  double v = v0(x0);
  if (jacobian) {
    const double eta = 1e-7 * std::max(1.0, std::abs(x0));
    const double J = (characteristic_flow(S, x0 + eta, t) - characteristic_flow(S, x0 - eta, t)) / (2.0 * eta);
    v /= J;
  }
  return v;
}

VDivergence v_divergence_sums(const TriangularSetup& S, const std::function<double(double)>& v0, double t,
                              double s_prime, int Nv) {
  if (!(s_prime > 0.0 && s_prime <= 1.0)) throw std::invalid_argument("v_divergence_sums: s' must lie in (0, 1]");
  if (Nv < 0) throw std::invalid_argument("v_divergence_sums: Nv must be >= 0");
  VDivergence out;
  out.sum = 0.0;
  if (Nv == 0) return out;
  const int m = Nv + 1;
  Eigen::VectorXd y0(m);
  for (int k = 0; k < m; ++k) y0[k] = 1.5 * std::ldexp(1.0, -(m - k));  // increasing: y_m .. y_1
  const Eigen::VectorXd z0 = flow_map(S, y0, t);
  for (int n = 1; n <= m; ++n) {
    out.y.push_back(y0[m - n]);
    out.z.push_back(z0[m - n]);
    out.v.push_back(v_eval(S, v0, z0[m - n], t));
  }
  const double e = 1.0 / s_prime;
  for (int n = 0; n < Nv; ++n) out.sum += std::pow(std::abs(out.v[n] - out.v[n + 1]), e);
  return out;
}

double seam_defect(const TriangularSetup& S, double t) {
  if (!(t > 0.0 && t <= S.T)) throw std::domain_error("seam_defect: need 0 < t <= T");
  double d = 0.0;
  for (int n = 1; n <= S.N; ++n) {
    const std::size_t k = static_cast<std::size_t>(n - 1);
    const double dx = S.dx[k];
    const double e = S.dp[k] * t;
    d = std::max(d, std::abs(w_n_branch(S, n, 1, 0.0, t)));
    d = std::max(d, std::abs(w_n_branch(S, n, 1, e, t) - w_n_branch(S, n, 2, e, t)));
    d = std::max(d, std::abs(w_n_branch(S, n, 2, dx, t) - w_n_branch(S, n, 3, dx, t)));
    d = std::max(d, std::abs(w_n_branch(S, n, 3, 2.0 * dx - e, t) - w_n_branch(S, n, 4, 2.0 * dx - e, t)));
    d = std::max(d, std::abs(w_n_branch(S, n, 4, 2.0 * dx, t)));
  }
  return d;
}

std::vector<PartialSum> triangular_tv_lower_bounds(const TriangularSetup& S, double eps, int N) {
  if (!(eps > 0.0)) throw std::invalid_argument("triangular bounds: eps must be > 0");
  if (N < 0 || N > S.N) throw std::invalid_argument("triangular bounds: N outside the truncation");
  const double e = 1.0 / (1.0 + S.p * eps);
  std::vector<PartialSum> out;
  double cum = 0.0;
  for (int n = 1; n <= N; ++n) {
    const double b = 4.0 * std::pow(S.dp[static_cast<std::size_t>(n - 1)], e);
    cum += b;
    out.push_back({n, b, cum});
  }
  return out;
}

SampledFunction sample_packet(const TriangularSetup& S, int n, double t, int K) {
  if (!(t > 0.0 && t <= S.T)) throw std::domain_error("sample_packet: need 0 < t <= T");
  const std::size_t k = static_cast<std::size_t>(n - 1);
  const double dx = S.dx.at(k);
  const double e = S.dp[k] * t;
  const double seams[5] = {0.0, e, dx, 2.0 * dx - e, 2.0 * dx};
  std::vector<double> xs;
  std::vector<double> vs;
  for (int j = 0; j < 5; ++j) {
    const double a = seams[j];
    if (!xs.empty() && !(S.x[k] + a > xs.back())) continue;
    xs.push_back(S.x[k] + a);
    const int branch = j == 0 ? 1 : (j == 4 ? 4 : j + (j < 2 ? 1 : 0));
    vs.push_back(j == 0 || j == 4 ? 0.0 : w_n_branch(S, n, branch, a, t));
    if (j == 4) break;
    const double b = seams[j + 1];
    for (int i = 1; i <= K; ++i) {
      const double xl = a + (b - a) * i / (K + 1);
      const double xg = S.x[k] + xl;
      if (!(xg > xs.back())) continue;
      xs.push_back(xg);
      vs.push_back(w_n_eval(S, n, xl, t));
    }
  }
  return SampledFunction::from(xs, vs);
}

}  // namespace fracbv
