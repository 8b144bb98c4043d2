#include "fracbv/godunov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracbv/numerics.hpp"

namespace fracbv {

double godunov_flux(const Flux& F, double sonic, double ul, double ur) {
  if (ul <= ur) return F.value_unchecked(std::clamp(sonic, ul, ur));
  return std::max(F.value_unchecked(ul), F.value_unchecked(ur));
}

std::vector<Snapshot> godunov_solve(const Flux& F, const SourceProfile& S, const Eigen::VectorXd& u0,
                                    const MeshRun& run) {
  if (run.cells < 8) throw std::invalid_argument("godunov: need at least 8 cells");
  if (u0.size() != run.cells) throw std::invalid_argument("godunov: u0 size differs from cell count");
  if (!(run.x_hi > run.x_lo)) throw std::invalid_argument("godunov: empty domain");
  if (!(run.cfl > 0.0 && run.cfl < 1.0)) throw std::invalid_argument("godunov: cfl must lie in (0, 1)");
  if (!(run.t_end > 0.0)) throw std::invalid_argument("godunov: t_end must be > 0");
  if (!u0.allFinite()) throw std::invalid_argument("godunov: u0 must be finite");

  std::vector<double> marks;
  for (double t : run.snapshots) {
    if (!(t > 0.0 && t <= run.t_end)) throw std::invalid_argument("godunov: snapshot time outside (0, t_end]");
    marks.push_back(t);
  }
  marks.push_back(run.t_end);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

  const int n = run.cells;
  const double h = (run.x_hi - run.x_lo) / n;
  const double sonic = sonic_point(F);
  Eigen::VectorXd u = u0;
  Eigen::VectorXd flux(n + 1);
  std::vector<Snapshot> out;
  double t = 0.0;
  long steps = 0;
  for (double mark : marks) {
    while (t < mark) {
      if (++steps > run.max_steps) throw NumericalError("godunov: step limit exceeded");
      double smax = 0.0;
      for (int i = 0; i < n; ++i) smax = std::max(smax, std::abs(F.derivative_unchecked(u[i])));
      double dt = smax > 0.0 ? run.cfl * h / smax : mark - t;
      bool last = false;
      if (t + dt >= mark) {
        dt = mark - t;
        last = true;
      }
      flux[0] = godunov_flux(F, sonic, 0.0, u[0]);
      for (int i = 1; i < n; ++i) flux[i] = godunov_flux(F, sonic, u[i - 1], u[i]);
      flux[n] = godunov_flux(F, sonic, u[n - 1], 0.0);
      const double r = dt / h;
      u -= r * (flux.tail(n) - flux.head(n));
      const double t_next = last ? mark : t + dt;
      u *= std::exp(S.beta(t_next) - S.beta(t));
      t = t_next;
      if (!u.allFinite()) throw NumericalError("godunov: non-finite cell value");
    }
    out.push_back({t, u});
  }
  return out;
}

Eigen::VectorXd cell_averages(const std::function<double(double, double)>& integral, double x_lo, double x_hi,
                              int cells) {
  if (cells < 1 || !(x_hi > x_lo)) throw std::invalid_argument("cell_averages: bad mesh");
  const double h = (x_hi - x_lo) / cells;
  Eigen::VectorXd u(cells);
  for (int i = 0; i < cells; ++i) {
    const double a = x_lo + i * h;
    const double b = (i + 1 == cells) ? x_hi : x_lo + (i + 1) * h;
    u[i] = integral(a, b) / (b - a);
  }
  return u;
}

double l1_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double h) {
  if (u.size() != v.size()) throw std::invalid_argument("l1_distance: size mismatch");
  return (u - v).cwiseAbs().sum() * h;
}

}  // namespace fracbv
