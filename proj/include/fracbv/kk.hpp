#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace fracbv {

/// Data of the two-dimensional Keyfitz-Kranzer counterexample (k = m = 2).
struct KKSetup {
  double p;      ///< 1/s > 1
  double delta;  ///< m_i = i^{p + p delta}
  Eigen::Vector2d b;
  std::function<double(double)> g;  ///< g(|b|) = 0, g'(|b|) = 1
  double epsilon;                   ///< injectivity window for g
  double M;                         ///< support half-width (an integer)
  int n;                            ///< first scale
  int i_max;                        ///< last scale kept
};

/// Defaults: b = (1, 0), g(u) = u - |b|, epsilon = |b|/4, i_max chosen so that
/// m_i 2^{-i} < 1e-17 beyond it, M = ceil(4 (1 + max |g|)).
KKSetup make_kk_setup(double p, double delta, int n, int i_max = 0,
                      Eigen::Vector2d b = Eigen::Vector2d(1.0, 0.0), std::function<double(double)> g = {});

double kk_m(const KKSetup& K, int i);
/// Number of strips used in I_i: floor(m_i), at least 1.
int kk_strips(const KKSetup& K, int i);
/// r_i with g(|b| + r_i) = 2^{-i}
double kk_r(const KKSetup& K, int i);
/// beta rotated by 2 arcsin(i^{-1-delta}/2), so |beta - beta_i| = i^{-1-delta}
Eigen::Vector2d kk_beta_i(const KKSetup& K, int i);

/// Horizontal band [y0, y1) carrying, on [-M, M), the two-valued pattern of cell width
/// `period` shifted right by `shift`: value `even` on cells floor((x - shift)/period) even,
/// `odd` on odd cells, and `even` where x - shift < -M. Outside [-M, M) the field is `outside`.
struct StripBand {
  double y0;
  double y1;
  int level;
  double period;
  double shift;
  Eigen::Vector2d even;
  Eigen::Vector2d odd;
};

struct StripField {
  double M;
  Eigen::Vector2d outside;
  std::vector<StripBand> bands;  ///< ordered by y, non-overlapping
  Eigen::Vector2d value(double x, double y) const;
};

struct KKState {
  StripField eta;    ///< (eta, 0)
  StripField omega;  ///< unit vectors
  StripField u;      ///< eta * omega
};

KKState build_initial_data(const KKSetup& K);

/// Explicit solution at t in [0, 1): eta frozen, omega shifted rowwise by t g(eta).
KKState evolve(const KKSetup& K, double t);

/// True when g(eta) is constant along every band on [-M, M] (straight characteristics)
/// and the shift stays below one cell width.
bool straight_characteristics(const KKSetup& K, const KKState& s, double t);

/// |Du|([-L, L]^2), exact for the strip field: vertical jump lines inside the bands and
/// horizontal interfaces between bands, integrated period by period.
double bv_exact(const StripField& f, double L);

/// max |f - c| over the field's values
double sup_distance(const StripField& f, const Eigen::Vector2d& c);

/// Rectilinear grid of cell-centred samples; comps[c](row, col).
struct GridField {
  Eigen::VectorXd x_edges;
  Eigen::VectorXd y_edges;
  std::vector<Eigen::MatrixXd> comps;
};

/// Samples the field at cell centres. Throws std::range_error when a band is thinner than
/// four rows or a pattern cell narrower than four columns.
GridField rasterize(const StripField& f, const Eigen::VectorXd& x_edges, const Eigen::VectorXd& y_edges);

/// Grid whose edges include every band boundary and every pattern breakpoint
/// (cells of width `dx` in x), over [-L, L]^2.
GridField aligned_grid(const StripField& f, double L, double dx);

Eigen::VectorXd uniform_edges(double lo, double hi, int cells);

/// Anisotropic discrete BV: sum over adjacent cells of |difference| times the shared side.
double bv_grid_norm(const GridField& g);

/// sum_{i >= n} m_i 2^{-i} + (4M + 2) r_n + 4 M^2 ||u - b||_inf, over the kept scales.
double bv_reference_bound(const KKSetup& K);

/// (t/2) sum_{i=n}^{n+N_i} (m_i - 1) i^{-p - p delta}
double jump_sum_lower_bound(const KKSetup& K, double t, int N_i);

}  // namespace fracbv
