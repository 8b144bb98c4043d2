#include "fracbv/kk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracbv/numerics.hpp"

namespace fracbv {

namespace {

bool is_odd_cell(double z, double period) {
  const double c = std::floor(z / period);
  return std::fmod(std::abs(c), 2.0) == 1.0;
}

Eigen::Vector2d band_value(const StripBand& b, double M, const Eigen::Vector2d& outside, double x) {
  if (x < -M || x >= M) return outside;
  const double z = x - b.shift;
  if (z < -M) return b.even;
  return is_odd_cell(z, b.period) ? b.odd : b.even;
}

StripBand flat_band(const Eigen::Vector2d& v, double period) {
  return StripBand{0.0, 0.0, -1, period, 0.0, v, v};
}

// int over [a, b) of |f1 - f2| for two rows, by enumerating every breakpoint
double enumerate_abs_diff(const StripBand& r1, const StripBand& r2, double M, const Eigen::Vector2d& out, double a,
                          double b) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a, b};
  for (const StripBand* r : {&r1, &r2}) {
    // step from the first breakpoint; k0 itself can be far beyond 2^53
    const double first = std::ceil((a - r->shift) / r->period) * r->period + r->shift;
    for (long j = 0;; ++j) {
      const double x = first + static_cast<double>(j) * r->period;
      if (x >= b) break;
      if (x > a) cuts.push_back(x);
    }
    const double edge = -M + r->shift;
    if (edge > a && edge < b) cuts.push_back(edge);
  }
  std::sort(cuts.begin(), cuts.end());
  double sum = 0.0;
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const double len = cuts[k] - cuts[k - 1];
    if (!(len > 0.0)) continue;
    const double mid = 0.5 * (cuts[k] + cuts[k - 1]);
    sum += (band_value(r1, M, out, mid) - band_value(r2, M, out, mid)).norm() * len;
  }
  return sum;
}

// int over [-M, M) of |f1 - f2|; both rows are 2P-periodic beyond -M + max shift
double interface_integral(const StripBand& r1, const StripBand& r2, double M, const Eigen::Vector2d& out) {
  const double P = std::max(r1.period, r2.period);
  const double ratio = P / std::min(r1.period, r2.period);
  if (std::exp2(std::round(std::log2(ratio))) != ratio)
    throw std::invalid_argument("bv_exact: band periods must differ by a power of two");
  const double L = 2.0 * P;
  const double xa = -M + std::max(r1.shift, r2.shift);
  const double K = std::floor((M - xa) / L);
  double sum = enumerate_abs_diff(r1, r2, M, out, -M, xa);
  sum += K * enumerate_abs_diff(r1, r2, M, out, xa, xa + L);
  sum += enumerate_abs_diff(r1, r2, M, out, xa + K * L, M);
  return sum;
}

}  // namespace

double kk_m(const KKSetup& K, int i) { return std::pow(static_cast<double>(i), K.p + K.p * K.delta); }

int kk_strips(const KKSetup& K, int i) { return std::max(1, static_cast<int>(std::floor(kk_m(K, i)))); }

double kk_r(const KKSetup& K, int i) {
  const double nb = K.b.norm();
  const double target = std::ldexp(1.0, -i);
  auto miss = [&](double r) { return K.g(nb + r) - target; };
  const double lo = -2.0 * K.epsilon;
  const double hi = 2.0 * K.epsilon;
  if ((miss(lo) > 0.0) == (miss(hi) > 0.0))
    throw std::invalid_argument("kk_r: 2^{-i} is not in g([|b| - 2eps, |b| + 2eps]) for this scale");
  return bracketed_root(miss, lo, hi);
}

Eigen::Vector2d kk_beta_i(const KKSetup& K, int i) {
  const Eigen::Vector2d beta = K.b / K.b.norm();
  const double theta = 2.0 * std::asin(0.5 * std::pow(static_cast<double>(i), -1.0 - K.delta));
  return Eigen::Rotation2Dd(theta) * beta;
}

KKSetup make_kk_setup(double p, double delta, int n, int i_max, Eigen::Vector2d b, std::function<double(double)> g) {
  if (!(p > 1.0)) throw std::invalid_argument("kk: p must be > 1");
  if (!(delta > 0.0)) throw std::invalid_argument("kk: delta must be > 0");
  if (n < 1) throw std::invalid_argument("kk: n must be >= 1");
  const double nb = b.norm();
  if (!(nb > 0.0)) throw std::invalid_argument("kk: b must be non-zero");
  KKSetup K{p, delta, b, {}, 0.25 * nb, 0.0, n, i_max};
  K.g = g ? std::move(g) : [nb](double u) { return u - nb; };
  if (K.i_max <= 0) {
    int i = n + 1;
    while (kk_m(K, i) * std::ldexp(1.0, -i) >= 1e-17) ++i;
    K.i_max = i;
  }
  if (K.i_max < n) throw std::invalid_argument("kk: i_max must be >= n");
  double gmax = std::abs(K.g(nb));
  for (int i = n; i <= K.i_max + 1; ++i) gmax = std::max(gmax, std::abs(K.g(nb + kk_r(K, i))));
  K.M = std::ceil(4.0 * (1.0 + gmax));
  return K;
}

Eigen::Vector2d StripField::value(double x, double y) const {
  const auto it = std::upper_bound(bands.begin(), bands.end(), y,
                                   [](double v, const StripBand& b) { return v < b.y0; });
  if (it == bands.begin()) return outside;
  const StripBand& b = *(it - 1);
  if (y >= b.y1) return outside;
  return band_value(b, M, outside, x);
}

KKState build_initial_data(const KKSetup& K) {
  const double nb = K.b.norm();
  const Eigen::Vector2d beta = K.b / nb;
  KKState s;
  s.eta = StripField{K.M, Eigen::Vector2d(nb, 0.0), {}};
  s.omega = StripField{K.M, beta, {}};
  s.u = StripField{K.M, K.b, {}};
  for (int i = K.i_max; i >= K.n; --i) {
    const double P = std::ldexp(1.0, -i);
    const int J = kk_strips(K, i);
    const double ri = kk_r(K, i);
    const double ri1 = kk_r(K, i + 1);
    const Eigen::Vector2d bi = kk_beta_i(K, i);
    for (int j = 1; j <= J; ++j) {
      const double y0 = P + (j - 1) * P / J;
      const double y1 = j == J ? 2.0 * P : P + j * P / J;
      const double eta = nb + (j % 2 == 0 ? ri : ri1);
      s.eta.bands.push_back({y0, y1, i, P, 0.0, Eigen::Vector2d(eta, 0.0), Eigen::Vector2d(eta, 0.0)});
      s.omega.bands.push_back({y0, y1, i, P, 0.0, beta, bi});
      s.u.bands.push_back({y0, y1, i, P, 0.0, eta * beta, eta * bi});
    }
  }
  return s;
}

KKState evolve(const KKSetup& K, double t) {
  if (!(t >= 0.0 && t < 1.0)) throw std::domain_error("kk evolve: need 0 <= t < 1");
  KKState s = build_initial_data(K);
  for (std::size_t k = 0; k < s.eta.bands.size(); ++k) {
    const double shift = t * K.g(s.eta.bands[k].even[0]);
    s.omega.bands[k].shift = shift;
    s.u.bands[k].shift = shift;
  }
  return s;
}

bool straight_characteristics(const KKSetup& K, const KKState& s, double t) {
  double gmax = 0.0;
  for (std::size_t k = 0; k < s.eta.bands.size(); ++k) {
    const StripBand& e = s.eta.bands[k];
    if (e.even != e.odd || e.shift != 0.0) return false;
    const double speed = K.g(e.even[0]);
    gmax = std::max(gmax, std::abs(speed));
    if (std::abs(s.omega.bands[k].shift - t * speed) > 0.0) return false;
    if (!(std::abs(s.omega.bands[k].shift) < s.omega.bands[k].period)) return false;
  }
  return K.M >= 4.0 * (1.0 + gmax);
}

double bv_exact(const StripField& f, double L) {
  if (!(L >= f.M)) throw std::invalid_argument("bv_exact: box must contain [-M, M]");
  const double M = f.M;
  const Eigen::Vector2d& O = f.outside;
  double total = 0.0;
  for (const StripBand& b : f.bands) {
    if (b.y0 < -L || b.y1 > L) throw std::invalid_argument("bv_exact: band leaves the box");
    if (!(std::abs(b.shift) < b.period)) throw std::invalid_argument("bv_exact: shift must stay below one cell");
    const double H = b.y1 - b.y0;
    const double lines = 2.0 * M / b.period - 1.0;
    total += H * (lines * (b.even - b.odd).norm() + (b.even - O).norm() + (b.odd - O).norm());
  }
  const StripBand* prev = nullptr;
  for (const StripBand& b : f.bands) {
    if (prev == nullptr) {
      total += interface_integral(flat_band(O, b.period), b, M, O);
    } else if (prev->y1 == b.y0) {
      total += interface_integral(*prev, b, M, O);
    } else {
      total += interface_integral(*prev, flat_band(O, prev->period), M, O);
      total += interface_integral(flat_band(O, b.period), b, M, O);
    }
    prev = &b;
  }
  if (prev != nullptr) total += interface_integral(*prev, flat_band(O, prev->period), M, O);
  return total;
}

double sup_distance(const StripField& f, const Eigen::Vector2d& c) {
  double d = (f.outside - c).norm();
  for (const StripBand& b : f.bands) d = std::max({d, (b.even - c).norm(), (b.odd - c).norm()});
  return d;
}

Eigen::VectorXd uniform_edges(double lo, double hi, int cells) {
  if (cells < 1 || !(hi > lo)) throw std::invalid_argument("uniform_edges: bad range");
  Eigen::VectorXd e(cells + 1);
  for (int k = 0; k <= cells; ++k) e[k] = lo + (hi - lo) * k / cells;
  return e;
}

GridField rasterize(const StripField& f, const Eigen::VectorXd& x_edges, const Eigen::VectorXd& y_edges) {
  const Eigen::Index nx = x_edges.size() - 1;
  const Eigen::Index ny = y_edges.size() - 1;
  if (nx < 1 || ny < 1) throw std::invalid_argument("rasterize: need at least one cell");
  Eigen::VectorXd xc = 0.5 * (x_edges.head(nx) + x_edges.tail(nx));
  Eigen::VectorXd yc = 0.5 * (y_edges.head(ny) + y_edges.tail(ny));
  const double* yb = yc.data();
  const double* ye = yb + ny;
  for (const StripBand& b : f.bands) {
    const auto rows = std::lower_bound(yb, ye, b.y1) - std::lower_bound(yb, ye, b.y0);
    if (rows < 4) throw std::range_error("rasterize: grid does not resolve a strip (fewer than 4 rows)");
  }
  double finest = kInf;
  for (const StripBand& b : f.bands)
    if (b.even != b.odd) finest = std::min(finest, b.period);
  if (std::isfinite(finest)) {
    for (Eigen::Index c = 0; c < nx; ++c) {
      if (x_edges[c + 1] <= -f.M || x_edges[c] >= f.M) continue;
      if (x_edges[c + 1] - x_edges[c] > 0.25 * finest * (1.0 + 1e-12))
        throw std::range_error("rasterize: grid does not resolve a pattern cell (fewer than 4 columns)");
    }
  }
  GridField g{x_edges, y_edges, {Eigen::MatrixXd(ny, nx), Eigen::MatrixXd(ny, nx)}};
  for (Eigen::Index r = 0; r < ny; ++r) {
    for (Eigen::Index c = 0; c < nx; ++c) {
      const Eigen::Vector2d v = f.value(xc[c], yc[r]);
      g.comps[0](r, c) = v[0];
      g.comps[1](r, c) = v[1];
    }
  }
  return g;
}

GridField aligned_grid(const StripField& f, double L, double dx) {
  const int nx = static_cast<int>(std::llround(2.0 * L / dx));
  if (std::abs(nx * dx - 2.0 * L) > 1e-12 * L) throw std::invalid_argument("aligned_grid: dx must divide 2L");
  std::vector<double> ys{-L};
  for (const StripBand& b : f.bands) {
    if (b.y0 > ys.back()) ys.push_back(b.y0);
    for (int k = 1; k <= 4; ++k) ys.push_back(b.y0 + (b.y1 - b.y0) * k / 4.0);
  }
  if (L > ys.back()) ys.push_back(L);
  Eigen::VectorXd ye = Eigen::Map<Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  return rasterize(f, uniform_edges(-L, L, nx), ye);
}

double bv_grid_norm(const GridField& g) {
  const Eigen::Index nx = g.x_edges.size() - 1;
  const Eigen::Index ny = g.y_edges.size() - 1;
  double total = 0.0;
  for (Eigen::Index r = 0; r < ny; ++r) {
    const double hy = g.y_edges[r + 1] - g.y_edges[r];
    for (Eigen::Index c = 0; c + 1 < nx; ++c) {
      double s = 0.0;
      for (const auto& m : g.comps) s += (m(r, c + 1) - m(r, c)) * (m(r, c + 1) - m(r, c));
      total += std::sqrt(s) * hy;
    }
  }
  for (Eigen::Index c = 0; c < nx; ++c) {
    const double hx = g.x_edges[c + 1] - g.x_edges[c];
    for (Eigen::Index r = 0; r + 1 < ny; ++r) {
      double s = 0.0;
      for (const auto& m : g.comps) s += (m(r + 1, c) - m(r, c)) * (m(r + 1, c) - m(r, c));
      total += std::sqrt(s) * hx;
    }
  }
  return total;
}

double bv_reference_bound(const KKSetup& K) {
  double tail = 0.0;
  for (int i = K.n; i <= K.i_max; ++i) tail += kk_m(K, i) * std::ldexp(1.0, -i);
  const KKState s = build_initial_data(K);
  return tail + (4.0 * K.M + 2.0) * kk_r(K, K.n) + 4.0 * K.M * K.M * sup_distance(s.u, K.b);
}

double jump_sum_lower_bound(const KKSetup& K, double t, int N_i) {
  if (!(t > 0.0 && t < 1.0)) throw std::domain_error("jump_sum_lower_bound: need 0 < t < 1");
  if (N_i < 0) throw std::invalid_argument("jump_sum_lower_bound: N_i must be >= 0");
  const double e = K.p + K.p * K.delta;
  double sum = 0.0;
  for (int i = K.n; i <= K.n + N_i; ++i) sum += (kk_m(K, i) - 1.0) * std::pow(static_cast<double>(i), -e);
  return 0.5 * t * sum;
}

}  // namespace fracbv
