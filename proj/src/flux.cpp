#include "fracbv/flux.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "fracbv/numerics.hpp"

namespace fracbv {

namespace {

constexpr double kDomainSlack = 1e-12;

double signed_pow(double u, double p) { return std::copysign(std::pow(std::abs(u), p), u); }

}  // namespace

Flux Flux::power_law(double p, double M) {
  if (!(p >= 1.0)) throw std::invalid_argument("power_law: exponent must be >= 1");
  if (!(M > 0.0)) throw std::invalid_argument("power_law: bound M must be positive");
  Flux F;
  F.kind_ = Kind::power_law;
  F.p_ = p;
  F.M_ = M;
  F.degeneracy_ = Degeneracy{p, std::pow(2.0, 1.0 - p)};
  if (p > 1.0) F.decay_ = Decay{p, 1.0, M};
  return F;
}

Flux Flux::user_convex(Fn f, Fn df, double M) {
  if (!f || !df) throw std::invalid_argument("user_convex: both f and f' are required");
  if (!(M > 0.0)) throw std::invalid_argument("user_convex: bound M must be positive");
  Flux F;
  F.kind_ = Kind::user_convex;
  F.M_ = M;
  F.f_ = std::move(f);
  F.df_ = std::move(df);
  return F;
}

Flux Flux::table(std::vector<double> nodes, std::vector<double> df, double M) {
  if (nodes.size() < 2 || nodes.size() != df.size())
    throw std::invalid_argument("table: need >= 2 nodes and one f' value per node");
  if (!(M > 0.0)) throw std::invalid_argument("table: bound M must be positive");
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    if (!(nodes[k] > nodes[k - 1])) throw std::invalid_argument("table: nodes must be strictly increasing");
    if (df[k] < df[k - 1]) throw std::invalid_argument("table: f' must be non-decreasing (convex flux)");
  }
  if (nodes.front() > -M || nodes.back() < M) throw std::invalid_argument("table: nodes must cover [-M, M]");
  Flux F;
  F.kind_ = Kind::table;
  F.M_ = M;
  F.nodes_ = std::move(nodes);
  F.table_df_ = std::move(df);
  F.table_f_.assign(F.nodes_.size(), 0.0);
  for (std::size_t k = 1; k < F.nodes_.size(); ++k) {
    const double h = F.nodes_[k] - F.nodes_[k - 1];
    F.table_f_[k] = F.table_f_[k - 1] + 0.5 * h * (F.table_df_[k] + F.table_df_[k - 1]);
  }
  const double at_zero = F.table_value(0.0);
  for (double& v : F.table_f_) v -= at_zero;
  return F;
}

Flux& Flux::with_degeneracy(Degeneracy d) {
  if (!(d.p >= 1.0) || !(d.c0 > 0.0)) throw std::invalid_argument("degeneracy needs p >= 1 and c0 > 0");
  degeneracy_ = d;
  return *this;
}

Flux& Flux::with_decay(Decay d) {
  if (!(d.q > 1.0) || !(d.C > 0.0) || !(d.r > 0.0))
    throw std::invalid_argument("decay needs q > 1, C > 0, r > 0");
  decay_ = d;
  return *this;
}

void Flux::check_domain(double u) const {
  if (!(std::abs(u) <= M_ * (1.0 + kDomainSlack)))
    throw std::domain_error("flux evaluated outside [-M, M] at u = " + std::to_string(u));
}

double Flux::table_value(double u) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), u);
  std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(it - nodes_.begin()), 1, nodes_.size() - 1);
  const double x0 = nodes_[k - 1];
  const double h = nodes_[k] - x0;
  const double s = u - x0;
  const double slope = (table_df_[k] - table_df_[k - 1]) / h;
  return table_f_[k - 1] + table_df_[k - 1] * s + 0.5 * slope * s * s;
}

double Flux::table_derivative(double u) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), u);
  std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(it - nodes_.begin()), 1, nodes_.size() - 1);
  const double w = (u - nodes_[k - 1]) / (nodes_[k] - nodes_[k - 1]);
  return (1.0 - w) * table_df_[k - 1] + w * table_df_[k];
}

double Flux::value(double u) const {
  check_domain(u);
  return value_unchecked(u);
}

double Flux::derivative(double u) const {
  check_domain(u);
  return derivative_unchecked(u);
}

double Flux::value_unchecked(double u) const {
  switch (kind_) {
    case Kind::power_law:
      return std::pow(std::abs(u), p_ + 1.0) / (p_ + 1.0);
    case Kind::user_convex:
      check_domain(u);
      return f_(u);
    case Kind::table:
      check_domain(u);
      return table_value(u);
  }
  return 0.0;
}

double Flux::derivative_unchecked(double u) const {
  switch (kind_) {
    case Kind::power_law:
      return p_ == 1.0 ? u : signed_pow(u, p_);
    case Kind::user_convex:
      check_domain(u);
      return df_(u);
    case Kind::table:
      check_domain(u);
      return table_derivative(u);
  }
  return 0.0;
}

double eval_flux(const Flux& F, double u) { return F.value(u); }

double eval_dflux(const Flux& F, double u) { return F.derivative(u); }

double degeneracy_constant(const Flux& F, double p, int grid_count) {
  if (!(p >= 1.0)) throw std::invalid_argument("degeneracy_constant: p must be >= 1");
  if (grid_count < 2) throw std::invalid_argument("degeneracy_constant: grid_count must be >= 2");
  const double M = F.bound();
  const double h = 2.0 * M / (grid_count - 1);
  std::vector<double> u(grid_count);
  std::vector<double> du(grid_count);
  for (int k = 0; k < grid_count; ++k) {
    u[k] = (k + 1 == grid_count) ? M : -M + k * h;
    du[k] = F.derivative(u[k]);
  }
  const bool integer_p = (p == std::floor(p) && p <= 4.0);
  double best = kInf;
  for (int i = 0; i < grid_count; ++i) {
    for (int j = i + 1; j < grid_count; ++j) {
      const double gap = u[j] - u[i];
      if (gap < 1e-12) continue;
      double denom;
      if (integer_p) {
        denom = gap;
        for (int e = 1; e < static_cast<int>(p); ++e) denom *= gap;
      } else {
        denom = std::pow(gap, p);
      }
      best = std::min(best, std::abs(du[j] - du[i]) / denom);
    }
  }
  return best;
}

double legendre(const Flux& F, double slope) {
  const double M = F.bound();
  const double lo = F.derivative(-M);
  const double hi = F.derivative(M);
  if (!(slope >= lo && slope <= hi))
    throw std::domain_error("legendre: slope outside [f'(-M), f'(M)]");
  auto objective = [&](double u) { return slope * u - F.value(std::clamp(u, -M, M)); };
  return golden_section_max(objective, -M, M, 1e-12).second;
}

bool is_convex_sampled(const Flux& F, int triples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double M = F.bound();
  std::uniform_real_distribution<double> dist(-M, M);
  for (int k = 0; k < triples; ++k) {
    double a[3] = {dist(rng), dist(rng), dist(rng)};
    std::sort(a, a + 3);
    if (!(a[0] < a[1] && a[1] < a[2])) continue;
    const double w = (a[2] - a[1]) / (a[2] - a[0]);
    const double chord = w * F.value(a[0]) + (1.0 - w) * F.value(a[2]);
    const double scale = std::max({1.0, std::abs(F.value(a[0])), std::abs(F.value(a[2]))});
    if (F.value(a[1]) > chord + 1e-12 * scale) return false;
  }
  return true;
}

double sonic_point(const Flux& F) {
  if (F.derivative(0.0) == 0.0) return 0.0;
  const double M = F.bound();
  auto neg = [&](double u) { return -F.value(u); };
  return golden_section_max(neg, -M, M, 1e-13).first;
}

}  // namespace fracbv
