#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace fracbv {

/// Lower bound |f'(u) - f'(v)| >= c0 |u - v|^p on the working interval.
struct Degeneracy {
  double p;
  double c0;
};

/// Upper bound 0 <= f'(a) - f'(b) <= C (a - b)^q for b in (-r, 0), a in (0, r).
struct Decay {
  double q;
  double C;
  double r;
};

/// Convex scalar flux on the working interval [-M, M].
///
/// Three kinds are supported: the power law |u|^{p+1}/(p+1), a user-supplied
/// pair (f, f') of evaluators, and a table of f' nodes interpolated linearly
/// (f then being its exact primitive anchored at f(0) = 0).
/// Instances are immutable once built and safe to share between threads.
class Flux {
 public:
  enum class Kind { power_law, user_convex, table };
  using Fn = std::function<double(double)>;

  /// Power law with exponent p >= 1. Degeneracy (p, 2^{1-p}) is attached,
  /// and for p > 1 also the decay bound (p, 1, M).
  static Flux power_law(double p, double M);
  static Flux user_convex(Fn f, Fn df, double M);
  /// Nodes must be strictly increasing and cover [-M, M]; df values non-decreasing.
  static Flux table(std::vector<double> nodes, std::vector<double> df, double M);

  Flux& with_degeneracy(Degeneracy d);
  Flux& with_decay(Decay d);

  Kind kind() const { return kind_; }
  bool is_power_law() const { return kind_ == Kind::power_law; }
  /// Power-law exponent; only meaningful for Kind::power_law.
  double exponent() const { return p_; }
  double bound() const { return M_; }
  const std::optional<Degeneracy>& degeneracy() const { return degeneracy_; }
  const std::optional<Decay>& decay() const { return decay_; }

  /// f(u); throws std::domain_error for |u| > M.
  double value(double u) const;
  /// f'(u); throws std::domain_error for |u| > M.
  double derivative(double u) const;

  // Power-law kind extends past M; other kinds throw like value()/derivative().
  double value_unchecked(double u) const;
  double derivative_unchecked(double u) const;

 private:
  Flux() = default;
  void check_domain(double u) const;
  double table_value(double u) const;
  double table_derivative(double u) const;

  Kind kind_ = Kind::power_law;
  double p_ = 1.0;
  double M_ = 1.0;
  Fn f_;
  Fn df_;
  std::vector<double> nodes_;
  std::vector<double> table_df_;
  std::vector<double> table_f_;  // f at each node
  std::optional<Degeneracy> degeneracy_;
  std::optional<Decay> decay_;
};

double eval_flux(const Flux& F, double u);
double eval_dflux(const Flux& F, double u);

/// Grid estimate of the degeneracy constant: the minimum of
/// |f'(u) - f'(v)| / |u - v|^p over all pairs of a uniform grid on [-M, M]
/// (pairs closer than 1e-12 are skipped).
double degeneracy_constant(const Flux& F, double p, int grid_count);

/// f*(slope) = sup_{|u| <= M} (slope u - f(u)) by golden-section search.
double legendre(const Flux& F, double slope);

/// Sampled convexity check on `triples` random u < v < w in [-M, M].
bool is_convex_sampled(const Flux& F, int triples, std::uint64_t seed);

/// Argmin of f on [-M, M] (the sonic point; 0 for fluxes with f'(0) = 0).
double sonic_point(const Flux& F);

}  // namespace fracbv
