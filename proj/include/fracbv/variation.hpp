#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fracbv/packet_family.hpp"

namespace fracbv {

/// Samples (xs[i], vs[i]) with strictly increasing abscissae.
struct SampledFunction {
  Eigen::VectorXd xs;
  Eigen::VectorXd vs;

  static SampledFunction from(const std::vector<double>& xs, const std::vector<double>& vs);
  /// Throws std::invalid_argument on size mismatch, non-increasing xs or non-finite values.
  void validate() const;
  Eigen::Index size() const { return xs.size(); }
};

struct VariationReport {
  double p = 1.0;
  double value = 0.0;
  std::vector<Eigen::Index> subdivision;          ///< sample indices attaining the supremum
  std::vector<std::pair<int, double>> per_packet;  ///< optional (n, contribution)
};

/// sup over subdivisions of sum |v(x_i) - v(x_{i-1})|^p, exact on the sample.
/// Among maximizers the one with fewest points, then earliest indices, is reported.
VariationReport p_variation(const SampledFunction& f, double p);

/// TV^s = p_variation with p = 1/s, 0 < s <= 1.
double tvs(const SampledFunction& f, double s);

/// Breakpoints of the profile (jumps sampled twice as left/right limits, the second
/// copy one ulp to the right) plus K uniform interior points per fan.
SampledFunction sample_profile(const PiecewiseProfile& prof, int K = 64);

/// p-variation of each packet support separately; fills per_packet and sums them in value.
VariationReport packetwise_variation(const PowerLawFamily& fam, const PiecewiseProfile& prof, double p,
                                     int K = 64);

struct PartialSum {
  int n;
  double bound;       ///< lower bound on packet n's TV^s contribution
  double cumulative;  ///< running sum from the first packet
};

/// Per-packet analytic lower bounds at time t for TV^s and their running sums, packets 1..N.
std::vector<PartialSum> family_tvs_partial_sums(const PowerLawFamily& fam, double t, double s, int N);
/// Same for single-shock cells n0..N; needs decay metadata (q, C) on the flux.
std::vector<PartialSum> family_tvs_partial_sums(const AsspFamily& fam, double t, double s, int N);

/// e^{pB(t)} (c0 gamma_p(t))^{-1} (2(b - a) + 2 C(T) t) with (p, c0) from the flux degeneracy
/// and C(T) = speed_bound. Returns +inf at t = 0.
double tvs_upper_bound(const Flux& F, const SourceProfile& S, double t, double a, double b, double T);

/// Least-squares slope of log(values) against log(ns).
double fitted_growth_exponent(const std::vector<double>& ns, const std::vector<double>& values);

}  // namespace fracbv
