#include "fracbv/variation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracbv {

namespace {

// |d|^p with exact small-integer paths
struct PowerFn {
  double p;
  int ip;
  explicit PowerFn(double p_) : p(p_), ip(p_ == std::floor(p_) && p_ <= 4.0 ? static_cast<int>(p_) : 0) {}
  double operator()(double d) const {
    d = std::abs(d);
    switch (ip) {
      case 1: return d;
      case 2: return d * d;
      case 3: return d * d * d;
      case 4: { const double s = d * d; return s * s; }
      default: return std::pow(d, p);
    }
  }
};

// Endpoints plus strict local extrema, plateaus collapsed to their first index.
std::vector<Eigen::Index> extrema_indices(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  std::vector<Eigen::Index> runs;  // first index of each run of equal values
  runs.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    if (runs.empty() || v[i] != v[runs.back()]) runs.push_back(i);
  if (runs.size() <= 2) return runs;
  std::vector<Eigen::Index> out{runs.front()};
  for (std::size_t k = 1; k + 1 < runs.size(); ++k) {
    const double a = v[runs[k - 1]], b = v[runs[k]], c = v[runs[k + 1]];
    if ((b > a && b > c) || (b < a && b < c)) out.push_back(runs[k]);
  }
  out.push_back(runs.back());
  return out;
}

}  // namespace

SampledFunction SampledFunction::from(const std::vector<double>& xs, const std::vector<double>& vs) {
  SampledFunction f;
  f.xs = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  f.vs = Eigen::Map<const Eigen::VectorXd>(vs.data(), static_cast<Eigen::Index>(vs.size()));
  f.validate();
  return f;
}

void SampledFunction::validate() const {
  if (xs.size() != vs.size()) throw std::invalid_argument("SampledFunction: xs and vs differ in length");
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(vs[i]))
      throw std::invalid_argument("SampledFunction: non-finite sample");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw std::invalid_argument("SampledFunction: xs must be strictly increasing");
  }
}

VariationReport p_variation(const SampledFunction& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("p_variation: p must be >= 1");
  if (f.size() < 2) throw std::invalid_argument("p_variation: need at least two samples");
  if (f.xs.size() != f.vs.size()) throw std::invalid_argument("p_variation: xs and vs differ in length");
  const PowerFn pw(p);
  const auto idx = extrema_indices(f.vs);
  const std::size_t k = idx.size();
  std::vector<double> val(k);
  for (std::size_t j = 0; j < k; ++j) val[j] = f.vs[idx[j]];

  std::vector<double> best(k, 0.0);
  std::vector<int> count(k, 1);
  std::vector<std::size_t> prev(k, k);
  for (std::size_t j = 1; j < k; ++j) {
    double bj = 0.0;
    int cj = 1;
    std::size_t pj = k;
    const double vj = val[j];
    for (std::size_t i = 0; i < j; ++i) {
      const double cand = best[i] + pw(vj - val[i]);
      if (cand > bj || (cand == bj && pj != k && count[i] + 1 < cj)) {
        bj = cand;
        cj = count[i] + 1;
        pj = i;
      }
    }
    best[j] = bj;
    count[j] = cj;
    prev[j] = pj;
  }
  std::size_t end = 0;
  for (std::size_t j = 1; j < k; ++j)
    if (best[j] > best[end] || (best[j] == best[end] && count[j] < count[end])) end = j;

  VariationReport rep;
  rep.p = p;
  rep.value = best[end];
  for (std::size_t j = end; j != k; j = prev[j]) rep.subdivision.push_back(idx[j]);
  std::reverse(rep.subdivision.begin(), rep.subdivision.end());
  if (rep.subdivision.size() < 2) rep.subdivision = {0, f.size() - 1};
  return rep;
}

double tvs(const SampledFunction& f, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("tvs: s must lie in (0, 1]");
  return p_variation(f, 1.0 / s).value;
}

SampledFunction sample_profile(const PiecewiseProfile& prof, int K) {
  if (K < 0) throw std::invalid_argument("sample_profile: K must be >= 0");
  const auto& R = prof.regions();
  std::vector<double> xs;
  std::vector<double> vs;
  if (R.empty()) return SampledFunction::from({0.0, 1.0}, {0.0, 0.0});
  xs.reserve(R.size() * (2 + static_cast<std::size_t>(K)) + 2);
  vs.reserve(xs.capacity());
  auto put = [&](double x, double v) {
    if (!xs.empty() && !(x > xs.back())) return;
    xs.push_back(x);
    vs.push_back(v);
  };
  auto boundary = [&](double x, double left, double right, bool jump) {
    if (jump && left != right) {
      put(x, left);
      put(std::nextafter(x, kInf), right);
    } else {
      put(x, right);
    }
  };
  for (std::size_t k = 0; k < R.size(); ++k) {
    const Region& r = R[k];
    const double right_v = prof.region_value(k, r.left);
    if (k == 0) boundary(r.left, 0.0, right_v, true);
    else boundary(r.left, prof.region_value(k - 1, r.left), right_v, prof.shock_at(k));
    if (r.kind == Region::Kind::fan) {
      const double h = (r.right - r.left) / (K + 1);
      for (int j = 1; j <= K; ++j) {
        const double x = r.left + j * h;
        put(x, prof.region_value(k, x));
      }
    }
  }
  const double x_end = R.back().right;
  boundary(x_end, prof.region_value(R.size() - 1, x_end), 0.0, true);
  if (xs.size() < 2) put(std::nextafter(xs.back(), kInf), vs.back());
  return SampledFunction::from(xs, vs);
}

VariationReport packetwise_variation(const PowerLawFamily& fam, const PiecewiseProfile& prof, double p, int K) {
  const SampledFunction all = sample_profile(prof, K);
  VariationReport rep;
  rep.p = p;
  const double* xb = all.xs.data();
  const double* xe = xb + all.xs.size();
  for (std::size_t j = 0; j < fam.packets.size(); ++j) {
    const Packet& P = fam.packets[j];
    const auto i0 = std::lower_bound(xb, xe, P.left()) - xb;
    const auto i1 = std::upper_bound(xb, xe, std::nextafter(P.right(), kInf)) - xb;
    double c = 0.0;
    if (i1 - i0 >= 2) {
      SampledFunction part{all.xs.segment(i0, i1 - i0), all.vs.segment(i0, i1 - i0)};
      c = p_variation(part, p).value;
    }
    rep.per_packet.emplace_back(static_cast<int>(j + 1), c);
    rep.value += c;
  }
  return rep;
}

std::vector<PartialSum> family_tvs_partial_sums(const PowerLawFamily& fam, double t, double s, int N) {
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("partial sums: s must lie in (0, 1]");
  if (!(t > 0.0)) throw std::domain_error("partial sums: t must be > 0");
  if (N < 0 || N > fam.N) throw std::invalid_argument("partial sums: N outside the family truncation");
  const double scale = std::exp(fam.ctx->source.beta(t));
  std::vector<PartialSum> out;
  out.reserve(static_cast<std::size_t>(N));
  double cum = 0.0;
  for (int n = 1; n <= N; ++n) {
    const Packet& P = fam.packets[static_cast<std::size_t>(n - 1)];
    const double jump = t < P.t_n ? 2.0 * P.delta * scale : 2.0 * psi(*fam.ctx, P.dx, t) * scale;
    const double b = std::pow(jump, 1.0 / s);
    cum += b;
    out.push_back({n, b, cum});
  }
  return out;
}

std::vector<PartialSum> family_tvs_partial_sums(const AsspFamily& fam, double t, double s, int N) {
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("partial sums: s must lie in (0, 1]");
  if (!(t > 0.0)) throw std::domain_error("partial sums: t must be > 0");
  if (N > fam.N) throw std::invalid_argument("partial sums: N outside the family truncation");
  const auto& dec = fam.ctx->flux.decay();
  if (!dec) throw std::invalid_argument("partial sums: flux has no decay metadata");
  const SourceProfile& S = fam.ctx->source;
  const double q = dec->q;
  const double c0 = dec->C * S.gamma(q, fam.t0);
  const double rho = dec->C * S.gamma(q, t);
  const double e = 1.0 / (q * s);
  const double head = std::min(std::pow(c0, -e), std::pow(rho, -e)) * std::exp(S.beta(t) / s);
  std::vector<PartialSum> out;
  double cum = 0.0;
  for (const Cell& c : fam.cells) {
    if (c.n > N) break;
    const double b = head * std::pow(c.B - c.A, e);
    cum += b;
    out.push_back({c.n, b, cum});
  }
  return out;
}

double tvs_upper_bound(const Flux& F, const SourceProfile& S, double t, double a, double b, double T) {
  const auto& deg = F.degeneracy();
  if (!deg) throw std::invalid_argument("tvs_upper_bound: flux has no degeneracy metadata");
  if (!(a < b)) throw std::invalid_argument("tvs_upper_bound: need a < b");
  if (!(t >= 0.0 && t <= T)) throw std::domain_error("tvs_upper_bound: need 0 <= t <= T");
  const double g = S.gamma(deg->p, t);
  if (g == 0.0) return kInf;
  return std::exp(deg->p * S.beta(t)) / (deg->c0 * g) * (2.0 * (b - a) + 2.0 * speed_bound(F, S, T) * t);
}

double fitted_growth_exponent(const std::vector<double>& ns, const std::vector<double>& values) {
  if (ns.size() != values.size() || ns.size() < 2)
    throw std::invalid_argument("fitted_growth_exponent: need two or more matching points");
  const auto m = static_cast<Eigen::Index>(ns.size());
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(ns[i] > 0.0) || !(values[i] > 0.0))
      throw std::invalid_argument("fitted_growth_exponent: values must be positive");
    A(i, 0) = std::log(ns[i]);
    A(i, 1) = 1.0;
    y[i] = std::log(values[i]);
  }
  const Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
  return c[0];
}

}  // namespace fracbv
