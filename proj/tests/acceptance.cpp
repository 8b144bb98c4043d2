// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "fracbv/exact.hpp"
#include "fracbv/godunov.hpp"
#include "fracbv/kk.hpp"
#include "fracbv/packet_family.hpp"
#include "fracbv/psi.hpp"
#include "fracbv/triangular.hpp"
#include "fracbv/variation.hpp"
#include "oracles.hpp"

using namespace fracbv;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// B(s) for the source cases, written out independently of SourceProfile
struct SourceCase {
  const char* name;
  SourceProfile S;
  std::vector<double> cuts;  // breakpoints of alpha
  std::function<double(double)> B;
};

std::vector<SourceCase> source_cases() {
  return {
      {"zero", SourceProfile::zero(), {}, [](double) { return 0.0; }},
      {"const -1", SourceProfile::constant(-1.0), {}, [](double s) { return -s; }},
      {"piecewise", SourceProfile::piecewise({0.5, 1.2}, {0.5, -1.0, 0.3}), {0.5, 1.2},
       [](double s) {
         if (s < 0.5) return 0.5 * s;
         if (s < 1.2) return 0.25 - (s - 0.5);
         return 0.25 - 0.7 + 0.3 * (s - 1.2);
       }},
  };
}

// int_0^t g(s) ds with panels split at the source breakpoints
double gl_integral(const oracle::GaussLegendre& gl, const std::function<double(double)>& g,
                   const std::vector<double>& cuts, double t) {
  double sum = 0.0, lo = 0.0;
  for (double c : cuts) {
    if (c >= t) break;
    sum += gl.integrate(g, lo, c);
    lo = c;
  }
  return sum + gl.integrate(g, lo, t);
}

Outcome criterion1() {
  const oracle::GaussLegendre gl(20);
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), ut(0.05, 2.0);
  double worst_res = 0.0, worst_cf = 0.0;
  for (double p : {1.0, 2.0, 3.0}) {
    for (const SourceCase& sc : source_cases()) {
      const PsiContext ctx{Flux::power_law(p, 1e3), sc.S};
      for (int k = 0; k < 1000; ++k) {
        const double x = ux(rng), t = ut(rng);
        const double v = psi_root(ctx, x, t);
        auto df = [&](double s) {
          const double w = v * std::exp(sc.B(s));
          return std::copysign(std::pow(std::abs(w), p), w);
        };
        worst_res = std::max(worst_res, std::abs(gl_integral(gl, df, sc.cuts, t) - x));
        const double g = gl_integral(gl, [&](double s) { return std::exp(p * sc.B(s)); }, sc.cuts, t);
        const double closed = std::copysign(std::pow(std::abs(x) / g, 1.0 / p), x);
        worst_cf = std::max(worst_cf, std::abs(v - closed));
        worst_cf = std::max(worst_cf, std::abs(psi(ctx, x, t) - closed));
      }
    }
  }
  return {worst_res < 1e-10 && worst_cf < 1e-10,
          fmt("max residual %.2e, max closed-form gap %.2e", worst_res, worst_cf)};
}

Outcome criterion2() {
  bool ok = true;
  double worst = 0.0;
  for (double p : {1.0, 2.0, 3.0}) {
    for (int n = 1; n <= 50; ++n) {
      const double dx = 1.0 / (n * std::pow(std::log(n + 1.0), 2));
      const double delta = std::pow(n * std::pow(std::log(n + 1.0), 3), -1.0 / p);
      const PsiContext ctx{Flux::power_law(p, 10.0), SourceProfile::zero()};
      const Packet P = make_packet(ctx, 0.0, dx, delta);
      const double expect = dx / std::pow(delta, p);
      worst = std::max(worst, std::abs(P.t_n - expect) / expect);
    }
  }
  ok = ok && worst < 1e-12;
  const PsiContext damped{Flux::power_law(2.0, 10.0), SourceProfile::constant(-1.0)};
  const double delta = 0.5;
  const double t_a = make_packet(damped, 0.0, 0.25 * delta * delta, delta).t_n;
  const double err_a = std::abs(t_a - (-std::log(0.5) / 2.0));
  ok = ok && err_a < 1e-10;
  for (double ratio : {0.5, 0.75, 2.0}) ok = ok && std::isinf(make_packet(damped, 0.0, ratio * delta * delta, delta).t_n);
  return {ok, fmt("alpha=0 rel err %.2e, alpha=-1 err %.2e, ratios >= 0.5 give inf: ", worst, err_a) +
                  (ok ? "yes" : "no")};
}

Outcome criterion3() {
  const auto ctx = std::make_shared<const PsiContext>(PsiContext{Flux::power_law(2.0, 0.5 * (1 + 1e-9)), SourceProfile::zero()});
  const Packet P = make_packet(*ctx, 0.0, 0.1, 0.5);
  const double lo = -0.5, hi = 0.5;
  const double mass = 2.0 * P.delta * P.dx;
  const std::vector<double> times{0.2, 0.4, 0.8};
  auto u0 = [&](double a, double b) {
    return P.delta * std::max(0.0, std::min(b, P.x_n) - std::max(a, P.left())) -
           P.delta * std::max(0.0, std::min(b, P.right()) - std::max(a, P.x_n));
  };
  std::vector<std::vector<double>> err(3);
  for (int level = 0; level < 3; ++level) {
    const int cells = 2048 << level;
    MeshRun run{lo, hi, cells, 0.9, 0.8, times};
    const auto snaps = godunov_solve(ctx->flux, ctx->source, cell_averages(u0, lo, hi, cells), run);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const auto prof = packet_profile(ctx, P, times[k]);
      const Eigen::VectorXd ue = cell_averages([&](double a, double b) { return prof.integral(a, b); }, lo, hi, cells);
      err[k].push_back(l1_distance(snaps[k].u, ue, (hi - lo) / cells));
    }
  }
  bool ok = true;
  double min_ratio = 1e300, max_fine = 0.0;
  for (const auto& e : err) {
    min_ratio = std::min({min_ratio, e[0] / e[1], e[1] / e[2]});
    max_fine = std::max(max_fine, e[2]);
  }
  ok = min_ratio >= 1.3 && max_fine < 5e-3 * mass;
  return {ok, fmt("min refinement ratio %.3f, finest L1 %.3e (limit %.1e)", min_ratio, max_fine, 5e-3 * mass)};
}

Outcome criterion4() {
  const double t = 1.0, s = 0.5;
  bool ok_a = true;
  std::string detail;
  for (int N : {100, 1000, 10000}) {
    const PowerLawFamily fam = make_power_law_family(2.0, SourceProfile::zero(), N);
    const PiecewiseProfile prof = family_profile(fam, t);
    const double measured = tvs(sample_profile(prof, 16), s);
    const double bound = tvs_upper_bound(fam.ctx->flux, fam.ctx->source, t, prof.lo(), prof.hi(), t);
    ok_a = ok_a && measured < bound;
    detail += fmt("N=%.0f TV=%.4f<%.4f; ", N, measured, bound);
  }
  const double eps = 0.5;
  const int Nmax = 10000;
  const PowerLawFamily fam = make_power_law_family(2.0, SourceProfile::zero(), Nmax);
  const auto sums = family_tvs_partial_sums(fam, t, s + eps, Nmax);
  const double ratio = sums[Nmax - 1].cumulative / sums[99].cumulative;
  std::vector<double> ns, cs;
  for (int N : {100, 200, 500, 1000, 2000, 5000, 10000}) {
    ns.push_back(N);
    cs.push_back(sums[N - 1].cumulative);
  }
  const double expo = fitted_growth_exponent(ns, cs);
  const bool ok_b = ratio > 10.0 && expo >= 0.4;
  detail = std::string(ok_a ? "(a) ok: " : "(a) FAIL: ") + detail + (ok_b ? "(b) ok: " : "(b) FAIL: ") +
           fmt("S(1e4)/S(1e2)=%.3f (need >10), growth exponent %.3f (need >=0.4)", ratio, expo);
  return {ok_a && ok_b, detail};
}

Outcome criterion5() {
  const double q = 3.0, t0 = 1.0, A = 0.0, B = 0.02;
  bool ok = true;
  double worst_res = 0.0, worst_cf = 0.0, worst_tau = 0.0;
  for (double a_src : {0.0, -0.5}) {
    const PsiContext ctx{Flux::power_law(q, 1.0), a_src == 0.0 ? SourceProfile::zero() : SourceProfile::constant(a_src)};
    const CellStates st = solve_cell_states(ctx, t0, A, B);
    worst_res = std::max(worst_res, std::abs(g_functional(ctx, t0, st.a) - g_functional(ctx, t0, st.b)));
    worst_res = std::max(worst_res, std::abs(f_plus(ctx, t0, st.a) + f_minus(ctx, t0, st.b) - (B - A)));
    const double gq = a_src == 0.0 ? t0 : std::expm1(q * a_src * t0) / (q * a_src);
    const double a = std::cbrt((B - A) / (2.0 * gq));
    worst_cf = std::max({worst_cf, std::abs(st.a - a), std::abs(st.b + a)});
    worst_tau = std::max(worst_tau, std::abs(tau_position(ctx, t0, A, B, st.a, st.b) - 0.5 * (A + B)));
    const double c0 = ctx.flux.decay()->C * gq;
    ok = ok && st.a - st.b >= std::pow(c0, -1.0 / q) * std::pow(B - A, 1.0 / q);
  }
  ok = ok && worst_res < 1e-10 && worst_cf < 1e-8 && worst_tau < 1e-10;
  return {ok, fmt("residual %.2e, closed-form gap %.2e, tau gap %.2e, gap inequality ", worst_res, worst_cf, worst_tau) +
                  (ok ? "holds" : "fails")};
}

Outcome criterion6() {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> len(2, 14);
  std::normal_distribution<double> val(0.0, 1.0);
  double worst = 0.0;
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    for (int k = 0; k < 200; ++k) {
      const int n = len(rng);
      std::vector<double> xs(n), vs(n);
      for (int i = 0; i < n; ++i) {
        xs[i] = i;
        vs[i] = k % 4 == 0 ? std::round(3.0 * val(rng)) : val(rng);  // some ties and plateaus
      }
      const double dp = p_variation(SampledFunction::from(xs, vs), p).value;
      const double bf = oracle::brute_force_p_variation(vs, p);
      worst = std::max(worst, std::abs(dp - bf) / std::max(1.0, bf));
    }
  }
  bool mono = true;
  std::uniform_real_distribution<double> step(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 60;
    std::vector<double> xs(n), vs(n);
    double v = val(rng);
    const double sign = k % 2 ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) {
      xs[i] = i;
      vs[i] = v;
      v += sign * step(rng);
    }
    const double p = 1.0 + 0.5 * (k % 5);
    const VariationReport r = p_variation(SampledFunction::from(xs, vs), p);
    const double expect = std::pow(std::abs(vs.back() - vs.front()), p);
    mono = mono && r.subdivision.size() == 2 && r.subdivision.front() == 0 && r.subdivision.back() == n - 1 &&
           std::abs(r.value - expect) <= 1e-12 * std::max(1.0, expect);
  }
  return {worst <= 1e-12 && mono, fmt("max DP/brute-force relative gap %.2e over 800 cases; ", worst) +
                                      (mono ? "monotone coarsest partition ok" : "monotone check failed")};
}

Outcome criterion7() {
  const TriangularSetup S = make_triangular_setup(2.0, 1.0, 64);
  double defect = 0.0;
  for (double t : {0.05, 0.25, 0.5, 1.0}) defect = std::max(defect, seam_defect(S, t));
  const double eps = 0.5;
  const auto bounds = triangular_tv_lower_bounds(S, eps, 64);
  long double series = 0.0L;
  for (int n = 1; n <= 64; ++n) {
    const long double l = std::log(static_cast<long double>(n) + 1.0L);
    const long double dx = 1.0L / (n * l * l);
    const long double tn = l / std::log(2.0L) * 2.0L;
    series += 4.0L * std::pow(dx / tn, 1.0L / (1.0L + 2.0L * eps));
  }
  const double series_gap = std::abs(bounds.back().cumulative - static_cast<double>(series)) / static_cast<double>(series);
  bool sums_ok = true;
  const int Nv = 40;
  std::string sums;
  for (double t : {0.25, 1.0}) {
    for (double sp : {1.0, 0.5}) {
      const double got = v_divergence_sums(S, alternating_v0, t, sp, Nv).sum;
      sums_ok = sums_ok && got == Nv * std::pow(2.0, 1.0 / sp);
      sums += fmt("%.0f ", got);
    }
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-0.1, S.x.back() + 2.0 * S.dx.back() + 0.1);
  bool order = true;
  for (int k = 0; k < 1000; ++k) {
    double a = ux(rng), b = ux(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    order = order && characteristic_flow(S, a, S.T) < characteristic_flow(S, b, S.T);
  }
  const bool ok = defect < 1e-8 && series_gap < 1e-8 && sums_ok && order;
  return {ok, fmt("seam defect %.2e, series gap %.2e, ", defect, series_gap) + "v sums (Nv=40) " + sums +
                  (order ? "order preserved on 1000 pairs" : "order violated")};
}

Outcome criterion8() {
  bool ok = true;
  std::string detail;
  double prev_bv = std::numeric_limits<double>::infinity();
  const int res = 2048;
  for (int n : {10, 20, 40}) {
    const KKSetup K = make_kk_setup(2.0, 0.1, n);
    const KKState s0 = build_initial_data(K);
    const double bound = K.b.norm() * std::pow(n, -1.1) + std::ldexp(1.0, -n + 1);
    // sup over the 2048^2 cell centres, then over the exact strip values
    const Eigen::VectorXd e = uniform_edges(-2.0 * K.M, 2.0 * K.M, res);
    double grid_sup = 0.0;
    for (int r = 0; r < res; ++r)
      for (int c = 0; c < res; ++c)
        grid_sup = std::max(grid_sup, (s0.u.value(0.5 * (e[c] + e[c + 1]), 0.5 * (e[r] + e[r + 1])) - K.b).norm());
    const double sup = sup_distance(s0.u, K.b);
    const double bv = bv_exact(s0.u, 2.0 * K.M);
    ok = ok && grid_sup <= bound && sup <= bound && bv < prev_bv;
    prev_bv = bv;
    detail += fmt("n=%.0f sup %.4f<=%.4f BV %.3f; ", n, sup, bound, bv);
  }
  const KKSetup K = make_kk_setup(2.0, 0.1, 10);
  const double j10 = jump_sum_lower_bound(K, 0.5, 10);
  const double j1000 = jump_sum_lower_bound(K, 0.5, 1000);
  const double slope = (j1000 - jump_sum_lower_bound(K, 0.5, 900)) / 100.0;
  ok = ok && j1000 > 10.0 * j10 && std::abs(slope - 0.25) < 1e-3;
  detail += fmt("jump sums %.3f -> %.3f, tail slope %.6f", j10, j1000, slope);
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  // optional arguments select criteria by number
  struct Item {
    int id;
    double limit;
    Outcome (*run)();
  };
  const Item items[] = {{1, 5, criterion1},  {2, 1, criterion2},   {3, 60, criterion3},  {4, 120, criterion4},
                        {5, 10, criterion5}, {6, 10, criterion6}, {7, 120, criterion7}, {8, 120, criterion8}};
  int failed = 0;
  for (const Item& it : items) {
    bool wanted = argc == 1;
    for (int a = 1; a < argc; ++a) wanted = wanted || std::atoi(argv[a]) == it.id;
    if (!wanted) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < it.limit;
    failed += !pass;
    std::printf("criterion %d: %s  %s [%.2f s, limit %.0f s]\n", it.id, pass ? "PASS" : "FAIL", o.detail.c_str(), secs,
                it.limit);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
