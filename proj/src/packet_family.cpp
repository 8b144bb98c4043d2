#include "fracbv/packet_family.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracbv/numerics.hpp"

namespace fracbv {

namespace {

// centers x_n = 4 sum_{k<n} w_k + 2 w_n for n = 1..N
std::vector<double> family_centers(int N) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(std::max(N, 0)));
  double acc = 0.0;
  for (int n = 1; n <= N; ++n) {
    const double w = family_half_width(n);
    xs.push_back(4.0 * acc + 2.0 * w);
    acc += w;
  }
  return xs;
}

}  // namespace

double family_half_width(int n) {
  if (n < 1) throw std::invalid_argument("family index must be >= 1");
  const double l = std::log(n + 1.0);
  return 1.0 / (n * l * l);
}

PowerLawFamily make_power_law_family(double p, const SourceProfile& source, int N, double horizon, double M) {
  if (!(p > 1.0)) throw std::invalid_argument("power-law family: p must be > 1");
  if (N < 0) throw std::invalid_argument("power-law family: N must be >= 0");
  const double l2 = std::log(2.0);
  const double delta1 = std::pow(l2 * l2 * l2, -1.0 / p);
  if (M <= 0.0) M = delta1 * std::exp(source.max_beta(horizon));
  auto ctx = std::make_shared<const PsiContext>(PsiContext{Flux::power_law(p, M), source});
  PowerLawFamily fam{ctx, p, N, {}};
  const auto xs = family_centers(N);
  fam.packets.reserve(xs.size());
  for (int n = 1; n <= N; ++n) {
    const double l = std::log(n + 1.0);
    const double delta = std::pow(n * l * l * l, -1.0 / p);
    fam.packets.push_back(make_packet(*ctx, xs[n - 1], family_half_width(n), delta));
  }
  return fam;
}

double g_functional(const PsiContext& ctx, double t0, double a) {
  if (a == 0.0) return 0.0;
  const Flux& F = ctx.flux;
  if (F.is_power_law()) {
    const double p = F.exponent();
    return std::pow(std::abs(a), p + 1.0) * p / (p + 1.0) * ctx.source.gamma(p, t0);
  }
  return ctx.source.integrate(
      [&](double, double b) {
        const double u = a * std::exp(b);
        return a * F.derivative(u) - F.value(u) * std::exp(-b);
      },
      0.0, t0);
}

double f_plus(const PsiContext& ctx, double t0, double a) { return forward_map(ctx, a, t0); }
double f_minus(const PsiContext& ctx, double t0, double b) { return -forward_map(ctx, b, t0); }

StateBounds default_state_bounds(const PsiContext& ctx, double t0) {
  if (!(t0 > 0.0)) throw std::domain_error("state bounds: t0 must be > 0");
  double R = ctx.flux.bound();
  if (ctx.flux.decay()) R = std::min(R, ctx.flux.decay()->r);
  const double V = R * std::exp(-ctx.source.max_beta(t0)) * (1.0 - 1e-9);
  const double gp = g_functional(ctx, t0, V);
  const double gm = g_functional(ctx, t0, -V);
  if (gm >= gp) {
    const double b0 = bracketed_root([&](double b) { return g_functional(ctx, t0, b) - gp; }, -V, 0.0);
    return {V, b0};
  }
  const double a0 = bracketed_root([&](double a) { return g_functional(ctx, t0, a) - gm; }, 0.0, V);
  return {a0, -V};
}

CellStates solve_cell_states(const PsiContext& ctx, double t0, double A, double B, const StateBounds& bounds,
                             int max_sweeps) {
  const double L = B - A;
  if (!(L >= 0.0)) throw std::invalid_argument("solve_cell_states: need A <= B");
  if (L == 0.0) return {0.0, 0.0, 0, false};
  const double a0 = bounds.a0;
  const double b0 = bounds.b0;
  if (L > std::min(f_plus(ctx, t0, a0), f_minus(ctx, t0, b0)) * (1.0 + 1e-12))
    throw std::invalid_argument("solve_cell_states: B - A exceeds min{F+(a0), F-(b0)}");

  auto G = [&](double z) { return g_functional(ctx, t0, z); };
  auto Fp = [&](double a) { return f_plus(ctx, t0, a); };
  auto Fm = [&](double b) { return f_minus(ctx, t0, b); };

  const double abar = bracketed_root([&](double a) { return Fp(a) - L; }, 0.0, a0);
  const double bbar = bracketed_root([&](double b) { return Fm(b) - L; }, b0, 0.0);
  // G-matching on each side; the levels stay below G(a0) = G(b0)
  auto match_neg = [&](double level) {
    if (level <= 0.0) return 0.0;
    return bracketed_root([&](double b) { return G(b) - level; }, b0, 0.0);
  };
  auto match_pos = [&](double level) {
    if (level <= 0.0) return 0.0;
    return bracketed_root([&](double a) { return G(a) - level; }, 0.0, a0);
  };
  auto a_from_length = [&](double rest) {
    if (rest <= 0.0) return 0.0;
    return bracketed_root([&](double a) { return Fp(a) - rest; }, 0.0, abar);
  };
  auto b_from_length = [&](double rest) {
    if (rest <= 0.0) return 0.0;
    return bracketed_root([&](double b) { return Fm(b) - rest; }, bbar, 0.0);
  };

  const bool a_side = G(abar) <= G(bbar);
  double a = a_side ? abar : 0.0;
  double b = a_side ? 0.0 : bbar;
  int sweeps = 0;
  for (; sweeps < max_sweeps; ++sweeps) {
    double a_new;
    double b_new;
    if (a_side) {
      b_new = match_neg(G(a));
      a_new = a_from_length(L - Fm(b_new));
    } else {
      a_new = match_pos(G(b));
      b_new = b_from_length(L - Fp(a_new));
    }
    const bool settled = std::abs(a_new - a) < 1e-13 && std::abs(b_new - b) < 1e-13;
    a = a_new;
    b = b_new;
    if (settled && a > 0.0 && b < 0.0) return {a, b, sweeps + 1, false};
  }

  // The sweep can cycle (symmetric fluxes send (abar, 0) to (0, -abar) and back);
  // finish on the monotone reduced equation instead.
  if (a_side) {
    auto h = [&](double z) { return Fp(z) + Fm(match_neg(G(z))) - L; };
    a = bracketed_root(h, 0.0, abar);
    b = match_neg(G(a));
  } else {
    auto h = [&](double z) { return Fp(match_pos(G(z))) + Fm(z) - L; };
    b = bracketed_root(h, bbar, 0.0);
    a = match_pos(G(b));
  }
  return {a, b, sweeps, true};
}

CellStates solve_cell_states(const PsiContext& ctx, double t0, double A, double B) {
  return solve_cell_states(ctx, t0, A, B, default_state_bounds(ctx, t0));
}

double tau_position(const PsiContext& ctx, double t0, double A, double /*B*/, double a, double b) {
  if (a == b) throw std::domain_error("tau_position: degenerate cell with a == b");
  const double shift = (flux_weighted_integral(ctx, a, t0) - flux_weighted_integral(ctx, b, t0)) / (a - b);
  return A + f_plus(ctx, t0, a) - shift;
}

Cell make_cell(const PsiContext& ctx, double t0, int n, double A, double B, const StateBounds& bounds) {
  const CellStates s = solve_cell_states(ctx, t0, A, B, bounds);
  return {n, A, B, s.a, s.b, tau_position(ctx, t0, A, B, s.a, s.b)};
}

double merge_point(const PsiContext& ctx, const Cell& c, double t) {
  auto mass = [&](double z) { return psi_primitive(ctx, z - c.A, t) - psi_primitive(ctx, z - c.B, t); };
  return bracketed_root(mass, c.A, c.B);
}

void append_cell(PiecewiseProfile& out, const Cell& c, double t0) {
  const PsiContext& ctx = out.context();
  const double t = out.time();
  if (c.a == c.b) return;
  if (t >= t0) {
    const double zm = merge_point(ctx, c, t);
    out.append_fan(c.A, zm, c.A);
    out.append_fan(zm, c.B, c.B, true);
    return;
  }
  const double zl = c.A + forward_map(ctx, c.a, t);
  const double zr = std::max(zl, c.B + forward_map(ctx, c.b, t));
  const double lambda =
      (flux_weighted_integral(ctx, c.a, t) - flux_weighted_integral(ctx, c.b, t)) / (c.a - c.b);
  const double z0 = std::clamp(c.tau + lambda, zl, zr);
  out.append_fan(c.A, zl, c.A);
  out.append_constant(zl, z0, c.a * out.scale());
  out.append_constant(z0, zr, c.b * out.scale(), true);
  out.append_fan(zr, c.B, c.B);
}

double assp_solution(std::shared_ptr<const PsiContext> ctx, const Cell& c, double t0, double x, double t) {
  if (x < c.A || x >= c.B) return 0.0;
  PiecewiseProfile prof(std::move(ctx), t);
  append_cell(prof, c, t0);
  return prof(x);
}

AsspFamily make_assp_family(std::shared_ptr<const PsiContext> ctx, double t0, int N) {
  if (!ctx) throw std::invalid_argument("assp family: null context");
  if (N < 0) throw std::invalid_argument("assp family: N must be >= 0");
  const StateBounds bounds = default_state_bounds(*ctx, t0);
  const double Lmax = std::min(f_plus(*ctx, t0, bounds.a0), f_minus(*ctx, t0, bounds.b0));
  int n0 = 1;
  while (2.0 * family_half_width(n0) > Lmax) {
    if (++n0 > 100000000) throw NumericalError("assp family: no admissible starting index");
  }
  AsspFamily fam{ctx, t0, n0, N, bounds, {}};
  const auto xs = family_centers(N);
  for (int n = n0; n <= N; ++n) {
    const double w = family_half_width(n);
    fam.cells.push_back(make_cell(*ctx, t0, n, xs[n - 1] - w, xs[n - 1] + w, bounds));
  }
  return fam;
}

PiecewiseProfile family_profile(const PowerLawFamily& fam, double t) {
  PiecewiseProfile out(fam.ctx, t);
  for (const Packet& P : fam.packets) append_packet(out, P);
  return out;
}

PiecewiseProfile family_profile(const AsspFamily& fam, double t) {
  PiecewiseProfile out(fam.ctx, t);
  for (const Cell& c : fam.cells) append_cell(out, c, fam.t0);
  return out;
}

}  // namespace fracbv
