#pragma once

#include <memory>
#include <vector>

#include "fracbv/exact.hpp"

namespace fracbv {

/// Half-width 1 / (n log^2(n+1)) shared by both families.
double family_half_width(int n);

/// Power-law family: dx_n = 1/(n log^2(n+1)), delta_n = (n log^3(n+1))^{-1/p},
/// x_n = 4 sum_{k<n} dx_k + 2 dx_n.
struct PowerLawFamily {
  std::shared_ptr<const PsiContext> ctx;
  double p;
  int N;
  std::vector<Packet> packets;  ///< packets[n-1] is packet n
};

/// The flux bound defaults to delta_1 e^{max B} over [0, horizon].
PowerLawFamily make_power_law_family(double p, const SourceProfile& source, int N,
                                     double horizon = 10.0, double M = 0.0);

// ---- single-shock cells ----------------------------------------------------

/// G(a) = int_0^{t0} [a f'(a e^B) - f(a e^B) e^{-B}]
double g_functional(const PsiContext& ctx, double t0, double a);
/// F+(a) = int_0^{t0} f'(a e^B)
double f_plus(const PsiContext& ctx, double t0, double a);
/// F-(b) = -int_0^{t0} f'(b e^B)
double f_minus(const PsiContext& ctx, double t0, double b);

/// The pair (a0, b0) with G(a0) = G(b0) bounding the admissible states.
struct StateBounds {
  double a0;
  double b0;
};

/// Largest bounds keeping |a e^B|, |b e^B| inside the flux interval (and the
/// decay radius, when present) up to t0.
StateBounds default_state_bounds(const PsiContext& ctx, double t0);

struct CellStates {
  double a;
  double b;
  int iterations;      ///< alternating sweeps performed
  bool used_fallback;  ///< true if the sweep did not settle and bisection finished the job
};

/// (a, b) with G(a) = G(b) and F+(a) + F-(b) = B - A.
/// Throws std::invalid_argument if B - A exceeds min{F+(a0), F-(b0)}.
CellStates solve_cell_states(const PsiContext& ctx, double t0, double A, double B,
                             const StateBounds& bounds, int max_sweeps = 50);
CellStates solve_cell_states(const PsiContext& ctx, double t0, double A, double B);

/// tau + int_0^{t0} [f(a e^B) - f(b e^B)] / (a - b) e^{-B} = A + F+(a)
double tau_position(const PsiContext& ctx, double t0, double A, double B, double a, double b);

struct Cell {
  int n;
  double A;
  double B;
  double a;
  double b;
  double tau;
};

Cell make_cell(const PsiContext& ctx, double t0, int n, double A, double B, const StateBounds& bounds);

/// Merge point of the two fans for t >= t0, from conservation of the zero mass.
double merge_point(const PsiContext& ctx, const Cell& c, double t);

/// Appends u_{A,B}(., t) to a profile.
void append_cell(PiecewiseProfile& out, const Cell& c, double t0);
double assp_solution(std::shared_ptr<const PsiContext> ctx, const Cell& c, double t0, double x, double t);

struct AsspFamily {
  std::shared_ptr<const PsiContext> ctx;
  double t0;
  int n0;
  int N;
  StateBounds bounds;
  std::vector<Cell> cells;  ///< indices n0..N
};

AsspFamily make_assp_family(std::shared_ptr<const PsiContext> ctx, double t0, int N);

PiecewiseProfile family_profile(const PowerLawFamily& fam, double t);
PiecewiseProfile family_profile(const AsspFamily& fam, double t);

}  // namespace fracbv
