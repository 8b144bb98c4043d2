#pragma once

#include "fracbv/flux.hpp"
#include "fracbv/source_profile.hpp"

namespace fracbv {

/// Everything needed to evaluate the generalized inverse-speed function Psi.
struct PsiContext {
  Flux flux;
  SourceProfile source;
  double root_tol = 1e-12;
};

/// X(v, t) = int_0^t f'(v e^{B(s)}) ds, the displacement of a characteristic
/// carrying the scaled state v. Psi(., t) is its inverse in v. For power-law
/// fluxes t may be +inf.
double forward_map(const PsiContext& ctx, double v, double t);

/// forward_map by adaptive Simpson regardless of the flux kind.
double forward_map_quadrature(const PsiContext& ctx, double v, double t);

/// Psi(x, t): the v solving x = int_0^t f'(v e^{B(s)}) ds.
/// Power-law fluxes use sgn(x)|x|^{1/p} gamma_p(t)^{-1/p}; other fluxes go through psi_root.
/// Throws std::domain_error for t <= 0 and std::range_error when the root
/// would leave the admissible interval |v| <= M e^{-max B}.
double psi(const PsiContext& ctx, double x, double t);

/// Psi by bracketed root finding on forward_map_quadrature; independent of
/// the power-law closed form.
double psi_root(const PsiContext& ctx, double x, double t);

struct HolderGap {
  double lhs;  ///< |Psi(z1,t) - Psi(z2,t)|
  double rhs;  ///< (|z1 - z2| / (c0 gamma_p(t)))^{1/p}
};

/// Both sides of the Hoelder estimate for Psi; needs degeneracy metadata on the flux.
HolderGap psi_holder_gap(const PsiContext& ctx, double z1, double z2, double t);

/// int_0^t f(w e^{B(s)}) e^{-B(s)} ds
double flux_weighted_integral(const PsiContext& ctx, double w, double t);

/// Primitive int_0^y Psi(s, t) ds = y Psi(y,t) - int_0^t f(Psi(y,t) e^B) e^{-B}.
double psi_primitive(const PsiContext& ctx, double y, double t);

/// Finite-speed constant C(T) = max |f'(u)| over |u| <= M e^{||alpha|| T}
/// (for non power-law fluxes f' is only known on [-M, M], so that interval is used).
double speed_bound(const Flux& F, const SourceProfile& S, double T);

}  // namespace fracbv
