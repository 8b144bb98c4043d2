#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracbv/exact.hpp"
#include "fracbv/godunov.hpp"

using namespace fracbv;
using doctest::Approx;

TEST_CASE("zero stays zero") {
  const MeshRun run{-1.0, 1.0, 64, 0.9, 1.0, {}};
  const auto snaps = godunov_solve(Flux::power_law(2.0, 1.0), SourceProfile::constant(-1.0), Eigen::VectorXd::Zero(64), run);
  CHECK(snaps.back().u.cwiseAbs().maxCoeff() == 0.0);
  CHECK(snaps.back().time == 1.0);
}

TEST_CASE("Riemann flux") {
  const Flux F = Flux::power_law(1.0, 2.0);
  for (double u : {-1.0, 0.0, 0.6}) CHECK(godunov_flux(F, 0.0, u, u) == Approx(F.value(u)));
  CHECK(godunov_flux(F, 0.0, -1.0, 1.0) == 0.0);
  CHECK(godunov_flux(F, 0.0, 1.0, -1.0) == Approx(0.5));
  // monotone: non-decreasing in ul, non-increasing in ur
  for (double a = -1.0; a <= 1.0; a += 0.25)
    for (double b = -1.0; b <= 1.0; b += 0.25) {
      CHECK(godunov_flux(F, 0.0, a + 0.1, b) >= godunov_flux(F, 0.0, a, b) - 1e-15);
      CHECK(godunov_flux(F, 0.0, a, b + 0.1) <= godunov_flux(F, 0.0, a, b) + 1e-15);
    }
}

TEST_CASE("Burgers stationary shock") {
  const auto c = std::make_shared<const PsiContext>(PsiContext{Flux::power_law(1.0, 1.0), SourceProfile::zero()});
  const int cells = 4000;  // h = 1e-3
  const double lo = -2.0, hi = 2.0, h = (hi - lo) / cells;
  auto u0 = [](double a, double b) {
    const double m = std::clamp(0.0, a, b);
    return (m - a) - (b - m);
  };
  const MeshRun run{lo, hi, cells, 0.9, 0.5, {}};
  const auto snaps = godunov_solve(c->flux, c->source, cell_averages(u0, lo, hi, cells), run);
  const auto prof = riemann_profile(c, 1.0, -1.0, 0.0, 0.5, lo, hi);
  const Eigen::VectorXd ue = cell_averages([&](double a, double b) { return prof.integral(a, b); }, lo, hi, cells);
  const int i0 = cells / 4, i1 = 3 * cells / 4;  // away from the zero exterior state
  const double err = l1_distance(snaps.back().u.segment(i0, i1 - i0), ue.segment(i0, i1 - i0), h);
  CHECK(err < 2.0 * h);
}

TEST_CASE("damped packet converges under refinement") {
  const auto c = std::make_shared<const PsiContext>(PsiContext{Flux::power_law(2.0, 0.5), SourceProfile::constant(-1.0)});
  const Packet P = make_packet(*c, 0.0, 0.05, 0.5);
  auto u0 = [&](double a, double b) {
    return P.delta * std::max(0.0, std::min(b, P.x_n) - std::max(a, P.left())) -
           P.delta * std::max(0.0, std::min(b, P.right()) - std::max(a, P.x_n));
  };
  std::vector<double> errs;
  for (int cells : {512, 1024, 2048}) {
    const double lo = -0.3, hi = 0.3;
    const MeshRun run{lo, hi, cells, 0.9, 0.3, {}};
    const Eigen::VectorXd init = cell_averages(u0, lo, hi, cells);
    const auto snaps = godunov_solve(c->flux, c->source, init, run);
    const auto prof = packet_profile(c, P, 0.3);
    const Eigen::VectorXd ue = cell_averages([&](double a, double b) { return prof.integral(a, b); }, lo, hi, cells);
    errs.push_back(l1_distance(snaps.back().u, ue, (hi - lo) / cells));
  }
  CHECK(errs[0] / errs[1] >= 1.3);
  CHECK(errs[1] / errs[2] >= 1.3);
}

TEST_CASE("mass follows the source factor") {
  const double lo = -1.0, hi = 1.0;
  const int cells = 400;
  auto box = [](double a, double b) { return 0.4 * std::max(0.0, std::min(b, 0.1) - std::max(a, -0.1)); };
  const MeshRun run{lo, hi, cells, 0.9, 1.0, {0.25, 0.5}};
  const auto snaps = godunov_solve(Flux::power_law(2.0, 0.5), SourceProfile::constant(-1.0),
                                   cell_averages(box, lo, hi, cells), run);
  REQUIRE(snaps.size() == 3);
  for (const Snapshot& s : snaps) CHECK(s.u.sum() * (hi - lo) / cells == Approx(0.08 * std::exp(-s.time)).epsilon(1e-12));
}

TEST_CASE("cell averages and distances") {
  const Eigen::VectorXd u = cell_averages([](double a, double b) { return 0.5 * (b * b - a * a); }, 0.0, 1.0, 4);
  CHECK(u[0] == Approx(0.125));
  CHECK(u[3] == Approx(0.875));
  CHECK(l1_distance(u, Eigen::VectorXd::Zero(4), 0.25) == Approx(0.5));
  CHECK_THROWS_AS(godunov_solve(Flux::power_law(2.0, 1.0), SourceProfile::zero(), Eigen::VectorXd::Zero(4),
                                MeshRun{0.0, 1.0, 4, 0.9, 1.0, {}}),
                  std::invalid_argument);
}
