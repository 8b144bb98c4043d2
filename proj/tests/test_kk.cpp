#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fracbv/kk.hpp"

using namespace fracbv;
using doctest::Approx;

TEST_CASE("scales") {
  const KKSetup K = make_kk_setup(2.0, 0.1, 10);
  CHECK(K.M >= 4.0);
  CHECK(K.M == std::floor(K.M));
  for (int i = 10; i < 30; ++i) {
    CHECK(kk_r(K, i) == Approx(std::ldexp(1.0, -i)).epsilon(1e-12));
    CHECK((kk_beta_i(K, i) - K.b / K.b.norm()).norm() == Approx(std::pow(i, -1.1)).epsilon(1e-12));
    CHECK(kk_beta_i(K, i).norm() == Approx(1.0));
    CHECK(kk_m(K, i) == Approx(std::pow(i, 2.2)));
  }
  CHECK(kk_m(K, K.i_max) * std::ldexp(1.0, -K.i_max) < 1e-17);
}

TEST_CASE("initial data pattern") {
  const KKSetup K = make_kk_setup(2.0, 0.1, 4, 8);
  const KKState s = build_initial_data(K);
  const Eigen::Vector2d beta = K.b / K.b.norm();
  CHECK((s.eta.value(0.3, 0.6) - Eigen::Vector2d(K.b.norm(), 0.0)).norm() == 0.0);  // y > 2^{-n+1}
  CHECK((s.omega.value(0.3, 0.6) - beta).norm() == 0.0);
  CHECK((s.u.value(K.M + 0.5, 0.1) - K.b).norm() == 0.0);
  // y inside I_4, x in an odd cell of width 2^{-4}
  const double y = 1.5 * std::ldexp(1.0, -4);
  CHECK((s.omega.value(1.5 * std::ldexp(1.0, -4), y) - kk_beta_i(K, 4)).norm() < 1e-15);
  CHECK((s.omega.value(2.5 * std::ldexp(1.0, -4), y) - beta).norm() < 1e-15);
  for (const StripBand& b : s.u.bands) CHECK(b.y1 > b.y0);
}

TEST_CASE("evolution shifts rows") {
  const KKSetup K = make_kk_setup(2.0, 0.1, 4, 8);
  const KKState s0 = build_initial_data(K);
  const KKState s1 = evolve(K, 0.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> X(-2.0 * K.M, 2.0 * K.M), Y(-0.1, 0.3);
  for (int k = 0; k < 500; ++k) {
    const double x = X(rng), y = Y(rng);
    CHECK((s0.u.value(x, y) - s1.u.value(x, y)).norm() == 0.0);
  }
  const KKState h = evolve(K, 0.5);
  const double nb = K.b.norm();
  for (std::size_t k = 0; k < h.omega.bands.size(); ++k)
    CHECK(h.omega.bands[k].shift == Approx(0.5 * (h.eta.bands[k].even[0] - nb)));
  CHECK((h.omega.value(0.3, 0.9) - K.b / nb).norm() == 0.0);
  CHECK(straight_characteristics(K, h, 0.5));
  CHECK_THROWS_AS(evolve(K, 1.0), std::domain_error);
}

TEST_CASE("grid BV") {
  GridField g{uniform_edges(0.0, 2.0, 8), uniform_edges(0.0, 2.0, 8), {Eigen::MatrixXd::Constant(8, 8, 3.0)}};
  CHECK(bv_grid_norm(g) == 0.0);
  g.comps[0].rightCols(4).setConstant(4.0);
  CHECK(bv_grid_norm(g) == Approx(2.0));
}

TEST_CASE("exact strip BV matches an aligned grid") {
  const KKSetup K = make_kk_setup(2.0, 0.1, 2, 3);
  for (double t : {0.0, 0.5}) {
    const KKState s = evolve(K, t);
    const GridField g = aligned_grid(s.u, 2.0 * K.M, 1.0 / 32.0);  // periods 1/8, shifts in 1/32 steps
    CHECK(bv_grid_norm(g) == Approx(bv_exact(s.u, 2.0 * K.M)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(rasterize(build_initial_data(K).u, uniform_edges(-10, 10, 16), uniform_edges(-10, 10, 16)),
                  std::range_error);
}

TEST_CASE("data norms decrease with n") {
  double prev = 1e300;
  for (int n : {6, 8, 10}) {
    const KKSetup K = make_kk_setup(2.0, 0.1, n);
    const KKState s = build_initial_data(K);
    const double bv = bv_exact(s.u, 2.0 * K.M);
    CHECK(bv < prev);
    prev = bv;
    CHECK(sup_distance(s.u, K.b) <= K.b.norm() * std::pow(n, -1.1) + std::ldexp(1.0, -n + 1));
    // support inside the ball of radius sqrt(2) M
    for (double a = 0.0; a < 6.28; a += 0.1) {
      const double r = std::sqrt(2.0) * K.M * 1.01;
      CHECK((s.u.value(r * std::cos(a), r * std::sin(a)) - K.b).norm() == 0.0);
    }
  }
}

TEST_CASE("jump sums") {
  const KKSetup K = make_kk_setup(2.0, 0.1, 10);
  CHECK(jump_sum_lower_bound(K, 0.5, 0) == Approx(0.25 * (std::pow(10.0, 2.2) - 1.0) * std::pow(10.0, -2.2)));
  double series = 0.0;
  for (int i = 10; i <= 110; ++i) series += 1.0 - std::pow(i, -2.2);
  CHECK(jump_sum_lower_bound(K, 0.5, 100) == Approx(0.25 * series));
  const double slope = jump_sum_lower_bound(K, 0.5, 5000) - jump_sum_lower_bound(K, 0.5, 4999);
  CHECK(slope == Approx(0.25).epsilon(1e-6));
}
