#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fracbv/triangular.hpp"

using namespace fracbv;
using doctest::Approx;

TEST_CASE("setup") {
  const TriangularSetup S = make_triangular_setup(2.0, 1.0, 8);
  CHECK(S.x[0] == 0.0);
  for (int n = 1; n < 8; ++n) CHECK(S.x[n] == Approx(S.x[n - 1] + 2.0 * S.dx[n - 1]));
  CHECK(S.tn[0] == Approx(2.0));
  CHECK(S.dp[0] == Approx(S.dx[0] / S.tn[0]));
  CHECK(S.dt == Approx(1.0 / 16384.0));
  CHECK_THROWS_AS(make_triangular_setup(0.5, 1.0, 8), std::invalid_argument);
}

TEST_CASE("packet branches") {
  const TriangularSetup S = make_triangular_setup(2.0, 1.0, 4);
  REQUIRE(S.dp[0] * 1.0 > 0.04);
  CHECK(w_n_eval(S, 1, 0.04, 1.0) == Approx(0.2));
  for (double t : {0.1, 0.5, 1.0}) {
    for (int n = 1; n <= 4; ++n) {
      const double dx = S.dx[n - 1];
      CHECK(w_n_branch(S, n, 2, dx, t) == Approx(0.0).scale(1.0));
      CHECK(w_n_branch(S, n, 3, dx, t) == Approx(0.0).scale(1.0));
      const double e = S.dp[n - 1] * t;
      CHECK(w_n_branch(S, n, 1, e, t) == Approx(w_n_branch(S, n, 2, e, t)).epsilon(1e-13));
      CHECK(w_n_eval(S, n, 2.0 * dx + 0.1, t) == 0.0);
    }
  }
  CHECK(seam_defect(S, 0.7) < 1e-12);
}

TEST_CASE("transport velocity") {
  const TriangularSetup S = make_triangular_setup(2.0, 1.0, 4);
  CHECK(transport_velocity(S, -1.0, 0.5) == 0.0);
  CHECK(transport_velocity(S, 100.0, 0.5) == 0.0);
  const double x = 0.3 * S.dp[0] * 0.5;
  CHECK(transport_velocity(S, x, 0.5) == Approx(x / 0.5));
  const TriangularSetup H = make_triangular_setup(2.0, 1.0, 4, [](double c) { return 2.0 * c + 1.0; });
  CHECK(transport_velocity(H, -1.0, 0.5) == 1.0);
}

TEST_CASE("sampled Lipschitz bound of the velocity") {
  const TriangularSetup S = make_triangular_setup(2.0, 1.0, 16);
  double bound = 1.0 / S.T;
  for (double tn : S.tn) bound = std::max(bound, 1.0 / (tn - S.T));
  const double end = S.x.back() + 2.0 * S.dx.back();
  const int K = 20000;
  double worst = 0.0;
  for (int k = 0; k < K; ++k) {
    const double a = end * k / K, b = end * (k + 1) / K;
    worst = std::max(worst, std::abs(transport_velocity(S, b, S.T) - transport_velocity(S, a, S.T)) / (b - a));
  }
  CHECK(worst <= bound * (1.0 + 1e-9));
}

TEST_CASE("characteristics") {
  const TriangularSetup S = make_triangular_setup(2.0, 1.0, 4);
  CHECK(characteristic_flow(S, -0.5, 1.0) == -0.5);
  // inside the first fan dX/dt = X/t
  const double t0 = 0.5, x0 = 0.2 * S.dp[0] * t0;
  const double X = characteristic_flow(S, x0, t0, 1.0, S.dt);
  CHECK(X == Approx(x0 / t0).epsilon(1e-12));
  Eigen::VectorXd pts = Eigen::VectorXd::LinSpaced(200, -0.1, S.x.back() + 2.5 * S.dx.back());
  const Eigen::VectorXd img = flow_map(S, pts, 1.0);
  for (Eigen::Index i = 1; i < img.size(); ++i) CHECK(img[i] > img[i - 1]);
}

TEST_CASE("alternating data and its transport") {
  CHECK(alternating_v0(0.75) == 1.0);
  CHECK(alternating_v0(-0.3) == 1.0);
  CHECK(alternating_v0(0.3) == -1.0);   // (1/4, 1/2)
  CHECK(alternating_v0(0.2) == 1.0);    // (1/8, 1/4)
  CHECK(alternating_v0(0.1) == -1.0);   // (1/16, 1/8)
  const TriangularSetup S = make_triangular_setup(2.0, 1.0, 16);
  for (double x : {0.01, 0.3, 0.9}) CHECK(v_eval(S, alternating_v0, x, 0.0) == alternating_v0(x));
  const VDivergence d = v_divergence_sums(S, alternating_v0, 0.5, 1.0, 10);
  CHECK(d.sum == 20.0);
  for (std::size_t n = 0; n < d.v.size(); ++n) CHECK(d.v[n] == alternating_v0(d.y[n]));
  CHECK(v_divergence_sums(S, alternating_v0, 0.5, 0.5, 10).sum == 40.0);
  CHECK(v_divergence_sums(S, alternating_v0, 0.5, 0.5, 0).sum == 0.0);
}

TEST_CASE("lower bound series") {
  const TriangularSetup S = make_triangular_setup(2.0, 1.0, 10);
  const auto b = triangular_tv_lower_bounds(S, 0.5, 10);
  REQUIRE(b.size() == 10);
  CHECK(b[0].bound == Approx(4.0 * std::pow(S.dx[0] / S.tn[0], 0.5)));
  const SampledFunction f = sample_packet(S, 3, 1.0);
  CHECK(f.vs.maxCoeff() == Approx(std::sqrt(S.dp[2])));
  CHECK(f.vs.minCoeff() == Approx(-std::sqrt(S.dp[2])));
}
