#include <doctest.h>

#include <random>

#include "einstein/solver.hpp"

using namespace einstein;

TEST_SUITE_BEGIN("classify");

TEST_CASE("shape cases on the group side") {
  FlagSpec s(1, 2, 2);
  MetricParams m;
  m.space = SpaceKind::Group;
  CHECK(classify_natural_reductivity(s, m).nr_case ==
        std::optional<std::string>("bi-invariant"));

  // case 2: equal off-diagonal coefficients, anything on the subgroup
  m.u2 = 0.3; m.u3 = 1.9; m.v4 = 0.7; m.v5 = 2.2;
  m.x6 = m.x7 = m.x8 = 1.4;
  auto c2 = classify_natural_reductivity(s, m);
  CHECK(c2.naturally_reductive);
  CHECK(c2.nr_case == std::optional<std::string>("case-2"));

  // case 1i: fiber su(l+m) carries a single B-multiple
  MetricParams m1;
  m1.space = SpaceKind::Group;
  m1.u2 = 0.6; m1.x6 = 0.6; m1.v5 = 0.6;  // fiber value
  m1.u3 = 1.3; m1.v4 = 2.0;
  m1.x7 = m1.x8 = 0.9;
  auto c1i = classify_natural_reductivity(s, m1);
  CHECK(c1i.naturally_reductive);
  CHECK(c1i.nr_case == std::optional<std::string>("case-1i"));

  // breaking the center alignment kills it
  MetricParams m2 = m1;
  m2.gauge.c = 0.2;
  auto broken = classify_natural_reductivity(s, normalize_center_gauge(m2));
  CHECK(!broken.naturally_reductive);

  // non-normal-form gauges are rejected
  MetricParams m3 = m1;
  m3.gauge.b = 0.5;
  CHECK_THROWS_AS(classify_natural_reductivity(s, m3), std::invalid_argument);
  CHECK_THROWS_AS(classify_jensen(s, m1), std::invalid_argument);
}

TEST_CASE("jensen detection and scale invariance") {
  FlagSpec s(1, 2, 2);
  MetricParams m;
  m.space = SpaceKind::Stiefel;
  m.u2 = 0.55; m.v5 = 0.55; m.x6 = 0.55;  // fiber su(3)
  m.v4 = 1.8;
  m.x7 = m.x8 = 1.0;
  CHECK(classify_jensen(s, m));
  CHECK(classify_jensen(s, m.scaled(3.7)));
  MetricParams bad = m;
  bad.x8 = 1.2;
  CHECK(!classify_jensen(s, bad));
  bad = m;
  bad.u2 = 0.71;
  CHECK(!classify_jensen(s, bad));
  CHECK_THROWS_AS(classify_natural_reductivity(s, m), std::invalid_argument);
}

TEST_CASE("classification invariant under equivalent center presentations") {
  std::mt19937_64 rng(5);
  auto u = [&] { return double(rng() >> 11) * 0x1p-53; };
  FlagSpec s(1, 1, 2);
  auto base = solve_su_small(SmallGroup::SU4);
  REQUIRE(base.solutions.size() == 2);
  for (const auto& sol : base.solutions) {
    Classification ref = classify_solution(s, sol.metric);
    Eigen::Matrix2d G;
    {
      Eigen::Matrix2d M, D;
      M << sol.metric.gauge.a, sol.metric.gauge.b, sol.metric.gauge.c, sol.metric.gauge.d;
      D = Eigen::Vector2d(sol.metric.v4, sol.metric.v5).asDiagonal();
      G = M.transpose() * D * M;
    }
    for (int trial = 0; trial < 10; ++trial) {
      // random presentation G = M'^T D' M' built from a random congruence
      Eigen::Matrix2d Mp;
      Mp << 1 + u(), u() - 0.5, u() - 0.5, 1 + u();
      if (std::abs(Mp.determinant()) < 0.1) continue;
      Eigen::Matrix2d Dp = Mp.inverse().transpose() * G * Mp.inverse();
      // force the middle factor diagonal by diagonalizing symmetrically
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(Dp);
      Eigen::Matrix2d Q = eig.eigenvectors();
      Eigen::Matrix2d Mfull = Q.transpose() * Mp;
      MetricParams pres = sol.metric;
      pres.v4 = eig.eigenvalues()(0);
      pres.v5 = eig.eigenvalues()(1);
      pres.gauge = Gauge{Mfull(0, 0), Mfull(0, 1), Mfull(1, 0), Mfull(1, 1)};
      if (pres.v4 <= 0 || pres.v5 <= 0) continue;
      Classification got = classify_solution(s, pres);
      CHECK(got.naturally_reductive == ref.naturally_reductive);
      CHECK(got.nr_case == ref.nr_case);
      // scaling invariance on top
      Classification scaled = classify_solution(s, pres.scaled(2.5));
      CHECK(scaled.naturally_reductive == ref.naturally_reductive);
    }
  }
}

TEST_CASE("normalize_center_gauge reproduces the same inner product") {
  MetricParams m;
  m.space = SpaceKind::Group;
  m.v4 = 1.7;
  m.v5 = 0.6;
  m.gauge = Gauge{1.1, 0.4, -0.3, 1.2};
  MetricParams nm = normalize_center_gauge(m);
  CHECK(nm.gauge.a == 1);
  CHECK(nm.gauge.b == 0);
  CHECK(nm.gauge.d == 1);
  Eigen::Matrix2d M1, M2, D1, D2;
  M1 << m.gauge.a, m.gauge.b, m.gauge.c, m.gauge.d;
  M2 << nm.gauge.a, nm.gauge.b, nm.gauge.c, nm.gauge.d;
  D1 = Eigen::Vector2d(m.v4, m.v5).asDiagonal();
  D2 = Eigen::Vector2d(nm.v4, nm.v5).asDiagonal();
  Eigen::Matrix2d G1 = M1.transpose() * D1 * M1, G2 = M2.transpose() * D2 * M2;
  CHECK((G1 - G2).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_SUITE_END();
