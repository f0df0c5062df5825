#include <doctest.h>

#include <random>

#include "einstein/ricci.hpp"

using namespace einstein;

namespace {

struct Rng {
  std::mt19937_64 g;
  explicit Rng(uint64_t seed) : g(seed) {}
  double u01() { return double(g() >> 11) * 0x1p-53; }
  double coeff() { return std::exp(u01() * 2.0 - 1.0); }  // in [1/e, e]
  Gauge gauge() {
    Gauge gg{1.0 + 0.5 * (u01() - 0.5), u01() - 0.5, u01() - 0.5, 1.0 + 0.5 * (u01() - 0.5)};
    return gg;
  }
};

MetricParams random_metric(Rng& r, SpaceKind space, bool random_gauge = true) {
  MetricParams m;
  m.space = space;
  m.u1 = r.coeff(); m.u2 = r.coeff(); m.u3 = r.coeff();
  m.v4 = r.coeff(); m.v5 = r.coeff();
  m.x6 = r.coeff(); m.x7 = r.coeff(); m.x8 = r.coeff();
  if (random_gauge) m.gauge = r.gauge();
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("ricci");

TEST_CASE("sparse engine equals the textbook evaluation") {
  Rng r(3);
  for (FlagSpec s : {FlagSpec(1, 1, 2), FlagSpec(1, 2, 2)}) {
    auto dec = build_decomposition(s);
    for (SpaceKind space : {SpaceKind::Group, SpaceKind::Stiefel}) {
      RicciBrute engine(s, space);
      for (int trial = 0; trial < 3; ++trial) {
        MetricParams m = random_metric(r, space);
        Eigen::MatrixXd fast = engine.ricci_matrix(m);
        Eigen::MatrixXd slow = ricci_naive(dec, m);
        REQUIRE(fast.rows() == slow.rows());
        CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
}

TEST_CASE("bi-invariant metric has Ric = B/4") {
  for (FlagSpec s : {FlagSpec(1, 1, 1), FlagSpec(1, 2, 2), FlagSpec(2, 2, 2)}) {
    MetricParams m;
    m.space = SpaceKind::Group;
    auto rc = ricci_closed(s, m);
    for (int k = 1; k <= 8; ++k)
      if (rc.present[size_t(k)]) CHECK(std::abs(rc.r[size_t(k)] - 0.25) < 1e-14);
    CHECK(std::abs(rc.r0) < 1e-14);
    RicciBrute engine(s, SpaceKind::Group);
    CHECK(engine.certify(m, 0.25) < 1e-12);
  }
}

TEST_CASE("closed components match the brute-force matrix") {
  Rng r(17);
  for (FlagSpec s : {FlagSpec(1, 2, 2), FlagSpec(2, 2, 2), FlagSpec(1, 1, 3)}) {
    auto st = std::make_shared<StructureTensor>(build_structure_tensor(s));
    for (SpaceKind space : {SpaceKind::Group, SpaceKind::Stiefel}) {
      RicciBrute engine(st, space);
      for (int trial = 0; trial < 5; ++trial) {
        MetricParams m = random_metric(r, space);
        auto rc = ricci_closed(s, m);
        Eigen::MatrixXd R = engine.ricci_matrix(m);
        // Schur: each diagonal block is a scalar matrix, scalar = closed r_k
        for (int k = 1; k <= 8; ++k) {
          if (!s.block_present(k, space)) continue;
          auto [lo, hi] = engine.block_range(k);
          for (int a = lo; a < hi; ++a)
            for (int b = lo; b < hi; ++b) {
              if (a == b) {
                CHECK(std::abs(R(a, a) - rc.r[size_t(k)]) <
                      1e-8 * std::max(1.0, std::abs(rc.r[size_t(k)])));
              } else if (k != 4 && k != 5) {
                CHECK(std::abs(R(a, b)) < 1e-10);
              }
            }
        }
        // (U4, U5) entry is r0, all other off-block entries vanish
        auto [l4, h4] = engine.block_range(4);
        auto [l5, h5] = engine.block_range(5);
        CHECK(std::abs(R(l4, l5) - rc.r0) < 1e-8 * std::max(1.0, std::abs(rc.r0)));
        for (int a = 0; a < engine.dim(); ++a)
          for (int b = a + 1; b < engine.dim(); ++b) {
            bool center_pair = (a == l4 && b == l5);
            if (engine.block_of(a) == engine.block_of(b) || center_pair) continue;
            CHECK(std::abs(R(a, b)) < 1e-10);
          }
      }
    }
  }
}

TEST_CASE("SU(4) Einstein metric from the closed forms, exactly") {
  FlagSpec s(1, 1, 2);
  MetricQ mq;
  mq.space = SpaceKind::Group;
  mq.u3 = Quad(rat(5, 11));
  mq.v4 = Quad(rat(73, 55));
  mq.v5 = Quad(rat(5, 11));
  mq.x6 = Quad(rat(5, 11));
  auto rc = ricci_closed_exact(s, mq);
  Quad lam(rat(73, 220));
  for (int k = 1; k <= 8; ++k)
    if (rc.present[size_t(k)]) CHECK(rc.r[size_t(k)] == lam);
  CHECK(rc.r0_bracket.is_zero());

  // float residual against the brute force
  MetricParams m = mq.approx();
  RicciBrute engine(s, SpaceKind::Group);
  CHECK(engine.certify(m, 73.0 / 220.0) < 1e-10);
  auto res = einstein_residual(s, m, 73.0 / 220.0);
  for (double v : res) CHECK(std::abs(v) < 1e-12);

  // sensitivity: one coefficient off by 1e-3 must show up
  MetricParams bad = m;
  bad.x6 += 1e-3;
  double worst = 0;
  for (double v : einstein_residual(s, bad, 73.0 / 220.0)) worst = std::max(worst, std::abs(v));
  CHECK(worst > 1e-5);
}

TEST_CASE("r0 vanishes for diagonal gauge with x7 = x8") {
  Rng r(23);
  FlagSpec s(1, 2, 2);
  RicciBrute engine(s, SpaceKind::Group);
  for (int trial = 0; trial < 3; ++trial) {
    MetricParams m = random_metric(r, SpaceKind::Group, false);
    m.x8 = m.x7;
    auto rc = ricci_closed(s, m);
    CHECK(std::abs(rc.r0) < 1e-15);
    Eigen::MatrixXd R = engine.ricci_matrix(m);
    auto [l4, h4] = engine.block_range(4);
    auto [l5, h5] = engine.block_range(5);
    CHECK(std::abs(R(l4, l5)) < 1e-13);
  }
}

TEST_CASE("r0 vanishes under the solved gauge entry c(x8)") {
  // l = 1, m = 2: c = sqrt(2n(3+n))/(3+n) (1 - x8^2)/(2 + x8^2), x7 = 1
  Rng r(29);
  for (int n : {2, 3}) {
    FlagSpec s(1, 2, n);
    for (int trial = 0; trial < 3; ++trial) {
      MetricParams m = random_metric(r, SpaceKind::Group, false);
      m.x7 = 1;
      double c = std::sqrt(2.0 * n * (3 + n)) / (3 + n) * (1 - m.x8 * m.x8) /
                 (2 + m.x8 * m.x8);
      m.gauge = Gauge{1, 0, c, 1};
      auto rc = ricci_closed(s, m);
      CHECK(std::abs(rc.r0) < 1e-14);
    }
  }
}

TEST_CASE("sum identity over the off-diagonal blocks") {
  // sum_{i=6,7,8} sum_j g([Z, X_j], [W, X_j]) = B(Z, W) for Z, W central
  FlagSpec s(1, 2, 2);
  auto dec = build_decomposition(s);
  Rng r(31);
  MetricParams m = random_metric(r, SpaceKind::Group);
  auto cb = center_basis(s, m.gauge);
  auto g = [&](const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y) {
    // both arguments live in the off-diagonal blocks here
    double total = 0;
    for (int k : {6, 7, 8})
      for (size_t t = 0; t < dec.block(k).size(); ++t) {
        auto e = dec.unit(k, int(t));
        total += m.coeff(k) * killing_B(s, X, e) * killing_B(s, Y, e);
      }
    return total;
  };
  for (auto& Z : {cb.H4_tilde, cb.H5_tilde, cb.V4}) {
    for (auto& W : {cb.H4_tilde, cb.H5_tilde, cb.V4}) {
      double lhs = 0;
      for (int k : {6, 7, 8})
        for (size_t t = 0; t < dec.block(k).size(); ++t) {
          Eigen::MatrixXcd X = dec.unit(k, int(t)) / std::sqrt(m.coeff(k));
          lhs += g(bracket(Z, X), bracket(W, X));
        }
      CHECK(std::abs(lhs - killing_B(s, Z, W)) < 1e-10);
    }
  }
}

TEST_CASE("gauge covariance: equivalent center presentations") {
  FlagSpec s(1, 2, 2);
  Rng r(37);
  MetricParams base = random_metric(r, SpaceKind::Group, false);
  // random inner product on the center
  double v4 = 1.7, v5 = 0.6;
  Gauge M{1.0, 0.4, -0.3, 1.2};
  Eigen::Matrix2d D = Eigen::Vector2d(v4, v5).asDiagonal();
  Eigen::Matrix2d Mm;
  Mm << M.a, M.b, M.c, M.d;
  Eigen::Matrix2d G = Mm.transpose() * D * Mm;

  // presentation 2: unit lower-triangular (normal form)
  double vp5 = G(1, 1), gam = G(0, 1) / G(1, 1), vp4 = G(0, 0) - G(0, 1) * G(0, 1) / G(1, 1);
  Gauge M2{1, 0, gam, 1};

  auto fixed_form = [&](const MetricParams& m) {
    RicciBrute engine(s, SpaceKind::Group);
    Eigen::MatrixXd R = engine.ricci_matrix(m);
    // change of basis from the adapted metric-orthonormal frame to the
    // fixed B-orthonormal frame (blocks + H~4, H~5)
    int dim = engine.dim();
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(dim, dim);
    auto [l4, h4] = engine.block_range(4);
    auto [l5, h5] = engine.block_range(5);
    double det = m.gauge.det();
    double p = m.gauge.d / det, q = -m.gauge.b / det, rr = -m.gauge.c / det,
           ss = m.gauge.a / det;
    for (int t = 0; t < dim; ++t) {
      int k = engine.block_of(t);
      if (t == l4) {
        S(l4, t) = p / std::sqrt(m.v4);
        S(l5, t) = rr / std::sqrt(m.v4);
      } else if (t == l5) {
        S(l4, t) = q / std::sqrt(m.v5);
        S(l5, t) = ss / std::sqrt(m.v5);
      } else {
        S(t, t) = 1.0 / std::sqrt(m.coeff(k));
      }
    }
    Eigen::MatrixXd Sinv = S.inverse();
    return Eigen::MatrixXd(Sinv.transpose() * R * Sinv);
  };

  MetricParams m1 = base;
  m1.v4 = v4; m1.v5 = v5; m1.gauge = M;
  MetricParams m2 = base;
  m2.v4 = vp4; m2.v5 = vp5; m2.gauge = M2;
  CHECK((fixed_form(m1) - fixed_form(m2)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("scaling covariance of certified pairs") {
  FlagSpec s(1, 1, 2);
  MetricParams m;
  m.space = SpaceKind::Group;
  m.u3 = m.v5 = m.x6 = 5.0 / 11.0;
  m.v4 = 73.0 / 55.0;
  RicciBrute engine(s, SpaceKind::Group);
  double lam = 73.0 / 220.0;
  REQUIRE(engine.certify(m, lam) < 1e-10);
  for (double t : {0.5, 2.0}) CHECK(engine.certify(m.scaled(t), lam / t) < 1e-10);
}

TEST_SUITE_END();
