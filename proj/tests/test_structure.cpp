#include <doctest.h>

#include <random>

#include "einstein/structure.hpp"

using namespace einstein;

TEST_SUITE_BEGIN("structure");

TEST_CASE("closed B-constants, reference values") {
  FlagSpec s(1, 2, 2);
  auto b = b_constants_closed(s);
  CHECK(b.get(2, 2, 2) == rat(6, 5));
  CHECK(b.get(6, 2, 6) == rat(3, 5));
  CHECK(b.get(7, 4, 7) == rat(1, 3));
  CHECK(b.get(8, 6, 7) == rat(4, 5));
  CHECK(b.get(1, 1, 1) == 0);

  FlagSpec t(2, 2, 2);
  auto b2 = b_constants_closed(t);
  CHECK(b2.get(1, 1, 1) == 1);
  CHECK(b2.get(6, 4, 6) == 0);
}

TEST_CASE("brute matches closed B-table exactly") {
  for (FlagSpec s : {FlagSpec(1, 2, 2), FlagSpec(2, 2, 3), FlagSpec(1, 1, 3)}) {
    auto st = build_structure_tensor(s);
    for (SpaceKind space : {SpaceKind::Group, SpaceKind::Stiefel}) {
      auto closed = b_constants_closed(s, space);
      auto brute = b_constants_brute(st, space);
      CHECK(closed.entries.size() == brute.entries.size());
      for (const auto& [key, v] : closed.entries) {
        INFO("triple ", key[0], key[1], key[2]);
        CHECK(brute.get(key[0], key[1], key[2]) == v);
      }
    }
  }
}

TEST_CASE("only the allowed triples are nonzero") {
  FlagSpec s(2, 2, 3);
  auto brute = b_constants_brute(build_structure_tensor(s));
  auto closed = b_constants_closed(s);
  for (const auto& [key, v] : brute.entries) {
    CHECK(v > 0);
    CHECK(closed.entries.count(key) == 1);
  }
}

TEST_CASE("full symmetry of the B-table from the definition") {
  // [k;ij] = [k;ji] = [j;ki]: recompute with unsorted keys and compare
  FlagSpec s(1, 2, 3);
  auto st = build_structure_tensor(s);
  std::map<std::array<int, 3>, Rat> raw;  // ordered (i, j, k)
  for (int a = 0; a < st.dim; ++a)
    for (int b = a + 1; b < st.dim; ++b)
      for (const auto& e : st.list(a, b)) {
        Rat c = rat(int_of(e.t) * int_of(e.t),
                    st.bn[size_t(a)] * st.bn[size_t(b)] * st.bn[size_t(e.c)]);
        int bi = st.block_of[size_t(a)], bj = st.block_of[size_t(b)],
            bk = st.block_of[size_t(e.c)];
        raw[{bi, bj, bk}] += c;
        raw[{bj, bi, bk}] += c;
      }
  for (const auto& [key, v] : raw) {
    auto get = [&](int i, int j, int k) {
      auto it = raw.find({i, j, k});
      return it == raw.end() ? Rat(0) : it->second;
    };
    CHECK(v == get(key[1], key[0], key[2]));
    CHECK(v == get(key[0], key[2], key[1]));
  }
}

TEST_CASE("row sums over a simple subalgebra are l/N") {
  for (FlagSpec s : {FlagSpec(2, 2, 2), FlagSpec(3, 2, 2)}) {
    auto st = build_structure_tensor(s);
    int lo = st.block_lo[1], hi = st.block_hi[1];
    for (int i = lo; i < hi; ++i) {
      Rat sum = 0;
      for (int j = lo; j < hi; ++j) {
        if (i == j) continue;
        int a = std::min(i, j), b = std::max(i, j);
        for (const auto& e : st.list(a, b))
          sum += rat(int_of(e.t) * int_of(e.t),
                     st.bn[size_t(a)] * st.bn[size_t(b)] * st.bn[size_t(e.c)]);
      }
      CHECK(sum == rat(s.l, s.N()));
    }
  }
}

TEST_CASE("closed Q-constants, reference values") {
  FlagSpec s(1, 2, 2);
  auto q = q_constants_closed(s, identity_gauge());
  CHECK(q.get(4, 6, 6).is_zero());
  CHECK(q.get(5, 6, 6) == Quad(rat(3, 5)));
  CHECK(q.get(4, 7, 7) == Quad(rat(1, 3)));
  CHECK(q.get(5, 7, 7) == Quad(rat(4, 15)));

  // l = m at b = 0: {4;77} = {4;88}
  FlagSpec t(2, 2, 3);
  auto q2 = q_constants_closed(t, identity_gauge());
  CHECK(q2.get(4, 7, 7) == q2.get(4, 8, 8));

  // scaling (a,b) -> (t a, t b) multiplies row 4 by t^2
  GaugeQ g;
  g.a = rat(3, 2); g.b = rat(1, 3); g.c = rat(-1, 5); g.d = rat(7, 8);
  GaugeQ g2 = g;
  g2.a *= 2; g2.b *= 2;
  auto qa = q_constants_closed(s, g), qb = q_constants_closed(s, g2);
  for (int j = 6; j <= 8; ++j) {
    Quad lhs = qb.get(4, j, j);
    Quad rhs = Quad(Rat(4)) * qa.get(4, j, j);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("brute Q-table is the oracle for the closed one") {
  std::mt19937_64 rng(11);
  auto u = [&] { return double(rng() >> 11) * 0x1p-53 * 2.0 - 1.0; };
  for (FlagSpec s : {FlagSpec(1, 2, 2), FlagSpec(2, 2, 2), FlagSpec(1, 1, 2)}) {
    auto st = build_structure_tensor(s);
    for (int trial = 0; trial < 6; ++trial) {
      GaugeQ gq;
      gq.a = rat_of_double(1.0 + u());
      gq.b = rat_of_double(u());
      gq.c = rat_of_double(u());
      gq.d = rat_of_double(1.0 + u());
      if (gq.det() == 0) continue;
      for (SpaceKind space : {SpaceKind::Group, SpaceKind::Stiefel}) {
        auto closed = q_constants_closed(s, gq, space);
        auto brute = q_constants_brute(st, gq.approx(), space);
        for (const auto& [key, v] : closed.entries) {
          INFO("triple ", key[0], key[1], key[2]);
          CHECK(std::abs(v.value() - brute.get(key[0], key[1], key[2])) < 1e-10);
        }
        for (const auto& [key, v] : brute.entries) {
          INFO("triple ", key[0], key[1], key[2]);
          CHECK(std::abs(v - closed.get(key[0], key[1], key[2]).value()) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("Stiefel mode drops every triple touching block 3") {
  FlagSpec s(2, 2, 2);
  auto st = build_structure_tensor(s);
  auto q = q_constants_brute(st, Gauge{1, 0.2, -0.4, 1}, SpaceKind::Stiefel);
  for (const auto& [key, v] : q.entries) {
    CHECK(key[0] != 3);
    CHECK(key[1] != 3);
    CHECK(key[2] != 3);
  }
}

TEST_CASE("identity feeding the bi-invariant check") {
  for (FlagSpec s : {FlagSpec(1, 2, 2), FlagSpec(2, 3, 4)}) {
    long l = s.l, m = s.m;
    auto b = b_constants_closed(s);
    auto q = q_constants_closed(s, identity_gauge());
    Rat sum = b.get(1, 6, 6) + b.get(2, 6, 6);
    sum += q.get(4, 6, 6).a + q.get(5, 6, 6).a;
    CHECK(sum == rat(l * m * (l + m), s.N()));
  }
}

TEST_SUITE_END();
