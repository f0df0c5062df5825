#include <doctest.h>

#include "einstein/report.hpp"
#include "einstein/solver.hpp"

using namespace einstein;

TEST_SUITE_BEGIN("solver");

TEST_CASE("symbolic components agree with the closed-form evaluation") {
  for (auto space : {SpaceKind::Group, SpaceKind::Stiefel}) {
    for (FlagSpec s : {FlagSpec(1, 2, 2), FlagSpec(2, 2, 3)}) {
      auto comp = sym::build_components(s, space, true, false);
      CHECK(comp.r[0].num.is_zero());  // the solved gauge entry kills r0
      std::map<std::string, double> pt{{"u1", 1.3}, {"u2", 0.8}, {"u3", 1.7},
                                       {"v4", 0.9},  {"v5", 1.2}, {"x6", 0.7},
                                       {"x8", 1.4}};
      MetricParams m;
      m.space = space;
      m.u1 = pt["u1"]; m.u2 = pt["u2"]; m.u3 = pt["u3"];
      m.v4 = pt["v4"]; m.v5 = pt["v5"]; m.x6 = pt["x6"];
      m.x7 = 1;
      m.x8 = pt["x8"];
      double omega = std::sqrt(double(s.l) * s.m * s.n / s.N());
      double c = omega * (1 - m.x8 * m.x8) / (s.l * m.x8 * m.x8 + s.m);
      m.gauge = Gauge{1, 0, c, 1};
      auto rc = ricci_closed(s, m);
      CHECK(std::abs(rc.r0) < 1e-14);
      for (int k = 1; k <= 8; ++k) {
        if (!rc.present[size_t(k)]) continue;
        double sym_val = sym::eval_component(comp, k, pt);
        CHECK(sym_val == doctest::Approx(rc.r[size_t(k)]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("SU(4): complete list with exact values") {
  auto r = solve_su_small(SmallGroup::SU4);
  REQUIRE(r.solutions.size() == 2);
  CHECK(int(r.stats.at("generic_admissible_roots")) == 0);
  bool found_nontrivial = false;
  for (const auto& s : r.solutions) {
    CHECK(s.residual < 1e-10);
    CHECK(s.classification.naturally_reductive);
    if (s.exact_values.count("x6") && s.exact_values.at("x6") == "5/11") {
      found_nontrivial = true;
      CHECK(s.exact_values.at("v4") == "73/55");
      CHECK(s.exact_values.at("u3") == "5/11");
      CHECK(s.exact_values.at("v5") == "5/11");
      CHECK(s.exact_values.at("lambda") == "73/220");
      CHECK(s.classification.nr_case == std::optional<std::string>("case-1i"));
    }
  }
  CHECK(found_nontrivial);
}

TEST_CASE("SU(3) resultant factors into the reference product") {
  auto r = solve_su_small(SmallGroup::SU3);
  REQUIRE(r.solutions.size() == 1);
  CHECK(r.solutions[0].classification.nr_case == std::optional<std::string>("bi-invariant"));
  // Res_x8(G1, G4) is divisible by (x6-1)^4 (x6^2+4)^2 (x6^2+x6+1) (4x6^2+1)
  REQUIRE(r.artifacts.count("P1_full"));
  REQUIRE(r.artifacts.count("P2_full"));
  MultiPoly res =
      sylvester_resultant(r.artifacts.at("P1_full"), r.artifacts.at("P2_full"), "x8");
  auto x6 = MultiPoly::variable(res.vars, "x6");
  auto cst = [&](long v) { return MultiPoly::constant(res.vars, Rat(v)); };
  MultiPoly fac = (x6 - cst(1)) * (x6 - cst(1)) * (x6 - cst(1)) * (x6 - cst(1));
  fac = fac * (x6 * x6 + cst(4)) * (x6 * x6 + cst(4));
  fac = fac * (x6 * x6 + x6 + cst(1)) * (cst(4) * x6 * x6 + cst(1));
  auto quo = res.exact_divide(fac);
  REQUIRE(quo.has_value());
  // the cofactor carries only spurious roots (leading-coefficient junk and
  // the x6 = 0, x6 = 1 loci); no further admissible real roots
  MultiPoly cof = *quo;
  for (const char* name : {"x6-1", "x6"}) {
    MultiPoly f = std::string(name) == "x6"
                      ? x6
                      : x6 - MultiPoly::constant(res.vars, Rat(1));
    while (true) {
      auto q = cof.exact_divide(f);
      if (!q) break;
      cof = *q;
    }
  }
  if (cof.degree("x6") > 0) {
    auto roots = isolate_real_roots(cof, Rat(0), std::nullopt);
    CHECK(roots.empty());
  }
}

TEST_CASE("V2C4: Jensen pair with the corrected v4") {
  auto r = solve_stiefel_small(SmallStiefel::V2C4);
  REQUIRE(r.solutions.size() == 2);
  for (const auto& s : r.solutions) {
    CHECK(s.exact_certified);
    CHECK(s.classification.jensen_type == std::optional<bool>(true));
    // v4 = (x6^2 + 1)/(2 x6) = (52 -+ 3 sqrt(6))/40
    double expect = (s.metric.x6 * s.metric.x6 + 1) / (2 * s.metric.x6);
    CHECK(s.metric.v4 == doctest::Approx(expect).epsilon(1e-14));
    double lo = (52 - 3 * std::sqrt(6.0)) / 40, hi = (52 + 3 * std::sqrt(6.0)) / 40;
    CHECK((std::abs(s.metric.v4 - lo) < 1e-12 || std::abs(s.metric.v4 - hi) < 1e-12));
  }
}

TEST_CASE("l = m = 2 family: elimination validity and F(2, n) > 0") {
  // the closed forms solve the defining equations identically
  FlagSpec spec(2, 2, 5);
  auto comp = sym::build_components(spec, SpaceKind::Group, false, true);
  MultiPoly u1v = MultiPoly::variable(comp.vars, "u1");
  auto sub_u2 = [&](MultiPoly p) { return poly_substitute(p, {{"u2", u1v}}); };
  std::vector<MultiPoly> lin = {sub_u2(sym::lambda_num(comp, 5)),
                                sub_u2(sym::lambda_num(comp, 6)),
                                sub_u2(sym::lambda_num(comp, 7))};
  LinearSolve ls = solve_linear(lin, {"u1", "u3", "v4"});
  for (const auto& eq : lin) CHECK(substitute_solution(eq, ls).is_zero());

  for (int n = 2; n <= 40; ++n) {
    MultiPoly F = su_l2_m2_characteristic(n);
    CHECK(F.degree("x6") == 16);
    CHECK(F.eval({{"x6", Rat(2)}}) > 0);
  }
}

TEST_CASE("SU(6) family member finds the reference root and x6 = 1") {
  auto r = solve_su_l2_m2(2);
  CHECK(int(r.stats.at("f_positive_roots")) == 2);
  bool root_1 = false, root_117941 = false;
  for (const auto& s : r.solutions) {
    if (s.origin != "su_l2_m2") continue;
    CHECK(s.metric.u3 > 0);
    if (std::abs(s.metric.x6 - 1.0) < 1e-12) {
      root_1 = true;
      CHECK(s.classification.nr_case == std::optional<std::string>("case-2"));
    }
    if (std::abs(s.metric.x6 - 1.17941) < 1e-4) {
      root_117941 = true;
      CHECK(!s.classification.naturally_reductive);
    }
  }
  CHECK(root_1);
  CHECK(root_117941);
}

TEST_CASE("general Stiefel (2,2) matches the small V4C6 x8=1 branch") {
  auto g = solve_stiefel_general(2, 2);
  auto v = solve_stiefel_small(SmallStiefel::V4C6);
  CHECK(int(g.stats.at("A_positive_roots")) == 2);
  CHECK(g.stats.at("B_at_0_positive") == 1);
  CHECK(g.stats.at("B_at_mid_negative") == 1);
  CHECK(g.stats.at("B_at_2_positive") == 1);
  // every solution of the general pipeline appears in the complete list
  for (const auto& s : g.solutions) {
    bool found = false;
    for (const auto& t : v.solutions) {
      double d = 0;
      for (int k = 1; k <= 8; ++k)
        d = std::max(d, std::abs(s.metric.coeff(k) - t.metric.coeff(k)));
      if (d < 1e-9) found = true;
    }
    CHECK(found);
  }
  // Jensen closed-form roots: x6 = (2mn + n^2 -+ sqrt(2mn^3 - 2mn + n^4 - n^2))/(2mn + n^2)
  int exact_jensen = 0;
  for (const auto& s : g.solutions)
    if (s.origin == "stiefel_general/A") {
      CHECK(s.exact_certified);
      double disc = std::sqrt(2.0 * 2 * 8 - 2 * 2 * 2 + 16 - 4);
      double lo = (12 - disc) / 12, hi = (12 + disc) / 12;
      CHECK((std::abs(s.metric.x6 - lo) < 1e-12 || std::abs(s.metric.x6 - hi) < 1e-12));
      ++exact_jensen;
    }
  CHECK(exact_jensen == 2);
}

TEST_CASE("scaling covariance of certified solutions") {
  auto r = solve_stiefel_small(SmallStiefel::V2C4);
  RicciBrute engine(FlagSpec(1, 1, 2), SpaceKind::Stiefel);
  for (const auto& s : r.solutions)
    for (double t : {0.5, 2.0})
      CHECK(engine.certify(s.metric.scaled(t), s.lambda / t) < 1e-9);
}

TEST_CASE("SU(5) branch solutions include the bi-invariant metric") {
  auto r = solve_su_l1_m2(2);
  bool bi = false;
  for (const auto& s : r.solutions)
    if (s.classification.nr_case == std::optional<std::string>("bi-invariant")) {
      bi = true;
      CHECK(s.lambda == doctest::Approx(0.25).epsilon(1e-12));
      CHECK(s.exact_certified);
    }
  CHECK(bi);
}

TEST_CASE("newton recovers the bi-invariant metric") {
  NewtonOptions opt;
  opt.starts = 48;
  auto r = solve_generic_newton(FlagSpec(1, 3, 2), SpaceKind::Group, opt);
  bool bi = false;
  for (const auto& s : r.solutions)
    if (s.classification.nr_case == std::optional<std::string>("bi-invariant")) bi = true;
  CHECK(bi);
}

TEST_CASE("JSON output is deterministic and round-trips through verify") {
  auto r1 = solve_su_small(SmallGroup::SU4);
  auto r2 = solve_su_small(SmallGroup::SU4);
  std::string j1 = solve_result_json(r1, 0), j2 = solve_result_json(r2, 0);
  CHECK(j1 == j2);
  RunReport rep = verify_solutions_json(j1);
  CHECK(rep.all_pass());
  CHECK(rep.checks.size() == r1.solutions.size());

  // an empty solution list verifies trivially
  RunReport empty = verify_solutions_json(
      R"({"space":"group","l":1,"m":1,"n":2,"solutions":[]})");
  CHECK(empty.all_pass());
  CHECK(empty.checks.empty());

  CHECK_THROWS(verify_solutions_json("{not json"));
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("solver");

TEST_CASE("general Stiefel B matches the closed-form endpoint values") {
  // regenerated B is primitive, so compare against the closed forms
  // B(0) = 4(5m^4 - 2m^2 + 1)(2mn + 1) and the reference B(2) closed form through
  // a single proportionality constant
  for (auto [m, n] : std::vector<std::pair<long, long>>{{2, 2}, {3, 2}, {5, 3}}) {
    auto r = solve_stiefel_general(int(m), int(n));
    const MultiPoly& B = r.artifacts.at("B");
    Rat b0 = B.eval({{"x6", Rat(0)}});
    Rat b2 = B.eval({{"x6", Rat(2)}});
    Rat p0 = 4 * (5 * m * m * m * m - 2 * m * m + 1) * (2 * m * n + 1);
    Rat p2 = 4 * (2 * int_pow(Int(m), 5) * n + m * m * m * m * (8 * n * n + 5) +
                  4 * m * m * m * n * (2 * n * n + 9) + m * m * (84 * n * n - 2) +
                  m * (80 * n * n * n - 6 * n) + 32 * n * n * n * n - 8 * n * n + 1);
    CHECK(b0 > 0);
    CHECK(b2 > 0);
    CHECK(b0 * p2 == b2 * p0);  // same positive scale factor at both points
  }
}

TEST_CASE("general Stiefel root brackets around the sign change") {
  using namespace einstein::upoly;
  auto bracket_counts = [](int m, int n, const Rat& mid) {
    auto r = solve_stiefel_general(m, n);
    const MultiPoly& B = r.artifacts.at("B");
    std::vector<Rat> c(size_t(B.degree("x6") + 1), Rat(0));
    int vi = B.var_index("x6");
    for (const auto& [e, cc] : B.terms) c[size_t(e[size_t(vi)])] = cc;
    auto chain = sturm_chain(from_rat_coeffs(c));
    return std::pair{count_roots(chain, Rat(0), mid), count_roots(chain, mid, Rat(2))};
  };
  auto [a22, b22] = bracket_counts(2, 2, rat(4, 3));
  CHECK(a22 >= 1);
  CHECK(b22 >= 1);
  auto [a84, b84] = bracket_counts(8, 4, rat(3, 2));
  CHECK(a84 >= 1);
  CHECK(b84 >= 1);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("solver");

TEST_CASE("l = m = 2 family closed forms match the references") {
  // u1 = 2 x6 (n x6^2 + 5)/(n^2 x6^4 + 10 n x6^2 + 22) and
  // v5 = (n^3 x6^7 + 18 n^2 x6^5 + 96 n x6^3 + 146 x6)
  //      / (n^3 x6^6 + 15 n^2 x6^4 + 72 n x6^2 + 110) after eliminating v5
  for (int n : {2, 3, 7}) {
    FlagSpec spec(2, 2, n);
    auto comp = sym::build_components(spec, SpaceKind::Group, false, true);
    MultiPoly u1v = MultiPoly::variable(comp.vars, "u1");
    auto sub_u2 = [&](MultiPoly p) { return poly_substitute(p, {{"u2", u1v}}); };
    std::vector<MultiPoly> lin = {sub_u2(sym::lambda_num(comp, 5)),
                                  sub_u2(sym::lambda_num(comp, 6)),
                                  sub_u2(sym::lambda_num(comp, 7))};
    LinearSolve ls = solve_linear(lin, {"u1", "u3", "v4"});
    std::vector<MultiPoly> dens{ls.delta};
    for (const auto& nj : ls.nums) dens.push_back(nj);
    MultiPoly e1 = strip_equation(substitute_solution(sub_u2(sym::lambda_num(comp, 1)), ls),
                                  dens, false).p;
    MultiPoly v5mx6 =
        MultiPoly::variable(e1.vars, "v5") - MultiPoly::variable(e1.vars, "x6");
    MultiPoly lin_v5 = *e1.exact_divide(v5mx6);
    MultiPoly A5 = lin_v5.coeff_of("v5", 1), B5 = lin_v5.coeff_of("v5", 0);
    for (double x6 : {0.7, 1.2, 1.9}) {
      std::map<std::string, double> pt;
      for (const auto& v : comp.vars) pt[v] = 1.0;
      pt["x6"] = x6;
      double v5 = -B5.eval_double(pt) / A5.eval_double(pt);
      double v5_ref =
          (std::pow(n, 3) * std::pow(x6, 7) + 18.0 * n * n * std::pow(x6, 5) +
           96.0 * n * std::pow(x6, 3) + 146 * x6) /
          (std::pow(n, 3) * std::pow(x6, 6) + 15.0 * n * n * std::pow(x6, 4) +
           72.0 * n * x6 * x6 + 110);
      CHECK(v5 == doctest::Approx(v5_ref).epsilon(1e-12));
      pt["v5"] = v5;
      double u1 = ls.nums[0].eval_double(pt) / ls.delta.eval_double(pt);
      double u1_ref = 2 * x6 * (n * x6 * x6 + 5) /
                        (double(n) * n * std::pow(x6, 4) + 10.0 * n * x6 * x6 + 22);
      CHECK(u1 == doctest::Approx(u1_ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("degree-16 characteristic polynomial endpoint identities") {
  // F(1, n) = -3 (n-2)(n+2)^2 (n+6)^2 (n^4 + 14 n^3 + 69 n^2 + 134 n + 76),
  // compared through the shared positive scale against the reference F(2, n)
  for (long n : {3, 5, 11, 26}) {
    MultiPoly F = su_l2_m2_characteristic(int(n));
    Rat f1 = F.eval({{"x6", Rat(1)}});
    Rat f2 = F.eval({{"x6", Rat(2)}});
    Rat p1 = -3 * (n - 2) * (n + 2) * (n + 2) * (n + 6) * (n + 6) *
             (n * n * n * n + 14 * n * n * n + 69 * n * n + 134 * n + 76);
    Rat p2 = 32 * (1024 * int_pow(Int(n), 10) + 8704 * int_pow(Int(n), 9) +
                   34368 * int_pow(Int(n), 8) + 87488 * int_pow(Int(n), 7) +
                   164144 * int_pow(Int(n), 6) + 239040 * int_pow(Int(n), 5) +
                   274217 * int_pow(Int(n), 4) + 242156 * int_pow(Int(n), 3) +
                   150555 * n * n + 55429 * n + 8500);
    CHECK(f1 < 0);
    CHECK(f2 > 0);
    CHECK(f1 * p2 == f2 * p1);
  }
}

TEST_SUITE_END();
