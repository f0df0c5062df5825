#include "einstein/solver.hpp"

namespace einstein {

namespace detail {

double certify(const RicciBrute& engine, const FlagSpec& spec, const MetricParams& metric,
               double* lambda_out) {
  RicciComponents rc = ricci_closed(spec, metric);
  double lambda = rc.lambda_candidate.value_or(0.0);
  if (lambda_out) *lambda_out = lambda;
  return engine.certify(metric, lambda);
}

void sort_and_dedup(SolveResult& result, double tol) {
  auto key = [](const EinsteinSolution& s) {
    return std::array<double, 9>{s.metric.x6, s.metric.x8, s.metric.u1, s.metric.u2,
                                 s.metric.u3, s.metric.v4, s.metric.v5, s.metric.gauge.c,
                                 s.lambda};
  };
  std::sort(result.solutions.begin(), result.solutions.end(),
            [&](const EinsteinSolution& a, const EinsteinSolution& b) {
              return key(a) < key(b);
            });
  std::vector<EinsteinSolution> out;
  for (auto& s : result.solutions) {
    bool dup = false;
    for (auto& t : out) {
      auto ka = key(s), kb = key(t);
      double d = 0;
      for (size_t i = 0; i < ka.size(); ++i) d = std::max(d, std::abs(ka[i] - kb[i]));
      if (d < tol) {
        dup = true;
        if (s.exact_certified && !t.exact_certified) t = s;  // prefer exact
        break;
      }
    }
    if (!dup) out.push_back(std::move(s));
  }
  result.solutions = std::move(out);
}

Rat simplest_rational_in(const Rat& lo, const Rat& hi) {
  if (lo > hi) return simplest_rational_in(hi, lo);
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.get_num().get_mpz_t(), lo.get_den().get_mpz_t());
  Rat f(fl);
  if (f >= lo) return f;                     // lo is an integer
  if (f + 1 <= hi) return f + 1;             // an integer inside
  Rat inner = simplest_rational_in(1 / (hi - f), 1 / (lo - f));
  return f + 1 / inner;
}

}  // namespace detail

namespace {

using upoly::Isolation;
using upoly::UPolyZ;

const Rat kRefineWidth = Rat(Int(1), int_pow(Int(10), 40));

struct UnivariateRoots {
  UPolyZ sf;  // squarefree integer polynomial
  std::vector<Isolation> intervals;
  std::vector<std::optional<Quad>> exact;  // aligned with intervals
  std::vector<double> approx;
};

std::string single_var(const MultiPoly& p) {
  std::string var;
  for (const auto& v : p.vars)
    if (p.degree(v) > 0) {
      if (!var.empty()) throw std::logic_error("single_var: not univariate");
      var = v;
    }
  return var;
}

UPolyZ to_upoly(const MultiPoly& p, const std::string& var) {
  std::vector<Rat> c(size_t(p.degree(var) + 1), Rat(0));
  int vi = p.var_index(var);
  for (const auto& [e, cc] : p.terms) c[size_t(e[size_t(vi)])] = cc;
  return upoly::from_rat_coeffs(c);
}

/// Try to recognize isolated roots as rationals or quadratic irrationals;
/// every recognition is verified exactly before being accepted.
void recognize_exact(UnivariateRoots& r) {
  using detail::simplest_rational_in;
  const UPolyZ& p = r.sf;
  for (size_t i = 0; i < r.intervals.size(); ++i) {
    auto& iv = r.intervals[i];
    if (iv.lo == iv.hi) {
      r.exact[i] = Quad(iv.lo);
      continue;
    }
    Rat cand = simplest_rational_in(iv.lo, iv.hi);
    if (p.sign_at(cand) == 0) {
      iv = {cand, cand};
      r.exact[i] = Quad(cand);
    }
  }
  // conjugate pairs: rational sum and product, verified by exact division
  for (size_t i = 0; i < r.intervals.size(); ++i) {
    if (r.exact[i]) continue;
    for (size_t j = i + 1; j < r.intervals.size(); ++j) {
      if (r.exact[j]) continue;
      const auto &a = r.intervals[i], &b = r.intervals[j];
      Rat s = detail::simplest_rational_in(a.lo + b.lo, a.hi + b.hi);
      Rat plo = std::min(std::min(a.lo * b.lo, a.lo * b.hi),
                         std::min(a.hi * b.lo, a.hi * b.hi));
      Rat phi = std::max(std::max(a.lo * b.lo, a.lo * b.hi),
                         std::max(a.hi * b.lo, a.hi * b.hi));
      Rat pr = detail::simplest_rational_in(plo, phi);
      Rat disc = s * s - 4 * pr;
      if (disc <= 0) continue;
      UPolyZ quad = upoly::from_rat_coeffs({pr, -s, Rat(1)});
      if (!upoly::divides(quad.primitive(), p.primitive())) continue;
      // sqrt(disc) = sqrt(num*den)/den
      Int dn = disc.get_num() * disc.get_den();
      Rat half_s = s / 2;
      Rat coef = rat(Int(1), 2 * disc.get_den());
      Quad lo_root(half_s, -coef, dn), hi_root(half_s, coef, dn);
      r.exact[i] = lo_root;
      r.exact[j] = hi_root;
      break;
    }
  }
}

UnivariateRoots isolate_univariate(const MultiPoly& cleaned, const Rat& lo, const Rat& hi,
                                   bool try_exact) {
  UnivariateRoots out;
  if (cleaned.is_zero() || cleaned.total_degree() == 0) return out;
  std::string var = single_var(cleaned);
  UPolyZ z = to_upoly(cleaned, var);
  out.sf = upoly::squarefree_part(z);
  Rat bound = upoly::root_bound(out.sf);
  Rat a = std::max(lo, Rat(-bound)), b = std::min(hi, bound);
  if (a < b) out.intervals = upoly::isolate(out.sf, a, b);
  for (auto& iv : out.intervals) iv = upoly::refine(out.sf, iv, kRefineWidth);
  out.exact.assign(out.intervals.size(), std::nullopt);
  if (try_exact) recognize_exact(out);
  for (auto& iv : out.intervals) out.approx.push_back(to_double((iv.lo + iv.hi) / 2));
  return out;
}

struct Candidate {
  double x6 = 1, x8 = 1;
  std::optional<Quad> exact_x6, exact_x8;
  std::string branch;
};

struct PipelineCtx {
  FlagSpec spec{1, 1, 1};
  SpaceKind space = SpaceKind::Group;
  std::shared_ptr<StructureTensor> st;
  std::unique_ptr<RicciBrute> engine;

  explicit PipelineCtx(const FlagSpec& s, SpaceKind sp) : spec(s), space(sp) {
    st = std::make_shared<StructureTensor>(build_structure_tensor(s));
    engine = std::make_unique<RicciBrute>(st, sp);
  }
};

double eval_at(const MultiPoly& p, double x6, double x8) {
  std::map<std::string, double> pt;
  for (const auto& v : p.vars) pt[v] = 1.0;
  pt["x6"] = x6;
  pt["x8"] = x8;
  return p.eval_double(pt);
}

/// Evaluate the Cramer solution at a point; falls back to a numeric solve
/// of the specialized linear system when the determinant degenerates.
bool eval_linear_values(const LinearSolve& ls, const std::vector<MultiPoly>& lin_eqs,
                        double x6, double x8, std::map<std::string, double>& out) {
  double dv = eval_at(ls.delta, x6, x8);
  double scale = 0;
  for (const auto& [e, c] : ls.delta.terms) scale += std::abs(to_double(c));
  if (std::abs(dv) > 1e-10 * std::max(1.0, scale)) {
    for (size_t j = 0; j < ls.unknowns.size(); ++j)
      out[ls.unknowns[j]] = eval_at(ls.nums[j], x6, x8) / dv;
    return true;
  }
  // numeric fallback
  const size_t k = ls.unknowns.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(long(k), long(k));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(long(k));
  const auto& vars = lin_eqs[0].vars;
  std::vector<int> uidx;
  for (const auto& u : ls.unknowns) uidx.push_back(lin_eqs[0].var_index(u));
  std::map<std::string, double> pt;
  for (const auto& v : vars) pt[v] = 1.0;
  pt["x6"] = x6;
  pt["x8"] = x8;
  for (size_t i = 0; i < k; ++i) {
    for (const auto& [e, c] : lin_eqs[i].terms) {
      double val = to_double(c);
      int which = -1;
      for (size_t j = 0; j < k; ++j)
        if (e[size_t(uidx[j])] > 0) which = int(j);
      for (size_t t = 0; t < vars.size(); ++t) {
        bool is_unknown = false;
        for (int ui : uidx)
          if (int(t) == ui) is_unknown = true;
        if (!is_unknown && e[t] > 0) val *= std::pow(pt[vars[t]], e[t]);
      }
      if (which >= 0) M(long(i), which) += val;
      else rhs(long(i)) -= val;
    }
  }
  Eigen::VectorXd sol = M.fullPivLu().solve(rhs);
  if (!sol.allFinite()) return false;
  for (size_t j = 0; j < k; ++j) out[ls.unknowns[j]] = sol(long(j));
  return true;
}

struct BivarCase {
  FlagSpec spec{1, 1, 1};
  SpaceKind space = SpaceKind::Group;
  std::vector<std::pair<int, int>> lin, rem;
  std::vector<std::string> L;
  std::string origin;
  bool full_artifacts = false;
};

void push_candidate_solution(SolveResult& result, PipelineCtx& ctx, const Candidate& cand,
                             const LinearSolve& ls, const std::vector<MultiPoly>& lin_eqs,
                             const sym::Components& comp, const std::string& origin) {
  const FlagSpec& spec = ctx.spec;
  const long l = spec.l, m = spec.m, n = spec.n;
  MetricParams metric;
  metric.space = ctx.space;
  metric.x6 = cand.x6;
  metric.x7 = 1;
  metric.x8 = cand.x8;
  std::map<std::string, double> vals;
  if (!eval_linear_values(ls, lin_eqs, cand.x6, cand.x8, vals)) {
    result.rejected.push_back({metric, "linear solve degenerate at (" + cand.branch + ")"});
    return;
  }
  for (const auto& [name, v] : vals) {
    if (name == "u1") metric.u1 = v;
    else if (name == "u2") metric.u2 = v;
    else if (name == "u3") metric.u3 = v;
    else if (name == "v4") metric.v4 = v;
    else if (name == "v5") metric.v5 = v;
  }
  double c = 0;
  if (comp.c_solved) {
    double omega = std::sqrt(double(l) * m * n / spec.N());
    c = omega * (1 - cand.x8 * cand.x8) / (l * cand.x8 * cand.x8 + m);
  }
  metric.gauge = Gauge{1, 0, c, 1};

  for (int k = 1; k <= 8; ++k)
    if (spec.block_present(k, ctx.space) && !(metric.coeff(k) > 1e-12)) {
      result.rejected.push_back({metric, "non-positive coefficient (" + cand.branch + ")"});
      return;
    }

  EinsteinSolution sol;
  sol.spec = spec;
  sol.space = ctx.space;
  sol.metric = metric;
  sol.origin = origin + "/" + cand.branch;
  double lambda = 0;
  double res = detail::certify(*ctx.engine, spec, metric, &lambda);
  sol.lambda = lambda;
  sol.residual = res;
  if (!(res < 1e-9)) {
    result.rejected.push_back({metric, "residual " + std::to_string(res)});
    return;
  }
  if (!(lambda > 0)) {
    result.rejected.push_back({metric, "non-positive Einstein constant"});
    return;
  }

  // exact certification for exact roots on the c = 0 locus
  if (cand.exact_x6 && cand.exact_x8 && std::abs(c) == 0.0) {
    std::map<std::string, Quad> pt;
    for (const auto& v : ls.delta.vars) pt[v] = Quad(Rat(1));
    pt["x6"] = *cand.exact_x6;
    pt["x8"] = *cand.exact_x8;
    Quad dq = eval_quad(ls.delta, pt);
    if (!dq.is_zero()) {
      MetricQ mq;
      mq.space = ctx.space;
      std::map<std::string, Quad> exact_vals;
      for (size_t j = 0; j < ls.unknowns.size(); ++j)
        exact_vals[ls.unknowns[j]] = eval_quad(ls.nums[j], pt) / dq;
      exact_vals["x6"] = *cand.exact_x6;
      exact_vals["x8"] = *cand.exact_x8;
      auto get = [&](const std::string& nme, Quad dflt) {
        auto it = exact_vals.find(nme);
        return it == exact_vals.end() ? dflt : it->second;
      };
      mq.u1 = get("u1", Quad(Rat(1)));
      mq.u2 = get("u2", Quad(Rat(1)));
      mq.u3 = get("u3", Quad(Rat(1)));
      mq.v4 = get("v4", Quad(Rat(1)));
      mq.v5 = get("v5", Quad(Rat(1)));
      mq.x6 = *cand.exact_x6;
      mq.x7 = Quad(Rat(1));
      mq.x8 = *cand.exact_x8;
      auto rc = ricci_closed_exact(spec, mq);
      bool all_equal = rc.r0_bracket.is_zero();
      std::optional<Quad> lam;
      for (int k = 1; k <= 8; ++k) {
        if (!rc.present[size_t(k)]) continue;
        if (!lam) lam = rc.r[size_t(k)];
        else if (!(rc.r[size_t(k)] == *lam)) all_equal = false;
      }
      if (all_equal && lam) {
        sol.exact_certified = true;
        sol.lambda = lam->value();
        sol.exact_form = "x6=" + cand.exact_x6->str();
        for (const auto& [nm, q] : exact_vals) sol.exact_values[nm] = q.str();
        sol.exact_values["lambda"] = lam->str();
      }
    }
  }
  sol.classification = classify_solution(spec, metric);
  result.solutions.push_back(std::move(sol));
}

std::optional<MultiPoly> common_univariate(const std::vector<MultiPoly>& eqs) {
  std::optional<UPolyZ> g;
  std::string var;
  const MultiPoly* sample = nullptr;
  for (const auto& e : eqs) {
    if (e.is_zero()) continue;
    std::string v = single_var(e);
    if (v.empty()) return std::nullopt;  // nonzero constant: no solutions
    if (var.empty()) var = v, sample = &e;
    else if (var != v)
      return std::nullopt;
    UPolyZ z = to_upoly(e, var);
    g = g ? upoly::gcd(*g, z) : z;
  }
  if (!g || !sample) return std::nullopt;
  MultiPoly out(sample->vars);
  int vi = out.var_index(var);
  for (size_t i = 0; i < g->c.size(); ++i) {
    if (g->c[i] == 0) continue;
    std::vector<int> e(out.vars.size(), 0);
    e[size_t(vi)] = int(i);
    out.terms[e] = Rat(g->c[i]);
  }
  return out;
}

SolveResult solve_bivariate(const BivarCase& C) {
  SolveResult result;
  result.spec = C.spec;
  result.space = C.space;
  PipelineCtx ctx(C.spec, C.space);

  auto comp = sym::build_components(C.spec, C.space, /*c_solved=*/true, /*x8_fixed=*/false);
  if (!comp.r[0].num.is_zero())
    throw std::logic_error("solve_bivariate: r0 not killed by the solved gauge entry");

  std::vector<MultiPoly> lin_eqs;
  for (auto [a, b] : C.lin) lin_eqs.push_back(sym::diff_num(comp, a, b));
  LinearSolve ls = solve_linear(lin_eqs, C.L);

  std::vector<MultiPoly> den_factors{ls.delta, comp.W};
  for (const auto& nj : ls.nums) den_factors.push_back(nj);

  std::vector<Stripped> rem;
  std::vector<MultiPoly> rem_full;
  for (auto [a, b] : C.rem) {
    MultiPoly raw = substitute_solution(sym::diff_num(comp, a, b), ls);
    if (C.full_artifacts)
      rem_full.push_back(strip_equation(raw, den_factors, false).p);
    rem.push_back(strip_equation(raw, den_factors, true));
  }
  if (C.full_artifacts)
    for (size_t i = 0; i < rem_full.size(); ++i)
      result.artifacts["P" + std::to_string(i + 1) + "_full"] = rem_full[i];
  for (size_t i = 0; i < rem.size(); ++i)
    result.artifacts["P" + std::to_string(i + 1)] = rem[i].p;

  std::vector<Candidate> cands;

  // generic branch: eliminate one variable from the stripped pair
  if (rem.size() == 2 && !rem[0].p.is_zero() && !rem[1].p.is_zero() &&
      rem[0].p.total_degree() > 0 && rem[1].p.total_degree() > 0) {
    const MultiPoly &P1 = rem[0].p, &P2 = rem[1].p;
    int d6 = P1.degree("x6") + P2.degree("x6");
    int d8 = P1.degree("x8") + P2.degree("x8");
    std::string elim = d6 <= d8 ? "x6" : "x8";
    std::string kept = d6 <= d8 ? "x8" : "x6";
    if (P1.degree(elim) > 0 && P2.degree(elim) > 0) {
      MultiPoly R;
      try {
        R = sylvester_resultant(P1, P2, elim);
      } catch (const DimensionGuard&) {
        // desk-scale guard exceeded: fall back to the seeded Newton search
        result.notes.push_back("Sylvester dimension guard exceeded; Newton fallback");
        auto nres = solve_generic_newton(C.spec, C.space, NewtonOptions{});
        for (auto& s : nres.solutions) result.solutions.push_back(std::move(s));
        R = MultiPoly(P1.vars);
      }
      result.artifacts["resultant"] = R;
      result.notes.push_back("eliminated " + elim + ", resultant degree " +
                             std::to_string(R.degree(kept)));
      if (!R.is_zero() && R.degree(kept) > 0) {
        MultiPoly Rclean =
            strip_univariate(R, {P1.leading_coeff(elim), P2.leading_coeff(elim)});
        // admissible-root bookkeeping: additionally remove the naturally
        // reductive locus kept = 1 before the exact count
        {
          MultiPoly Radm = Rclean;
          MultiPoly fac = MultiPoly::variable(Radm.vars, kept) -
                          MultiPoly::constant(Radm.vars, Rat(1));
          while (true) {
            auto q = Radm.exact_divide(fac);
            if (!q) break;
            Radm = *q;
          }
          if (!Radm.is_zero() && Radm.total_degree() > 0) {
            UPolyZ za = upoly::squarefree_part(to_upoly(Radm, kept));
            result.stats["generic_admissible_roots"] =
                upoly::count_real_roots(za) -
                (za.sign_at(Rat(0)) == 0 ? 1 : 0);
          } else {
            result.stats["generic_admissible_roots"] = 0;
          }
        }
        auto roots = isolate_univariate(Rclean, Rat(0), Rat(1000000), false);
        for (size_t i = 0; i < roots.intervals.size(); ++i) {
          Rat t_hat = (roots.intervals[i].lo + roots.intervals[i].hi) / 2;
          double tstar = roots.approx[i];
          if (tstar <= 1e-9) continue;
          // exact image in the eliminated variable at the refined root
          MultiPoly img = poly_substitute(P1, {{kept, t_hat}});
          if (img.is_zero() || img.total_degree() == 0) continue;
          auto sroots = isolate_univariate(img, Rat(0), Rat(1000000), false);
          for (double s0 : sroots.approx) {
            // the pair must annihilate P2 as well, up to evaluation noise
            double s = s0, t = tstar;
            if (s <= 1e-9) continue;
            auto rel_eval = [&](const MultiPoly& P) {
              double val = 0, mag = 0;
              std::map<std::string, double> pt;
              for (const auto& v : P.vars) pt[v] = 1.0;
              pt[elim] = s;
              pt[kept] = t;
              for (const auto& [e, c] : P.terms) {
                double term = to_double(c);
                for (size_t q = 0; q < P.vars.size(); ++q)
                  if (e[q] > 0) term *= std::pow(pt[P.vars[q]], e[q]);
                val += term;
                mag += std::abs(term);
              }
              return std::abs(val) / std::max(mag, 1e-300);
            };
            if (rel_eval(P2) > 1e-8) continue;
            Candidate cand;
            cand.branch = "generic";
            if (elim == "x6") {
              cand.x6 = s;
              cand.x8 = t;
            } else {
              cand.x6 = t;
              cand.x8 = s;
            }
            cands.push_back(cand);
          }
        }
      } else {
        result.notes.push_back("resultant vanished identically");
      }
    }
  }

  // x8 = 1 branch (c = 0)
  {
    auto comp1 = sym::build_components(C.spec, C.space, false, true);
    std::vector<MultiPoly> lin1;
    for (auto [a, b] : C.lin) lin1.push_back(sym::diff_num(comp1, a, b));
    bool ok = true;
    LinearSolve ls1;
    try {
      ls1 = solve_linear(lin1, C.L);
    } catch (const std::logic_error&) {
      ok = false;
      result.notes.push_back("x8=1 branch: linear stage singular");
    }
    if (ok) {
      std::vector<MultiPoly> den1{ls1.delta};
      for (const auto& nj : ls1.nums) den1.push_back(nj);
      std::vector<MultiPoly> finals;
      for (auto [a, b] : C.rem) {
        MultiPoly raw = substitute_solution(sym::diff_num(comp1, a, b), ls1);
        if (raw.is_zero()) continue;
        finals.push_back(strip_univariate(raw, den1));
      }
      auto final_poly = common_univariate(finals);
      if (final_poly && !final_poly->is_zero() && final_poly->total_degree() > 0) {
        result.artifacts["x8eq1_final"] = *final_poly;
        auto roots = isolate_univariate(*final_poly, Rat(0), Rat(1000000), true);
        for (size_t i = 0; i < roots.intervals.size(); ++i) {
          Candidate cand;
          cand.branch = "x8=1";
          cand.x6 = roots.approx[i];
          cand.x8 = 1.0;
          cand.exact_x8 = Quad(Rat(1));
          cand.exact_x6 = roots.exact[i];
          if (cand.x6 > 1e-9) {
            // metric values come from the x8 = 1 elimination
            SolveResult tmp;
            tmp.spec = C.spec;
            tmp.space = C.space;
            push_candidate_solution(tmp, ctx, cand, ls1, lin1, comp1, C.origin);
            for (auto& s : tmp.solutions) result.solutions.push_back(std::move(s));
            for (auto& r : tmp.rejected) result.rejected.push_back(std::move(r));
          }
        }
      }
    }
  }

  // x6 = 1 and x6 = x8 branches where those factors were stripped
  auto run_sub_branch = [&](const std::string& name) {
    bool relevant = false;
    for (const auto& s : rem)
      if (s.factors.count(name) && s.factors.at(name) > 0) relevant = true;
    if (!relevant) return;
    Assignment sub;
    if (name == "x6-1") sub["x6"] = Rat(1);
    else sub["x6"] = MultiPoly::variable(comp.vars, "x8");
    std::vector<MultiPoly> finals;
    for (const auto& s : rem) {
      if (s.factors.count(name) && s.factors.at(name) > 0) continue;  // vanishes
      MultiPoly f = poly_substitute(s.p, sub);
      if (!f.is_zero()) finals.push_back(strip_univariate(f, {}));
    }
    auto final_poly = common_univariate(finals);
    if (!final_poly || final_poly->is_zero() || final_poly->total_degree() == 0) return;
    auto roots = isolate_univariate(*final_poly, Rat(0), Rat(1000000), false);
    for (size_t i = 0; i < roots.intervals.size(); ++i) {
      double t = roots.approx[i];
      if (t <= 1e-9) continue;
      Candidate cand;
      cand.branch = name;
      if (name == "x6-1") {
        cand.x6 = 1.0;
        cand.x8 = t;
      } else {
        cand.x6 = t;
        cand.x8 = t;
      }
      cands.push_back(cand);
    }
  };
  run_sub_branch("x6-1");
  run_sub_branch("x6-x8");

  for (const auto& cand : cands)
    push_candidate_solution(result, ctx, cand, ls, lin_eqs, comp, C.origin);

  detail::sort_and_dedup(result);
  return result;
}

MultiPoly substitute_fraction(const MultiPoly& eq, const std::string& var,
                              const MultiPoly& num, const MultiPoly& den) {
  int maxdeg = eq.degree(var);
  MultiPoly out(eq.vars);
  int vi = eq.var_index(var);
  for (const auto& [e, c] : eq.terms) {
    MultiPoly term(eq.vars);
    auto e2 = e;
    int k = e2[size_t(vi)];
    e2[size_t(vi)] = 0;
    term.terms[e2] = c;
    for (int t = 0; t < k; ++t) term = term * num;
    for (int t = k; t < maxdeg; ++t) term = term * den;
    out += term;
  }
  return out;
}

}  // namespace

SolveResult solve_su_l1_m2(int n) {
  if (n < 2) throw std::invalid_argument("solve_su_l1_m2: n >= 2 required");
  BivarCase C;
  C.spec = FlagSpec(1, 2, n);
  C.space = SpaceKind::Group;
  C.lin = {{4, 5}, {5, 6}, {6, 7}, {7, 8}};
  C.rem = {{2, 3}, {3, 4}};
  C.L = {"u2", "u3", "v4", "v5"};
  C.origin = "su_l1_m2";
  return solve_bivariate(C);
}

SolveResult solve_su_small(SmallGroup which) {
  BivarCase C;
  C.space = SpaceKind::Group;
  C.full_artifacts = true;
  if (which == SmallGroup::SU4) {
    C.spec = FlagSpec(1, 1, 2);
    C.lin = {{4, 5}, {5, 6}, {6, 7}};
    C.rem = {{3, 4}, {7, 8}};
    C.L = {"u3", "v4", "v5"};
    C.origin = "su4";
  } else {
    C.spec = FlagSpec(1, 1, 1);
    C.lin = {{5, 6}, {6, 7}};
    C.rem = {{4, 5}, {7, 8}};
    C.L = {"v4", "v5"};
    C.origin = "su3";
  }
  return solve_bivariate(C);
}

SolveResult solve_stiefel_small(SmallStiefel which) {
  BivarCase C;
  C.space = SpaceKind::Stiefel;
  if (which == SmallStiefel::V2C4) {
    C.spec = FlagSpec(1, 1, 2);
    C.lin = {{4, 5}, {5, 6}};
    C.rem = {{6, 7}, {7, 8}};
    C.L = {"v4", "v5"};
    C.origin = "v2c4";
  } else if (which == SmallStiefel::V3C5) {
    C.spec = FlagSpec(1, 2, 2);
    C.lin = {{5, 6}, {6, 7}, {7, 8}};
    C.rem = {{2, 4}, {4, 5}};
    C.L = {"u2", "v4", "v5"};
    C.origin = "v3c5";
  } else {
    C.spec = FlagSpec(2, 2, 2);
    C.lin = {{4, 5}, {5, 6}, {6, 7}, {7, 8}};
    C.rem = {{1, 2}, {2, 4}};
    C.L = {"u1", "u2", "v4", "v5"};
    C.origin = "v4c6";
  }
  return solve_bivariate(C);
}

namespace {

struct L2M2Stages {
  sym::Components comp;
  LinearSolve ls;                 // u1, u3, v4 in terms of (v5, x6)
  MultiPoly A5, B5;               // v5 = -B5/A5
  MultiPoly e3;                   // the remaining component difference
  std::vector<MultiPoly> dens;
  MultiPoly F;
};

L2M2Stages l2_m2_stages(int n) {
  if (n < 2) throw std::invalid_argument("solve_su_l2_m2: n >= 2 required");
  FlagSpec spec(2, 2, n);
  L2M2Stages st{sym::build_components(spec, SpaceKind::Group, false, true), {}, {}, {}, {}, {}, {}};
  auto& comp = st.comp;

  if (!sym::lambda_num(comp, 4).is_zero())
    throw std::logic_error("solve_su_l2_m2: r4 != v4/4");
  MultiPoly u1v = MultiPoly::variable(comp.vars, "u1");
  auto sub_u2 = [&](MultiPoly p) { return poly_substitute(p, {{"u2", u1v}}); };
  if (!sub_u2(sym::diff_num(comp, 7, 8)).is_zero() ||
      !sub_u2(sym::diff_num(comp, 1, 2)).is_zero())
    throw std::logic_error("solve_su_l2_m2: symmetry reduction failed");

  std::vector<MultiPoly> lin = {sub_u2(sym::lambda_num(comp, 5)),
                                sub_u2(sym::lambda_num(comp, 6)),
                                sub_u2(sym::lambda_num(comp, 7))};
  st.ls = solve_linear(lin, {"u1", "u3", "v4"});
  st.dens = {st.ls.delta};
  for (const auto& nj : st.ls.nums) st.dens.push_back(nj);

  MultiPoly e1 = substitute_solution(sub_u2(sym::lambda_num(comp, 1)), st.ls);
  e1 = strip_equation(e1, st.dens, false).p;
  MultiPoly v5mx6 =
      MultiPoly::variable(e1.vars, "v5") - MultiPoly::variable(e1.vars, "x6");
  auto e1q = e1.exact_divide(v5mx6);
  if (!e1q) throw std::logic_error("solve_su_l2_m2: expected (v5 - x6) factor");
  MultiPoly lin_v5 = *e1q;
  if (lin_v5.degree("v5") != 1) throw std::logic_error("solve_su_l2_m2: v5 stage not linear");
  st.A5 = lin_v5.coeff_of("v5", 1);
  st.B5 = lin_v5.coeff_of("v5", 0);

  st.e3 = substitute_solution(sub_u2(sym::lambda_num(comp, 3)), st.ls);
  st.e3 = strip_equation(st.e3, st.dens, false).p;
  MultiPoly Fraw = substitute_fraction(st.e3, "v5", -st.B5, st.A5);
  std::vector<MultiPoly> dens2 = st.dens;
  dens2.push_back(st.A5);
  dens2.push_back(st.B5);
  st.F = strip_univariate(Fraw, dens2);
  return st;
}

}  // namespace

MultiPoly su_l2_m2_characteristic(int n) { return l2_m2_stages(n).F; }

SolveResult solve_su_l2_m2(int n) {
  FlagSpec spec(2, 2, n);
  SolveResult result;
  result.spec = spec;
  result.space = SpaceKind::Group;
  PipelineCtx ctx(spec, SpaceKind::Group);
  L2M2Stages stages = l2_m2_stages(n);
  auto& comp = stages.comp;

  const LinearSolve& ls = stages.ls;
  const MultiPoly &A5 = stages.A5, &B5 = stages.B5, &e3 = stages.e3;
  const std::vector<MultiPoly>& dens = stages.dens;
  const MultiPoly& F = stages.F;
  result.artifacts["F"] = F;

  UPolyZ Fz = upoly::squarefree_part(to_upoly(F, "x6"));
  {
    auto chain = upoly::sturm_chain(to_upoly(F, "x6"));
    Rat bound = upoly::root_bound(to_upoly(F, "x6"));
    result.stats["f_positive_roots"] =
        upoly::count_roots(chain, Rat(0), bound);
  }

  auto add_solution = [&](double x6, const std::optional<Quad>& exact_x6, bool nr_branch,
                          double v5_override, bool has_v5_override) {
    std::map<std::string, double> pt;
    for (const auto& v : comp.vars) pt[v] = 1.0;
    pt["x6"] = x6;
    double v5 = has_v5_override ? v5_override
                                : -B5.eval_double(pt) / A5.eval_double(pt);
    pt["v5"] = v5;
    double dv = ls.delta.eval_double(pt);
    MetricParams metric;
    metric.space = SpaceKind::Group;
    metric.x6 = x6;
    metric.x7 = metric.x8 = 1;
    metric.v5 = v5;
    std::map<std::string, double> vals;
    for (size_t j = 0; j < ls.unknowns.size(); ++j)
      vals[ls.unknowns[j]] = ls.nums[j].eval_double(pt) / dv;
    metric.u1 = metric.u2 = vals["u1"];
    metric.u3 = vals["u3"];
    metric.v4 = vals["v4"];
    bool positive = true;
    for (int k = 1; k <= 8; ++k)
      if (!(metric.coeff(k) > 1e-12)) positive = false;
    if (!positive) {
      result.rejected.push_back({metric, "non-positive coefficient"});
      return;
    }
    if (metric.u3 > 0) result.stats["u3_positive_roots"] += 1;
    EinsteinSolution sol;
    sol.spec = spec;
    sol.space = SpaceKind::Group;
    sol.metric = metric;
    sol.origin = nr_branch ? "su_l2_m2/v5=x6" : "su_l2_m2";
    double lambda = 0;
    sol.residual = detail::certify(*ctx.engine, spec, metric, &lambda);
    sol.lambda = lambda;
    if (!(sol.residual < 1e-9)) {
      result.rejected.push_back({metric, "residual " + std::to_string(sol.residual)});
      return;
    }
    if (exact_x6 && !has_v5_override) {
      std::map<std::string, Quad> qt;
      for (const auto& v : comp.vars) qt[v] = Quad(Rat(1));
      qt["x6"] = *exact_x6;
      Quad a5 = eval_quad(A5, qt);
      if (!a5.is_zero()) {
        Quad v5q = (Quad(Rat(0)) - eval_quad(B5, qt)) / a5;
        qt["v5"] = v5q;
        Quad dq = eval_quad(ls.delta, qt);
        if (!dq.is_zero()) {
          MetricQ mq;
          mq.space = SpaceKind::Group;
          mq.x6 = *exact_x6;
          mq.v5 = v5q;
          for (size_t j = 0; j < ls.unknowns.size(); ++j) {
            Quad val = eval_quad(ls.nums[j], qt) / dq;
            if (ls.unknowns[j] == "u1") mq.u1 = mq.u2 = val;
            if (ls.unknowns[j] == "u3") mq.u3 = val;
            if (ls.unknowns[j] == "v4") mq.v4 = val;
          }
          auto rc = ricci_closed_exact(spec, mq);
          bool all_equal = rc.r0_bracket.is_zero();
          std::optional<Quad> lam;
          for (int k = 1; k <= 8; ++k) {
            if (!rc.present[size_t(k)]) continue;
            if (!lam) lam = rc.r[size_t(k)];
            else if (!(rc.r[size_t(k)] == *lam)) all_equal = false;
          }
          if (all_equal && lam) {
            sol.exact_certified = true;
            sol.exact_form = "x6=" + exact_x6->str();
            sol.exact_values["x6"] = exact_x6->str();
            sol.exact_values["lambda"] = lam->str();
          }
        }
      }
    }
    sol.classification = classify_solution(spec, metric);
    result.solutions.push_back(std::move(sol));
  };

  auto roots = isolate_univariate(F, Rat(0), Rat(1000000), true);
  for (size_t i = 0; i < roots.intervals.size(); ++i)
    add_solution(roots.approx[i], roots.exact[i], false, 0, false);

  // naturally reductive branch v5 = x6
  {
    MultiPoly e3nr = substitute_fraction(e3, "v5", MultiPoly::variable(e3.vars, "x6"),
                                         MultiPoly::constant(e3.vars, Rat(1)));
    MultiPoly G = strip_univariate(e3nr, dens);
    if (!G.is_zero() && G.total_degree() > 0) {
      auto nr_roots = isolate_univariate(G, Rat(0), Rat(1000000), true);
      for (size_t i = 0; i < nr_roots.intervals.size(); ++i)
        add_solution(nr_roots.approx[i], nr_roots.exact[i], true, nr_roots.approx[i], true);
    }
  }

  detail::sort_and_dedup(result);
  return result;
}

SolveResult solve_stiefel_general(int m, int n) {
  if (m < 2 || n < 2) throw std::invalid_argument("solve_stiefel_general: m, n >= 2");
  FlagSpec spec(m, m, n);
  SolveResult result;
  result.spec = spec;
  result.space = SpaceKind::Stiefel;
  PipelineCtx ctx(spec, SpaceKind::Stiefel);
  auto comp = sym::build_components(spec, SpaceKind::Stiefel, false, true);

  MultiPoly u1v = MultiPoly::variable(comp.vars, "u1");
  auto sub_u2 = [&](MultiPoly p) { return poly_substitute(p, {{"u2", u1v}}); };
  if (!sub_u2(sym::diff_num(comp, 7, 8)).is_zero())
    throw std::logic_error("solve_stiefel_general: r7 != r8");

  std::vector<MultiPoly> lin = {sub_u2(sym::diff_num(comp, 4, 5)),
                                sub_u2(sym::diff_num(comp, 5, 6)),
                                sub_u2(sym::diff_num(comp, 6, 7))};
  LinearSolve ls = solve_linear(lin, {"u1", "v4", "v5"});
  std::vector<MultiPoly> dens{ls.delta};
  for (const auto& nj : ls.nums) dens.push_back(nj);

  MultiPoly f2 = substitute_solution(sub_u2(sym::diff_num(comp, 2, 4)), ls);
  MultiPoly AB = strip_equation(f2, dens, false).p;  // x6-univariate

  // Jensen ansatz: u1 = u2 = v5 = x6 and v4 from r4 - r5
  MultiPoly A_regen;
  {
    const auto& vars = comp.vars;
    MultiPoly x6v = MultiPoly::variable(vars, "x6");
    Assignment ansatz{{"u1", x6v}, {"u2", x6v}, {"v5", x6v}};
    MultiPoly f3a = poly_substitute(sym::diff_num(comp, 4, 5), ansatz);
    // linear in v4: v4 = -b/a
    if (f3a.degree("v4") != 1)
      throw std::logic_error("solve_stiefel_general: unexpected v4 stage");
    MultiPoly va = f3a.coeff_of("v4", 1), vb = f3a.coeff_of("v4", 0);
    // on the ansatz manifold every remaining equation reduces to a
    // multiple of the same quadratic; take the gcd across all of them
    std::optional<UPolyZ> acc;
    for (auto [a, b] :
         std::vector<std::pair<int, int>>{{2, 4}, {5, 6}, {6, 7}, {7, 8}}) {
      MultiPoly chk = substitute_fraction(poly_substitute(sym::diff_num(comp, a, b), ansatz),
                                          "v4", -vb, va);
      MultiPoly red = strip_univariate(chk, {va, vb});
      if (red.is_zero() || red.total_degree() == 0) continue;
      UPolyZ z = to_upoly(red, "x6");
      acc = acc ? upoly::gcd(*acc, z) : z;
    }
    if (!acc || acc->deg() < 1)
      throw std::logic_error("solve_stiefel_general: empty ansatz locus");
    UPolyZ az = upoly::squarefree_part(*acc);
    {
      MultiPoly Af(comp.vars);
      int vi = Af.var_index("x6");
      for (size_t i = 0; i < az.c.size(); ++i)
        if (az.c[i] != 0) {
          std::vector<int> e(Af.vars.size(), 0);
          e[size_t(vi)] = int(i);
          Af.terms[e] = Rat(az.c[i]);
        }
      A_regen = Af;
    }
    if (A_regen.degree("x6") != 2)
      throw std::logic_error("solve_stiefel_general: A is not quadratic");
  }
  result.artifacts["A"] = A_regen;

  // B = AB / (A * x6^k), exact division
  MultiPoly B = AB;
  {
    auto [b1, a1] = align_vars(B, A_regen);
    auto q = b1.exact_divide(a1);
    if (!q) throw std::logic_error("solve_stiefel_general: A does not divide the remainder");
    B = strip_univariate(*q, {});
  }
  result.artifacts["B"] = B;
  if (B.degree("x6") != 8)
    result.notes.push_back("unexpected B degree " + std::to_string(B.degree("x6")));

  // sign table entries for B
  {
    Rat mid = m >= 6 ? rat(3, 2) : rat(4, 3);
    auto val = [&](const Rat& x) { return B.eval({{"x6", x}}); };
    result.stats["B_at_0_positive"] = val(Rat(0)) > 0 ? 1 : 0;
    result.stats["B_at_mid_negative"] = val(mid) < 0 ? 1 : 0;
    result.stats["B_at_2_positive"] = val(Rat(2)) > 0 ? 1 : 0;
    result.stats["B_mid_num"] = to_double(mid);
  }

  auto add_from_x6 = [&](double x6, const std::optional<Quad>& exact_x6, bool jensen) {
    std::map<std::string, double> pt;
    for (const auto& v : comp.vars) pt[v] = 1.0;
    pt["x6"] = x6;
    double dv = ls.delta.eval_double(pt);
    MetricParams metric;
    metric.space = SpaceKind::Stiefel;
    metric.x6 = x6;
    metric.x7 = metric.x8 = 1;
    std::map<std::string, double> vals;
    for (size_t j = 0; j < ls.unknowns.size(); ++j)
      vals[ls.unknowns[j]] = ls.nums[j].eval_double(pt) / dv;
    metric.u1 = metric.u2 = vals["u1"];
    metric.v4 = vals["v4"];
    metric.v5 = vals["v5"];
    for (int k = 1; k <= 8; ++k)
      if (spec.block_present(k, SpaceKind::Stiefel) && !(metric.coeff(k) > 1e-12)) {
        result.rejected.push_back({metric, "non-positive coefficient"});
        return;
      }
    EinsteinSolution sol;
    sol.spec = spec;
    sol.space = SpaceKind::Stiefel;
    sol.metric = metric;
    sol.origin = jensen ? "stiefel_general/A" : "stiefel_general/B";
    double lambda = 0;
    sol.residual = detail::certify(*ctx.engine, spec, metric, &lambda);
    sol.lambda = lambda;
    if (!(sol.residual < 1e-9)) {
      result.rejected.push_back({metric, "residual " + std::to_string(sol.residual)});
      return;
    }
    if (exact_x6) {
      std::map<std::string, Quad> qt;
      for (const auto& v : comp.vars) qt[v] = Quad(Rat(1));
      qt["x6"] = *exact_x6;
      Quad dq = eval_quad(ls.delta, qt);
      if (!dq.is_zero()) {
        MetricQ mq;
        mq.space = SpaceKind::Stiefel;
        mq.x6 = *exact_x6;
        for (size_t j = 0; j < ls.unknowns.size(); ++j) {
          Quad val = eval_quad(ls.nums[j], qt) / dq;
          if (ls.unknowns[j] == "u1") mq.u1 = mq.u2 = val;
          if (ls.unknowns[j] == "v4") mq.v4 = val;
          if (ls.unknowns[j] == "v5") mq.v5 = val;
        }
        auto rc = ricci_closed_exact(spec, mq);
        bool all_equal = rc.r0_bracket.is_zero();
        std::optional<Quad> lam;
        for (int k = 1; k <= 8; ++k) {
          if (!rc.present[size_t(k)]) continue;
          if (!lam) lam = rc.r[size_t(k)];
          else if (!(rc.r[size_t(k)] == *lam)) all_equal = false;
        }
        if (all_equal && lam) {
          sol.exact_certified = true;
          sol.exact_form = "x6=" + exact_x6->str();
          sol.exact_values["x6"] = exact_x6->str();
          sol.exact_values["lambda"] = lam->str();
        }
      }
    }
    sol.classification = classify_solution(spec, metric);
    result.solutions.push_back(std::move(sol));
  };

  // Jensen pair: exact roots of A
  {
    auto roots = isolate_univariate(A_regen, Rat(0), Rat(1000000), true);
    result.stats["A_positive_roots"] = double(roots.intervals.size());
    for (size_t i = 0; i < roots.intervals.size(); ++i)
      add_from_x6(roots.approx[i], roots.exact[i], true);
  }
  // non-Jensen roots of B on (0, 2)
  {
    auto roots = isolate_univariate(B, Rat(0), Rat(2), true);
    result.stats["B_roots_in_0_2"] = double(roots.intervals.size());
    for (size_t i = 0; i < roots.intervals.size(); ++i)
      add_from_x6(roots.approx[i], roots.exact[i], false);
  }

  detail::sort_and_dedup(result);
  return result;
}

SolveResult solve_auto(const FlagSpec& spec, SpaceKind space, const SolveOptions& opts) {
  if (opts.pipeline == "newton") return solve_generic_newton(spec, space, opts.newton);
  if (space == SpaceKind::Group) {
    if (spec.l == 1 && spec.m == 1 && spec.n == 1) return solve_su_small(SmallGroup::SU3);
    if (spec.l == 1 && spec.m == 1 && spec.n == 2) return solve_su_small(SmallGroup::SU4);
    if (spec.l == 1 && spec.m == 2 && spec.n >= 2) return solve_su_l1_m2(spec.n);
    if (spec.l == 2 && spec.m == 2 && spec.n >= 2) return solve_su_l2_m2(spec.n);
  } else {
    if (spec.l == 1 && spec.m == 1 && spec.n == 2)
      return solve_stiefel_small(SmallStiefel::V2C4);
    if (spec.l == 1 && spec.m == 2 && spec.n == 2)
      return solve_stiefel_small(SmallStiefel::V3C5);
    if (spec.l == 2 && spec.m == 2 && spec.n == 2)
      return solve_stiefel_small(SmallStiefel::V4C6);
    if (spec.l == spec.m && spec.l >= 2 && spec.n >= 2)
      return solve_stiefel_general(spec.m, spec.n);
  }
  return solve_generic_newton(spec, space, opts.newton);
}

}  // namespace einstein
