#include "einstein/symbolic.hpp"

#include <climits>

namespace einstein {

namespace sym {

namespace {

const std::vector<std::string>& universe() {
  static const std::vector<std::string> u{"u1", "u2", "u3", "v4", "v5", "x6", "x8"};
  return u;
}

MultiPoly cpoly(const Rat& c) { return MultiPoly::constant(universe(), c); }
MultiPoly vpoly(const std::string& n) { return MultiPoly::variable(universe(), n); }

Frac f_zero() { return Frac{cpoly(Rat(0)), {}, 0}; }
Frac f_const(const Rat& c) { return Frac{cpoly(c), {}, 0}; }

Frac f_add(const Frac& a, const Frac& b, const MultiPoly& W) {
  Frac out;
  out.den_w = std::max(a.den_w, b.den_w);
  out.den_mon = a.den_mon;
  for (const auto& [v, e] : b.den_mon) {
    int& cur = out.den_mon[v];
    cur = std::max(cur, e);
  }
  auto lift = [&](const Frac& f) {
    MultiPoly num = f.num;
    for (const auto& [v, e] : out.den_mon) {
      int have = 0;
      auto it = f.den_mon.find(v);
      if (it != f.den_mon.end()) have = it->second;
      for (int t = have; t < e; ++t) num = num * vpoly(v);
    }
    for (int t = f.den_w; t < out.den_w; ++t) num = num * W;
    return num;
  };
  out.num = lift(a) + lift(b);
  return out;
}

Frac f_sub(const Frac& a, const Frac& b, const MultiPoly& W) {
  Frac nb = b;
  nb.num = -nb.num;
  return f_add(a, nb, W);
}

Frac f_scale(Frac f, const Rat& c) {
  f.num *= c;
  return f;
}

Frac f_div_var(Frac f, const std::string& v, int pow) {
  if (!v.empty() && pow > 0) f.den_mon[v] += pow;
  return f;
}

Frac f_mul_var(Frac f, const std::string& v) {
  if (v.empty()) return f;
  auto it = f.den_mon.find(v);
  if (it != f.den_mon.end() && it->second > 0) {
    if (--it->second == 0) f.den_mon.erase(it);
    return f;
  }
  f.num = f.num * vpoly(v);
  return f;
}

/// Cancel monomial and W factors shared by the numerator and denominator.
Frac f_reduce(Frac f, const MultiPoly& W) {
  if (f.num.is_zero()) {
    f.den_mon.clear();
    f.den_w = 0;
    return f;
  }
  for (auto it = f.den_mon.begin(); it != f.den_mon.end();) {
    int vi = f.num.var_index(it->first);
    int low = INT_MAX;
    for (const auto& [e, c] : f.num.terms) low = std::min(low, e[size_t(vi)]);
    int cancel = std::min(low, it->second);
    if (cancel > 0) {
      MultiPoly out(f.num.vars);
      for (const auto& [e, c] : f.num.terms) {
        auto e2 = e;
        e2[size_t(vi)] -= cancel;
        out.terms[e2] = c;
      }
      f.num = std::move(out);
      it->second -= cancel;
    }
    it = it->second == 0 ? f.den_mon.erase(it) : std::next(it);
  }
  while (f.den_w > 0) {
    auto q = f.num.exact_divide(W);
    if (!q) break;
    f.num = std::move(*q);
    --f.den_w;
  }
  return f;
}

}  // namespace

Components build_components(const FlagSpec& spec, SpaceKind space, bool c_solved,
                            bool x8_fixed) {
  if (c_solved && x8_fixed)
    throw std::invalid_argument("build_components: solved c requires free x8");
  Components comp;
  comp.spec = spec;
  comp.space = space;
  comp.c_solved = c_solved;
  comp.x8_fixed = x8_fixed;
  comp.vars = universe();
  const long l = spec.l, m = spec.m, n = spec.n, N = spec.N();
  comp.W = c_solved ? cpoly(rat(l)) * vpoly("x8") * vpoly("x8") + cpoly(rat(m))
                    : cpoly(Rat(1));

  auto yname = [&](int k) -> std::string {
    switch (k) {
      case 1: return "u1";
      case 2: return "u2";
      case 3: return "u3";
      case 4: return "v4";
      case 5: return "v5";
      case 6: return "x6";
      case 7: return "";  // x7 = 1
      case 8: return comp.x8_fixed ? std::string{} : "x8";
    }
    throw std::out_of_range("yname");
  };

  auto cr = center_rotations(spec);
  const Rat omega2 = rat(l * m * n, N);
  std::array<Rat, 9> A{}, B{}, E{};
  for (int j = 6; j <= 8; ++j) {
    A[size_t(j)] = cr.alpha2d[size_t(j)];
    B[size_t(j)] = cr.beta2d[size_t(j)];
    E[size_t(j)] = rat(cr.eps[size_t(j)], l + m);
  }

  // {5;jj}: the only c-dependent entries in the normal-form gauge
  auto q5 = [&](int j) -> Frac {
    if (!c_solved) return f_const(B[size_t(j)]);
    MultiPoly one_m_x82 = cpoly(Rat(1)) - vpoly("x8") * vpoly("x8");
    MultiPoly num = (one_m_x82 * one_m_x82 * cpoly(A[size_t(j)]) +
                     one_m_x82 * comp.W * cpoly(2 * E[size_t(j)])) *
                        cpoly(omega2) +
                    comp.W * comp.W * cpoly(B[size_t(j)]);
    return Frac{std::move(num), {}, 2};
  };

  // Q-structure constants at gauge (1, 0, c, 1); the mixed center rows
  // {j;4j}, {j;5j} cancel identically in the component sums and are omitted
  auto qentry = [&](int k, int i, int j) -> Frac {
    if (space == SpaceKind::Stiefel && (k == 3 || i == 3 || j == 3)) return f_zero();
    if (k == i && i == j) {
      long t = k == 1 ? l : k == 2 ? m : k == 3 ? n : 0;
      return t > 0 ? f_const(rat(t * (t * t - 1), N)) : f_zero();
    }
    std::array<int, 3> s{k, i, j};
    std::sort(s.begin(), s.end());
    auto is = [&](int a, int b, int c) { return s == std::array<int, 3>{a, b, c}; };
    if (k == 4 || k == 5) {
      if (i == j && i >= 6) return k == 4 ? f_const(A[size_t(i)]) : q5(i);
      return f_zero();
    }
    if (i == 4 || i == 5 || j == 4 || j == 5) return f_zero();  // mixed rows omitted
    if (is(1, 6, 6)) return f_const(rat(m * (l * l - 1), N));
    if (is(1, 7, 7)) return f_const(rat(n * (l * l - 1), N));
    if (is(2, 6, 6)) return f_const(rat(l * (m * m - 1), N));
    if (is(2, 8, 8)) return f_const(rat(n * (m * m - 1), N));
    if (is(3, 7, 7)) return f_const(rat(l * (n * n - 1), N));
    if (is(3, 8, 8)) return f_const(rat(m * (n * n - 1), N));
    if (is(6, 7, 8)) return f_const(rat(l * m * n, N));
    return f_zero();
  };

  const auto d = spec.dims();
  for (int k = 1; k <= 8; ++k) comp.present[size_t(k)] = spec.block_present(k, space);

  for (int k : {1, 2, 3, 6, 7, 8}) {
    if (!comp.present[size_t(k)]) continue;
    Frac first = f_zero(), second = f_zero();
    for (int j = 1; j <= 8; ++j) {
      if (!comp.present[size_t(j)]) continue;
      for (int i = 1; i <= 8; ++i) {
        if (!comp.present[size_t(i)]) continue;
        Frac qk = qentry(k, j, i);
        if (!qk.num.is_zero()) {
          qk = f_div_var(std::move(qk), yname(j), 1);
          qk = f_div_var(std::move(qk), yname(i), 1);
          first = f_add(first, qk, comp.W);
        }
        Frac qj = qentry(j, k, i);
        if (!qj.num.is_zero()) {
          qj = f_mul_var(std::move(qj), yname(j));
          qj = f_div_var(std::move(qj), yname(i), 1);
          second = f_add(second, qj, comp.W);
        }
      }
    }
    Frac rk = f_div_var(f_const(rat(1, 2)), yname(k), 1);
    Frac t1 = f_scale(first, rat(1, 4 * d[size_t(k)]));
    t1 = f_mul_var(std::move(t1), yname(k));
    Frac t2 = f_scale(second, rat(1, 2 * d[size_t(k)]));
    t2 = f_div_var(std::move(t2), yname(k), 1);
    rk = f_add(rk, t1, comp.W);
    rk = f_sub(rk, t2, comp.W);
    comp.r[size_t(k)] = f_reduce(std::move(rk), comp.W);
  }

  for (int k : {4, 5}) {
    Frac acc = f_zero();
    for (int j = 6; j <= 8; ++j) {
      Frac q = k == 4 ? f_const(A[size_t(j)]) : q5(j);
      q = f_div_var(std::move(q), yname(j), 2);
      acc = f_add(acc, q, comp.W);
    }
    acc = f_scale(acc, rat(1, 4));
    acc = f_mul_var(std::move(acc), yname(k));
    comp.r[size_t(k)] = f_reduce(std::move(acc), comp.W);
    comp.present[size_t(k)] = true;
  }

  // r0 bracket over omega: sum_j [rho A_j + E_j] / x_j^2
  {
    Frac acc = f_zero();
    for (int j = 6; j <= 8; ++j) {
      Frac t;
      if (c_solved) {
        MultiPoly num =
            (cpoly(Rat(1)) - vpoly("x8") * vpoly("x8")) * cpoly(A[size_t(j)]) +
            comp.W * cpoly(E[size_t(j)]);
        t = Frac{std::move(num), {}, 1};
      } else {
        t = f_const(E[size_t(j)]);
      }
      t = f_div_var(std::move(t), yname(j), 2);
      acc = f_add(acc, t, comp.W);
    }
    comp.r[0] = std::move(acc);
  }
  return comp;
}

MultiPoly diff_num(const Components& comp, int a, int b) {
  return f_reduce(f_sub(comp.r[size_t(a)], comp.r[size_t(b)], comp.W), comp.W).num;
}

MultiPoly lambda_num(const Components& comp, int a) {
  Frac lam{vpoly("v4") * cpoly(rat(1, 4)), {}, 0};
  return f_reduce(f_sub(comp.r[size_t(a)], lam, comp.W), comp.W).num;
}

double eval_component(const Components& comp, int k,
                      const std::map<std::string, double>& point) {
  const Frac& f = comp.r[size_t(k)];
  double num = f.num.eval_double(point);
  double den = 1;
  for (const auto& [v, e] : f.den_mon) den *= std::pow(point.at(v), e);
  if (f.den_w > 0) den *= std::pow(comp.W.eval_double(point), f.den_w);
  return num / den;
}

}  // namespace sym

LinearSolve solve_linear(const std::vector<MultiPoly>& eqs,
                         const std::vector<std::string>& unknowns) {
  const size_t k = unknowns.size();
  if (eqs.size() != k) throw std::invalid_argument("solve_linear: size mismatch");
  const auto& vars = eqs[0].vars;
  std::vector<int> uidx;
  for (const auto& u : unknowns) uidx.push_back(eqs[0].var_index(u));
  std::vector<std::vector<MultiPoly>> M(k, std::vector<MultiPoly>(k, MultiPoly(vars)));
  std::vector<MultiPoly> rhs(k, MultiPoly(vars));
  for (size_t i = 0; i < k; ++i) {
    for (const auto& [e, c] : eqs[i].terms) {
      int total = 0, which = -1;
      for (size_t j = 0; j < k; ++j) {
        int p = e[size_t(uidx[j])];
        total += p;
        if (p > 0) which = int(j);
      }
      if (total > 1) throw std::logic_error("solve_linear: equation not linear");
      auto e2 = e;
      if (total == 1) {
        e2[size_t(uidx[size_t(which)])] = 0;
        M[i][size_t(which)].terms[e2] += c;
        if (M[i][size_t(which)].terms[e2] == 0) M[i][size_t(which)].terms.erase(e2);
      } else {
        rhs[i].terms[e2] -= c;
        if (rhs[i].terms[e2] == 0) rhs[i].terms.erase(e2);
      }
    }
  }
  LinearSolve ls;
  ls.unknowns = unknowns;
  ls.delta = poly_det(M);
  if (ls.delta.is_zero()) throw std::logic_error("solve_linear: singular system");
  for (size_t j = 0; j < k; ++j) {
    auto Mj = M;
    for (size_t i = 0; i < k; ++i) Mj[i][j] = rhs[i];
    ls.nums.push_back(poly_det(Mj));
  }
  return ls;
}

MultiPoly substitute_solution(const MultiPoly& eq, const LinearSolve& ls) {
  const auto& vars = eq.vars;
  std::vector<int> uidx;
  for (const auto& u : ls.unknowns) uidx.push_back(eq.var_index(u));
  int maxdeg = 0;
  for (const auto& [e, c] : eq.terms) {
    int t = 0;
    for (int ui : uidx) t += e[size_t(ui)];
    maxdeg = std::max(maxdeg, t);
  }
  MultiPoly out(vars);
  for (const auto& [e, c] : eq.terms) {
    MultiPoly term(vars);
    auto e2 = e;
    int t = 0;
    for (int ui : uidx) {
      t += e[size_t(ui)];
      e2[size_t(ui)] = 0;
    }
    term.terms[e2] = c;
    for (size_t j = 0; j < uidx.size(); ++j)
      for (int rep = 0; rep < e[size_t(uidx[j])]; ++rep) term = term * ls.nums[j];
    for (int rep = t; rep < maxdeg; ++rep) term = term * ls.delta;
    out += term;
  }
  return out;
}

namespace {

MultiPoly divide_out_var(MultiPoly p, size_t vi) {
  MultiPoly out(p.vars);
  for (auto& [e, c] : p.terms) {
    auto e2 = e;
    e2[vi] -= 1;
    out.terms[e2] = c;
  }
  return out;
}

}  // namespace

Stripped strip_equation(MultiPoly p, const std::vector<MultiPoly>& den_factors,
                        bool strip_branch_factors) {
  Stripped out;
  if (p.is_zero()) {
    out.p = p;
    return out;
  }
  auto branch = [&](const std::string& name) -> MultiPoly {
    const auto& vars = p.vars;
    if (name == "x6-1")
      return MultiPoly::variable(vars, "x6") - MultiPoly::constant(vars, Rat(1));
    if (name == "x8-1")
      return MultiPoly::variable(vars, "x8") - MultiPoly::constant(vars, Rat(1));
    return MultiPoly::variable(vars, "x6") - MultiPoly::variable(vars, "x8");
  };
  bool progress = true;
  while (progress && !p.is_zero()) {
    progress = false;
    for (size_t vi = 0; vi < p.vars.size(); ++vi) {
      while (!p.is_zero()) {
        bool all = true;
        for (const auto& [e, c] : p.terms)
          if (e[vi] == 0) {
            all = false;
            break;
          }
        if (!all) break;
        p = divide_out_var(std::move(p), vi);
        progress = true;
      }
    }
    for (const auto& f : den_factors) {
      if (f.is_zero() || f.total_degree() < 1) continue;
      auto [pf, ff] = align_vars(p, f);
      bool any = false;
      while (true) {
        auto q = pf.exact_divide(ff);
        if (!q) break;
        pf = std::move(*q);
        any = progress = true;
      }
      if (any) p = pf;
    }
    if (strip_branch_factors) {
      for (const std::string name : {"x6-1", "x8-1", "x6-x8"}) {
        MultiPoly f = branch(name);
        while (true) {
          auto q = p.exact_divide(f);
          if (!q) break;
          p = std::move(*q);
          out.factors[name] += 1;
          progress = true;
        }
      }
    }
  }
  if (!p.terms.empty() && sgn(p.terms.rbegin()->second) < 0) p = -p;
  out.p = p.primitive();
  return out;
}

MultiPoly strip_univariate(MultiPoly p, const std::vector<MultiPoly>& den_factors) {
  using upoly::UPolyZ;
  std::string var;
  for (const auto& v : p.vars)
    if (p.degree(v) > 0) {
      if (!var.empty()) throw std::invalid_argument("strip_univariate: not univariate");
      var = v;
    }
  if (var.empty()) return p;
  auto to_up = [&](const MultiPoly& f, const std::string& v) {
    std::vector<Rat> c(size_t(f.degree(v) + 1), Rat(0));
    int vi = f.var_index(v);
    for (const auto& [e, cc] : f.terms) c[size_t(e[size_t(vi)])] = cc;
    return upoly::from_rat_coeffs(c);
  };
  UPolyZ z = to_up(p, var);
  size_t low = 0;
  while (low < z.c.size() && z.c[low] == 0) ++low;
  if (low > 0) z.c.erase(z.c.begin(), z.c.begin() + long(low));
  for (const auto& f : den_factors) {
    if (f.is_zero() || f.total_degree() < 1) continue;
    bool same_var = true;
    for (const auto& v : f.vars)
      if (v != var && f.degree(v) > 0) same_var = false;
    if (!same_var) continue;
    UPolyZ d = to_up(f, var);
    if (d.deg() < 1) continue;
    while (true) {
      UPolyZ g = upoly::gcd(z, d);
      if (g.deg() < 1) break;
      z = upoly::exact_div(z, g);
    }
  }
  z = z.primitive();
  if (!z.zero() && sgn(z.lc()) < 0) z = -z;
  MultiPoly out(p.vars);
  int vi = p.var_index(var);
  for (size_t i = 0; i < z.c.size(); ++i) {
    if (z.c[i] == 0) continue;
    std::vector<int> e(p.vars.size(), 0);
    e[size_t(vi)] = int(i);
    out.terms[e] = Rat(z.c[i]);
  }
  return out;
}

Quad eval_quad(const MultiPoly& p, const std::map<std::string, Quad>& point) {
  Quad total{Rat(0)};
  for (const auto& [e, c] : p.terms) {
    Quad t{c};
    for (size_t i = 0; i < p.vars.size(); ++i) {
      if (e[i] == 0) continue;
      auto it = point.find(p.vars[i]);
      if (it == point.end()) throw std::invalid_argument("eval_quad: missing " + p.vars[i]);
      for (int k = 0; k < e[i]; ++k) t = t * it->second;
    }
    total = total + t;
  }
  return total;
}

}  // namespace einstein
