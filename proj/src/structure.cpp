#include "einstein/structure.hpp"

namespace einstein {

namespace {

struct Support {
  struct Cell {
    int i, j;
    long long re, im;
  };
  std::vector<Cell> cells;
};

Support support_of(const CMatZ& m) {
  Support s;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      if (m.r(i, j) != 0 || m.i_(i, j) != 0)
        s.cells.push_back({i, j, m.r(i, j), m.i_(i, j)});
  return s;
}

long long trace_re_support(const CMatZ& c, const Support& s) {
  long long t = 0;
  for (const auto& cell : s.cells)
    t += c.r(cell.j, cell.i) * cell.re - c.i_(cell.j, cell.i) * cell.im;
  return t;
}

}  // namespace

StructureTensor build_structure_tensor(const FlagSpec& spec) {
  StructureTensor st;
  st.spec = spec;
  st.dec = build_decomposition(spec);

  std::vector<const BasisVec*> flat;
  for (int k = 1; k <= 8; ++k) {
    st.block_lo[size_t(k)] = int(flat.size());
    for (const auto& v : st.dec.block(k)) {
      flat.push_back(&v);
      st.block_of.push_back(k);
    }
    st.block_hi[size_t(k)] = int(flat.size());
  }
  st.dim = int(flat.size());
  st.bn.reserve(flat.size());
  st.invsq.reserve(flat.size());
  std::vector<Support> supports;
  supports.reserve(flat.size());
  for (const auto* v : flat) {
    st.bn.push_back(v->bnorm);
    st.invsq.push_back(1.0 / std::sqrt(to_double(v->bnorm)));
    supports.push_back(support_of(v->M));
  }

  const int N = spec.N();
  st.pairs.assign(size_t(st.dim) * st.dim, {});
  for (int a = 0; a < st.dim; ++a) {
    for (int b = a + 1; b < st.dim; ++b) {
      unsigned targets = bracket_targets(st.block_of[size_t(a)], st.block_of[size_t(b)]);
      if (targets == 0) continue;
      CMatZ c = commutator(flat[size_t(a)]->M, flat[size_t(b)]->M);
      auto& lst = st.pairs[st.pair_index(a, b)];
      for (int g = 0; g < st.dim; ++g) {
        if (!(targets & (1u << st.block_of[size_t(g)]))) continue;
        long long t = -2LL * N * trace_re_support(c, supports[size_t(g)]);
        if (t != 0)
          lst.push_back({g, t,
                         double(t) * st.invsq[size_t(a)] * st.invsq[size_t(b)] *
                             st.invsq[size_t(g)]});
      }
    }
  }
  return st;
}

BTable b_constants_closed(const FlagSpec& spec, SpaceKind space) {
  const long l = spec.l, m = spec.m, n = spec.n, N = spec.N();
  BTable t;
  t.spec = spec;
  t.space = space;
  auto put = [&](int k, int i, int j, Rat v) {
    if (v == 0) return;
    if (space == SpaceKind::Stiefel && (k == 3 || i == 3 || j == 3)) return;
    t.entries[b_key(k, i, j)] = std::move(v);
  };
  put(1, 1, 1, rat(l * (l * l - 1), N));
  put(2, 2, 2, rat(m * (m * m - 1), N));
  put(3, 3, 3, rat(n * (n * n - 1), N));
  put(6, 1, 6, rat(m * (l * l - 1), N));
  put(7, 1, 7, rat(n * (l * l - 1), N));
  put(6, 2, 6, rat(l * (m * m - 1), N));
  put(8, 2, 8, rat(n * (m * m - 1), N));
  put(7, 3, 7, rat(l * (n * n - 1), N));
  put(8, 3, 8, rat(m * (n * n - 1), N));
  // center rows are the squared ad(H~4)/ad(H~5) rotation speeds times d_j
  auto cr = center_rotations(spec);
  for (int j = 6; j <= 8; ++j) {
    put(4, j, j, cr.alpha2d[size_t(j)]);
    put(5, j, j, cr.beta2d[size_t(j)]);
  }
  put(6, 7, 8, rat(l * m * n, N));
  return t;
}

BTable b_constants_brute(const StructureTensor& st, SpaceKind space) {
  BTable t;
  t.spec = st.spec;
  t.space = space;
  // accumulate each ordered pattern (i, j; k) separately; full symmetry
  // makes them coincide and is asserted before collapsing to sorted keys
  std::map<Triple, Rat> ordered;
  for (int a = 0; a < st.dim; ++a) {
    int bi = st.block_of[size_t(a)];
    if (space == SpaceKind::Stiefel && bi == 3) continue;
    for (int b = a + 1; b < st.dim; ++b) {
      int bj = st.block_of[size_t(b)];
      if (space == SpaceKind::Stiefel && bj == 3) continue;
      for (const auto& e : st.list(a, b)) {
        int bk = st.block_of[size_t(e.c)];
        if (space == SpaceKind::Stiefel && bk == 3) continue;
        Rat contrib = rat(int_of(e.t) * int_of(e.t),
                          st.bn[size_t(a)] * st.bn[size_t(b)] * st.bn[size_t(e.c)]);
        ordered[{bk, bi, bj}] += contrib;
        ordered[{bk, bj, bi}] += contrib;
      }
    }
  }
  for (auto& [key, v] : ordered) {
    if (v == 0) continue;
    auto it = t.entries.find(b_key(key[0], key[1], key[2]));
    if (it == t.entries.end())
      t.entries.emplace(b_key(key[0], key[1], key[2]), v);
    else if (it->second != v)
      throw std::logic_error("b_constants_brute: symmetry violated");
  }
  return t;
}

QTable q_constants_closed(const FlagSpec& spec, const GaugeQ& gauge, SpaceKind space) {
  Rat det = gauge.det();
  if (det == 0) throw std::invalid_argument("q_constants_closed: singular gauge");
  QTable t;
  t.spec = spec;
  t.space = space;
  t.gauge = gauge;
  // away from the center the Q-constants coincide with the B-constants
  BTable b = b_constants_closed(spec, space);
  for (const auto& [key, v] : b.entries) {
    int x = key[0], y = key[1], z = key[2];
    if (x == 4 || x == 5) continue;  // center rows handled below
    if (x == y && y == z) {
      t.entries[q_key(x, x, x)] = Quad(v);
    } else if (y == z) {  // sorted (x, y, y): orbit {y;xy} and {x;yy}
      t.entries[q_key(y, x, y)] = Quad(v);
      t.entries[q_key(x, y, y)] = Quad(v);
    } else {  // (6,7,8)
      t.entries[q_key(6, 7, 8)] = Quad(v);
      t.entries[q_key(7, 6, 8)] = Quad(v);
      t.entries[q_key(8, 6, 7)] = Quad(v);
    }
  }
  auto cr = center_rotations(spec);
  Int D = Int(spec.l) * spec.m * spec.n * spec.N();
  Rat p = gauge.d / det, q = -gauge.b / det, r = -gauge.c / det, s = gauge.a / det;
  auto sq_form = [&](const Rat& u, const Rat& w, int j) {
    // (u*alpha_j + w*beta_j)^2 d_j in Q(sqrt(D))
    Rat rational = u * u * cr.alpha2d[size_t(j)] + w * w * cr.beta2d[size_t(j)];
    Rat radical = 2 * u * w * rat(cr.eps[size_t(j)], 1) / ((spec.l + spec.m) * Rat(spec.N()));
    return Quad(rational, radical, D);
  };
  for (int j = 6; j <= 8; ++j) {
    auto maybe_put = [&](Triple key, Quad v) {
      if (!v.is_zero()) t.entries[key] = std::move(v);
    };
    maybe_put(q_key(4, j, j), sq_form(gauge.a, gauge.b, j));
    maybe_put(q_key(5, j, j), sq_form(gauge.c, gauge.d, j));
    maybe_put(q_key(j, 4, j), sq_form(p, r, j));
    maybe_put(q_key(j, 5, j), sq_form(q, s, j));
  }
  return t;
}

QTableD q_constants_brute(const StructureTensor& st, const Gauge& gauge, SpaceKind space) {
  double det = gauge.det();
  if (std::abs(det) < 1e-14) throw std::invalid_argument("q_constants_brute: singular gauge");
  QTableD t;
  t.spec = st.spec;
  t.space = space;
  t.gauge = gauge;
  const int i4 = st.block_lo[4], i5 = st.block_lo[5];
  double p = gauge.d / det, q = -gauge.b / det, r = -gauge.c / det, s = gauge.a / det;

  auto present = [&](int blk) { return !(space == SpaceKind::Stiefel && blk == 3); };
  auto add = [&](int k, int i, int j, double v) {
    if (v != 0.0) t.entries[q_key(k, i, j)] += v;
  };

  // pairs with both arguments outside the center
  for (int a = 0; a < st.dim; ++a) {
    int bi = st.block_of[size_t(a)];
    if (!present(bi) || bi == 4 || bi == 5) continue;
    for (int b = a + 1; b < st.dim; ++b) {
      int bj = st.block_of[size_t(b)];
      if (!present(bj) || bj == 4 || bj == 5) continue;
      double w4 = 0, w5 = 0;
      for (const auto& e : st.list(a, b)) {
        int bk = st.block_of[size_t(e.c)];
        if (!present(bk)) continue;
        double mult = (bi == bj) ? 2.0 : 1.0;  // ordered (a,b) and (b,a)
        if (e.c == i4)
          w4 = e.val;
        else if (e.c == i5)
          w5 = e.val;
        else
          add(bk, bi, bj, mult * e.val * e.val);
      }
      if (w4 != 0 || w5 != 0) {
        double mult = (bi == bj) ? 2.0 : 1.0;
        double q4 = gauge.a * w4 + gauge.b * w5;
        double q5 = gauge.c * w4 + gauge.d * w5;
        add(4, bi, bj, mult * q4 * q4);
        add(5, bi, bj, mult * q5 * q5);
      }
    }
  }

  // rows {k; 4 j}, {k; 5 j}: brackets [V_4, e_a], [V_5, e_a]
  for (int a = 0; a < st.dim; ++a) {
    int bi = st.block_of[size_t(a)];
    if (!present(bi) || bi == 4 || bi == 5) continue;
    double sgn4 = i4 < a ? 1.0 : -1.0;  // stored lists hold [e_min, e_max]
    double sgn5 = i5 < a ? 1.0 : -1.0;
    std::map<int, std::pair<double, double>> merged;  // c -> ([H4t,e_a]_c, [H5t,e_a]_c)
    for (const auto& e : st.pairs[st.pair_index(std::min(a, i4), std::max(a, i4))])
      merged[e.c].first = sgn4 * e.val;
    for (const auto& e : st.pairs[st.pair_index(std::min(a, i5), std::max(a, i5))])
      merged[e.c].second = sgn5 * e.val;
    for (auto& [c, hv] : merged) {
      int bk = st.block_of[size_t(c)];
      if (!present(bk)) continue;
      double row4 = p * hv.first + r * hv.second;  // [V4, e_a] component
      double row5 = q * hv.first + s * hv.second;  // [V5, e_a] component
      add(bk, 4, bi, row4 * row4);
      add(bk, 5, bi, row5 * row5);
    }
  }
  return t;
}

}  // namespace einstein
