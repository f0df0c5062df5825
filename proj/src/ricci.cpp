#include "einstein/ricci.hpp"

namespace einstein {

namespace {

template <typename S>
S s_of(long v) {
  if constexpr (std::is_same_v<S, double>) return double(v);
  else return Quad(Rat(v));
}

template <typename S>
S s_frac(long a, long b) {
  if constexpr (std::is_same_v<S, double>) return double(a) / double(b);
  else return Quad(rat(a, b));
}

template <typename S>
bool s_zero(const S& x) {
  if constexpr (std::is_same_v<S, double>) return x == 0.0;
  else return x.is_zero();
}

/// Nonzero Q-structure constants as a dense [k][i][j] grid.
template <typename S>
struct QGrid {
  S q[9][9][9];
  QGrid() {
    for (auto& a : q)
      for (auto& b : a)
        for (auto& c : b) c = s_of<S>(0);
  }
};

template <typename S, typename GaugeT>
QGrid<S> make_qgrid(const FlagSpec& spec, SpaceKind space, const GaugeT& g) {
  const long l = spec.l, m = spec.m, n = spec.n, N = spec.N();
  const bool no3 = (space == SpaceKind::Stiefel);
  QGrid<S> grid;
  auto put = [&](int k, int i, int j, S v) {
    if (no3 && (k == 3 || i == 3 || j == 3)) return;
    grid.q[k][i][j] = v;
    grid.q[k][j][i] = v;
  };
  put(1, 1, 1, s_frac<S>(l * (l * l - 1), N));
  put(2, 2, 2, s_frac<S>(m * (m * m - 1), N));
  put(3, 3, 3, s_frac<S>(n * (n * n - 1), N));
  struct Row { int i, j; long num; };
  const Row rows[] = {{1, 6, m * (l * l - 1)}, {1, 7, n * (l * l - 1)},
                      {2, 6, l * (m * m - 1)}, {2, 8, n * (m * m - 1)},
                      {3, 7, l * (n * n - 1)}, {3, 8, m * (n * n - 1)}};
  for (const auto& r : rows) {
    S v = s_frac<S>(r.num, N);
    put(r.j, r.i, r.j, v);
    put(r.i, r.j, r.j, v);
  }
  S joint = s_frac<S>(l * m * n, N);
  put(6, 7, 8, joint);
  put(7, 6, 8, joint);
  put(8, 6, 7, joint);

  auto cr = center_rotations(spec);
  S det = S(g.a) * S(g.d) - S(g.b) * S(g.c);
  S p = S(g.d) / det, qq = S(0) - S(g.b) / det, rr = S(0) - S(g.c) / det, ss = S(g.a) / det;
  for (int j = 6; j <= 8; ++j) {
    S a2d, b2d, abd;
    if constexpr (std::is_same_v<S, double>) {
      a2d = to_double(cr.alpha2d[size_t(j)]);
      b2d = to_double(cr.beta2d[size_t(j)]);
      abd = cr.eps[size_t(j)] * std::sqrt(double(l * m * n) / N) / double(l + m);
    } else {
      a2d = Quad(cr.alpha2d[size_t(j)]);
      b2d = Quad(cr.beta2d[size_t(j)]);
      abd = Quad(Rat(0), rat(cr.eps[size_t(j)], 1) / Rat((l + m) * N), Int(l * m * n) * N);
    }
    auto sq = [&](S u, S w) { return u * u * a2d + s_of<S>(2) * u * w * abd + w * w * b2d; };
    put(4, j, j, sq(S(g.a), S(g.b)));
    put(5, j, j, sq(S(g.c), S(g.d)));
    put(j, 4, j, sq(p, rr));
    put(j, 5, j, sq(qq, ss));
  }
  return grid;
}

/// Diagonal Ricci component via the generic structure-constant sum.
template <typename S>
S diag_component(const QGrid<S>& grid, const std::array<S, 9>& y,
                 const std::array<int, 9>& d, int k) {
  S first = s_of<S>(0), second = s_of<S>(0);
  for (int j = 1; j <= 8; ++j)
    for (int i = 1; i <= 8; ++i) {
      const S& qk = grid.q[k][j][i];
      if (!s_zero(qk)) first += qk / (y[size_t(j)] * y[size_t(i)]);
      const S& qj = grid.q[j][k][i];
      if (!s_zero(qj)) second += qj * y[size_t(j)] / y[size_t(i)];
    }
  const S yk = y[size_t(k)];
  const S invdk = s_frac<S>(1, d[size_t(k)]);
  return s_frac<S>(1, 2) / yk +
         invdk * (yk * first / s_of<S>(4) - second / (s_of<S>(2) * yk));
}

}  // namespace

RicciComponents ricci_closed(const FlagSpec& spec, const MetricParams& metric) {
  metric.check_positive(spec);
  const auto d = spec.dims();
  auto grid = make_qgrid<double>(spec, metric.space, metric.gauge);
  std::array<double, 9> y{};
  for (int k = 1; k <= 8; ++k) y[size_t(k)] = metric.coeff(k);

  RicciComponents rc;
  rc.space = metric.space;
  for (int k : {1, 2, 3, 6, 7, 8}) {
    if (!spec.block_present(k, metric.space)) continue;
    rc.r[size_t(k)] = diag_component(grid, y, d, k);
    rc.present[size_t(k)] = true;
  }
  const auto& g = metric.gauge;
  double r4 = 0, r5 = 0, r0 = 0;
  auto cr = center_rotations(spec);
  double omega = std::sqrt(double(spec.l) * spec.m * spec.n / spec.N());
  for (int j = 6; j <= 8; ++j) {
    double x2 = y[size_t(j)] * y[size_t(j)];
    r4 += grid.q[4][j][j] / x2;
    r5 += grid.q[5][j][j] / x2;
    double Aj = to_double(cr.alpha2d[size_t(j)]);
    double Bj = to_double(cr.beta2d[size_t(j)]);
    double Ej = cr.eps[size_t(j)] / double(spec.l + spec.m);
    r0 += (g.a * g.c * Aj + g.b * g.d * Bj + (g.a * g.d + g.b * g.c) * omega * Ej) / x2;
  }
  rc.r[4] = metric.v4 / 4.0 * r4;
  rc.r[5] = metric.v5 / 4.0 * r5;
  rc.present[4] = rc.present[5] = true;
  rc.r0 = std::sqrt(metric.v4 * metric.v5) / 4.0 * r0;
  double sum = 0;
  int cnt = 0;
  for (int k = 1; k <= 8; ++k)
    if (rc.present[size_t(k)]) { sum += rc.r[size_t(k)]; ++cnt; }
  if (cnt > 0) rc.lambda_candidate = sum / cnt;
  return rc;
}

std::vector<double> einstein_residual(const FlagSpec& spec, const MetricParams& metric,
                                      double lambda) {
  RicciComponents rc = ricci_closed(spec, metric);
  std::vector<double> res;
  res.push_back(rc.r0);
  for (int k = 1; k <= 8; ++k)
    if (rc.present[size_t(k)]) res.push_back(rc.r[size_t(k)] - lambda);
  return res;
}

MetricParams MetricQ::approx(const Gauge&) const {
  MetricParams m;
  m.space = space;
  m.u1 = u1.value(); m.u2 = u2.value(); m.u3 = u3.value();
  m.v4 = v4.value(); m.v5 = v5.value();
  m.x6 = x6.value(); m.x7 = x7.value(); m.x8 = x8.value();
  m.gauge = Gauge{to_double(gauge_a), 0, 0, to_double(gauge_d)};
  return m;
}

RicciComponentsQ ricci_closed_exact(const FlagSpec& spec, const MetricQ& metric) {
  const auto d = spec.dims();
  GaugeQ g;
  g.a = metric.gauge_a;
  g.d = metric.gauge_d;
  auto grid = make_qgrid<Quad>(spec, metric.space, g);
  std::array<Quad, 9> y{};
  for (int k = 1; k <= 8; ++k) y[size_t(k)] = metric.coeff(k);

  RicciComponentsQ rc;
  for (int k : {1, 2, 3, 6, 7, 8}) {
    if (!spec.block_present(k, metric.space)) continue;
    rc.r[size_t(k)] = diag_component(grid, y, d, k);
    rc.present[size_t(k)] = true;
  }
  Quad r4{Rat(0)}, r5{Rat(0)};
  for (int j = 6; j <= 8; ++j) {
    Quad x2 = y[size_t(j)] * y[size_t(j)];
    r4 += grid.q[4][j][j] / x2;
    r5 += grid.q[5][j][j] / x2;
  }
  rc.r[4] = metric.v4 * r4 / Quad(Rat(4));
  rc.r[5] = metric.v5 * r5 / Quad(Rat(4));
  rc.present[4] = rc.present[5] = true;
  auto cr = center_rotations(spec);
  Quad br{Rat(0)};
  for (int j = 6; j <= 8; ++j) {
    Quad x2 = y[size_t(j)] * y[size_t(j)];
    br += Quad(metric.gauge_a * metric.gauge_d * rat(cr.eps[size_t(j)], spec.l + spec.m)) / x2;
  }
  rc.r0_bracket = br;  // the omega-coefficient of the r0 bracket
  return rc;
}

// ---------------------------------------------------------------------------
// brute force

RicciBrute::RicciBrute(const FlagSpec& spec, SpaceKind space)
    : RicciBrute(std::make_shared<StructureTensor>(build_structure_tensor(spec)), space) {}

RicciBrute::RicciBrute(std::shared_ptr<const StructureTensor> st, SpaceKind space)
    : st_(std::move(st)), space_(space) {
  local_of_.assign(size_t(st_->dim), -1);
  for (int f = 0; f < st_->dim; ++f) {
    int blk = st_->block_of[size_t(f)];
    if (space_ == SpaceKind::Stiefel && blk == 3) continue;
    local_of_[size_t(f)] = int(idx_.size());
    if (blk == 4) c4_ = int(idx_.size());
    if (blk == 5) c5_ = int(idx_.size());
    idx_.push_back(f);
  }
  dim_ = int(idx_.size());
}

std::pair<int, int> RicciBrute::block_range(int k) const {
  int lo = -1, hi = -1;
  for (int t = 0; t < dim_; ++t)
    if (block_of(t) == k) {
      if (lo < 0) lo = t;
      hi = t + 1;
    }
  if (lo < 0) lo = hi = 0;
  return {lo, hi};
}

Eigen::MatrixXd RicciBrute::ricci_matrix(const MetricParams& metric) const {
  metric.check_positive(st_->spec);
  const auto& g = metric.gauge;
  const double det = g.det();
  const double p = g.d / det, q = -g.b / det, r = -g.c / det, s = g.a / det;

  std::vector<double> y(static_cast<size_t>(dim_));
  for (int t = 0; t < dim_; ++t) y[size_t(t)] = metric.coeff(block_of(t));

  struct Ent { int c; double v; };
  std::vector<std::vector<Ent>> lists(size_t(dim_) * dim_);
  auto gather = [&](int aflat, int bflat, double w, std::vector<Ent>& out) {
    if (w == 0) return;
    int lo = std::min(aflat, bflat), hi = std::max(aflat, bflat);
    double sgn = (aflat < bflat) ? w : -w;
    for (const auto& e : st_->pairs[st_->pair_index(lo, hi)]) {
      int cl = local_of_[size_t(e.c)];
      if (cl < 0) continue;
      out.push_back({cl, sgn * e.val});
    }
  };
  const int f4 = st_->block_lo[4], f5 = st_->block_lo[5];
  for (int A = 0; A < dim_; ++A) {
    for (int B = A + 1; B < dim_; ++B) {
      auto& out = lists[size_t(A) * dim_ + B];
      bool a4 = A == c4_, a5 = A == c5_, b4 = B == c4_, b5 = B == c5_;
      if ((a4 || a5) && (b4 || b5)) continue;  // [V4, V5] = 0
      if (a4) {
        gather(f4, idx_[size_t(B)], p, out);
        gather(f5, idx_[size_t(B)], r, out);
      } else if (a5) {
        gather(f4, idx_[size_t(B)], q, out);
        gather(f5, idx_[size_t(B)], s, out);
      } else if (b4) {
        gather(idx_[size_t(A)], f4, p, out);
        gather(idx_[size_t(A)], f5, r, out);
      } else if (b5) {
        gather(idx_[size_t(A)], f4, q, out);
        gather(idx_[size_t(A)], f5, s, out);
      } else {
        gather(idx_[size_t(A)], idx_[size_t(B)], 1.0, out);
      }
      // value-side center components: B-coordinates -> V-coordinates
      double w4 = 0, w5 = 0;
      size_t keep = 0;
      for (auto& e : out) {
        if (e.c == c4_) w4 += e.v;
        else if (e.c == c5_) w5 += e.v;
        else out[keep++] = e;
      }
      out.resize(keep);
      if (w4 != 0 || w5 != 0) {
        double k4 = g.a * w4 + g.b * w5;
        double k5 = g.c * w4 + g.d * w5;
        if (k4 != 0) out.push_back({c4_, k4});
        if (k5 != 0) out.push_back({c5_, k5});
      }
      if (out.size() > 1) {
        std::sort(out.begin(), out.end(), [](const Ent& x, const Ent& z) { return x.c < z.c; });
        size_t w = 0;
        for (size_t t = 1; t < out.size(); ++t) {
          if (out[t].c == out[w].c) out[w].v += out[t].v;
          else out[++w] = out[t];
        }
        out.resize(w + 1);
      }
    }
  }

  std::vector<double> sqy(static_cast<size_t>(dim_)), isqy(static_cast<size_t>(dim_));
  for (int t = 0; t < dim_; ++t) {
    sqy[size_t(t)] = std::sqrt(y[size_t(t)]);
    isqy[size_t(t)] = 1.0 / sqy[size_t(t)];
  }

  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int t = 0; t < dim_; ++t) R(t, t) = 0.5 / y[size_t(t)];
  if (c4_ >= 0 && c5_ >= 0) {
    R(c4_, c4_) = 0.5 * (p * p + r * r) / y[size_t(c4_)];
    R(c5_, c5_) = 0.5 * (q * q + s * s) / y[size_t(c5_)];
    double off = 0.5 * (p * q + r * s) * isqy[size_t(c4_)] * isqy[size_t(c5_)];
    R(c4_, c5_) = R(c5_, c4_) = off;
  }

  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) {
      const auto& lst = lists[size_t(i) * dim_ + j];
      if (lst.empty()) continue;
      double inv = 1.0 / (y[size_t(i)] * y[size_t(j)]);
      for (const auto& ea : lst)
        for (const auto& eb : lst)
          R(ea.c, eb.c) += 0.5 * ea.v * eb.v * sqy[size_t(ea.c)] * sqy[size_t(eb.c)] * inv;
    }

  std::vector<std::vector<std::pair<int, double>>> by_slot(static_cast<size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    for (auto& v : by_slot) v.clear();
    for (int a = 0; a < dim_; ++a) {
      if (a == i) continue;
      const auto& lst = lists[size_t(std::min(a, i)) * dim_ + std::max(a, i)];
      double sgn = a < i ? 1.0 : -1.0;
      for (const auto& e : lst) by_slot[size_t(e.c)].push_back({a, sgn * e.v});
    }
    double invyi = 1.0 / y[size_t(i)];
    for (int c = 0; c < dim_; ++c) {
      const auto& vec = by_slot[size_t(c)];
      if (vec.empty()) continue;
      double yc = y[size_t(c)];
      for (const auto& [a, wa] : vec)
        for (const auto& [b, wb] : vec)
          R(a, b) -= 0.5 * wa * wb * yc * invyi * isqy[size_t(a)] * isqy[size_t(b)];
    }
  }
  return R;
}

double RicciBrute::certify(const MetricParams& metric, double lambda) const {
  Eigen::MatrixXd R = ricci_matrix(metric);
  for (int t = 0; t < dim_; ++t) R(t, t) -= lambda;
  return R.cwiseAbs().maxCoeff();
}

Eigen::MatrixXd ricci_naive(const Decomposition& dec, const MetricParams& metric) {
  const FlagSpec& spec = dec.spec;
  metric.check_positive(spec);
  CenterBasis cb = center_basis(spec, metric.gauge);
  const auto& g = metric.gauge;

  std::vector<Eigen::MatrixXcd> units;  // B-orthonormal block units
  std::vector<int> unit_block;
  for (int k = 1; k <= 8; ++k) {
    if (!spec.block_present(k, metric.space) || k == 4 || k == 5) continue;
    for (size_t t = 0; t < dec.block(k).size(); ++t) {
      units.push_back(dec.unit(k, int(t)));
      unit_block.push_back(k);
    }
  }

  std::vector<Eigen::MatrixXcd> basis;  // g-orthonormal
  for (int k = 1; k <= 8; ++k) {
    if (!spec.block_present(k, metric.space)) continue;
    double iy = 1.0 / std::sqrt(metric.coeff(k));
    if (k == 4) basis.push_back(cb.V4 * iy);
    else if (k == 5) basis.push_back(cb.V5 * iy);
    else
      for (size_t t = 0; t < units.size(); ++t)
        if (unit_block[t] == k) basis.push_back(units[t] * iy);
  }
  const int dim = int(basis.size());

  auto ginner = [&](const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y) {
    double total = 0;
    for (size_t t = 0; t < units.size(); ++t)
      total += metric.coeff(unit_block[t]) * killing_B(spec, X, units[t]) *
               killing_B(spec, Y, units[t]);
    double x4 = killing_B(spec, X, cb.H4_tilde), x5 = killing_B(spec, X, cb.H5_tilde);
    double y4 = killing_B(spec, Y, cb.H4_tilde), y5 = killing_B(spec, Y, cb.H5_tilde);
    double xi4 = g.a * x4 + g.b * x5, xi5 = g.c * x4 + g.d * x5;
    double et4 = g.a * y4 + g.b * y5, et5 = g.c * y4 + g.d * y5;
    total += metric.v4 * xi4 * et4 + metric.v5 * xi5 * et5;
    return total;
  };

  std::vector<std::vector<Eigen::MatrixXcd>> br(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    br[size_t(i)].reserve(static_cast<size_t>(dim));
    for (int j = 0; j < dim; ++j)
      br[size_t(i)].push_back(bracket(basis[size_t(i)], basis[size_t(j)]));
  }
  // g-coordinates of all brackets against the g-orthonormal basis
  std::vector<Eigen::MatrixXd> coords(size_t(dim), Eigen::MatrixXd::Zero(dim, dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int t = 0; t < dim; ++t)
        coords[size_t(t)](i, j) = ginner(br[size_t(i)][size_t(j)], basis[size_t(t)]);

  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = a; b < dim; ++b) {
      double t1 = 0;
      for (int i = 0; i < dim; ++i)
        t1 += ginner(br[size_t(a)][size_t(i)], br[size_t(b)][size_t(i)]);
      double t3 = 0;
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          t3 += coords[size_t(a)](i, j) * coords[size_t(b)](i, j);
      double val = -0.5 * t1 + 0.5 * killing_B(spec, basis[size_t(a)], basis[size_t(b)]) +
                   0.25 * t3;
      R(a, b) = R(b, a) = val;
    }
  return R;
}

}  // namespace einstein
