#include "einstein/solver.hpp"

namespace einstein {

namespace {

struct CenterDir {
  double w4, w5;  // B-coordinates in the (H~4, H~5) basis
};

/// B-unit center direction of the subalgebra s(u(p) + u(q)) inside h_0 for
/// the three intermediate embeddings, computed from explicit matrices.
CenterDir center_direction(const FlagSpec& spec, int which /*1i, 1ii, 1iii*/) {
  const int l = spec.l, m = spec.m, n = spec.n, N = spec.N();
  Eigen::MatrixXcd Wm = Eigen::MatrixXcd::Zero(N, N);
  using C = std::complex<double>;
  if (which == 1) {  // center of su(l+m): the H5 direction
    for (int t = 0; t < l; ++t) Wm(t, t) = C(0, 1.0 / l);
    for (int t = l; t < l + m; ++t) Wm(t, t) = C(0, -1.0 / m);
  } else if (which == 2) {  // su(m+n) inside s(u(l) x u(m+n))
    for (int t = l; t < l + m; ++t) Wm(t, t) = C(0, 1.0 / m);
    for (int t = l + m; t < N; ++t) Wm(t, t) = C(0, -1.0 / n);
  } else {  // su(l+n) inside s(u(l+n) x u(m))
    for (int t = 0; t < l; ++t) Wm(t, t) = C(0, 1.0 / l);
    for (int t = l + m; t < N; ++t) Wm(t, t) = C(0, -1.0 / n);
  }
  double norm = std::sqrt(killing_B(spec, Wm, Wm));
  Wm /= norm;
  auto cb = center_basis(spec, Gauge{});
  return CenterDir{killing_B(spec, Wm, cb.H4_tilde), killing_B(spec, Wm, cb.H5_tilde)};
}

/// Inner product on h_0 in the (H~4, H~5) basis.
Eigen::Matrix2d center_gram(const MetricParams& m) {
  Eigen::Matrix2d M;
  M << m.gauge.a, m.gauge.b, m.gauge.c, m.gauge.d;
  Eigen::Matrix2d D = Eigen::Vector2d(m.v4, m.v5).asDiagonal();
  return M.transpose() * D * M;
}

double metric_scale(const FlagSpec& spec, const MetricParams& m) {
  double s = 0;
  for (int k = 1; k <= 8; ++k)
    if (spec.block_present(k, m.space)) s = std::max(s, m.coeff(k));
  return std::max(s, 1e-300);
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

MetricParams normalize_center_gauge(const MetricParams& metric) {
  Eigen::Matrix2d G = center_gram(metric);
  MetricParams out = metric;
  double v5 = G(1, 1);
  double gam = G(0, 1) / G(1, 1);
  double v4 = G(0, 0) - G(0, 1) * G(0, 1) / G(1, 1);
  out.v4 = v4;
  out.v5 = v5;
  out.gauge = Gauge{1, 0, gam, 1};
  return out;
}

Classification classify_natural_reductivity(const FlagSpec& spec, const MetricParams& metric,
                                            double tol) {
  if (metric.space != SpaceKind::Group)
    throw std::invalid_argument("classify_natural_reductivity: Group metrics only");
  if (std::abs(metric.gauge.b) > 1e-12 * std::max(1.0, std::abs(metric.gauge.a)))
    throw std::invalid_argument("classify_natural_reductivity: gauge not in normal form");
  Classification cls;
  cls.tolerance_used = tol;
  const double s = metric_scale(spec, metric);
  const double eps = tol * s;
  Eigen::Matrix2d G = center_gram(metric);
  const auto d = spec.dims();

  auto equal_all = [&](std::vector<double> vals) {
    for (size_t i = 1; i < vals.size(); ++i)
      if (!near(vals[i], vals[0], eps)) return false;
    return true;
  };

  // bi-invariant: every coefficient equals t and the center gram is t I
  {
    std::vector<double> vals;
    for (int k : {1, 2, 3, 6, 7, 8})
      if (d[size_t(k)] > 0) vals.push_back(metric.coeff(k));
    vals.push_back(G(0, 0));
    vals.push_back(G(1, 1));
    if (equal_all(vals) && near(G(0, 1), 0, eps)) {
      cls.naturally_reductive = true;
      cls.nr_case = "bi-invariant";
      return cls;
    }
  }
  // case 2: x6 = x7 = x8
  if (near(metric.x6, metric.x7, eps) && near(metric.x7, metric.x8, eps)) {
    cls.naturally_reductive = true;
    cls.nr_case = "case-2";
    return cls;
  }
  // cases 1i / 1ii / 1iii: invariance under the intermediate subgroup
  struct CaseSpec {
    int which;
    const char* name;
  };
  for (const CaseSpec& cs : {CaseSpec{1, "case-1i"}, CaseSpec{2, "case-1ii"},
                             CaseSpec{3, "case-1iii"}}) {
    double base_a, base_b;  // the two base coefficients that must agree
    std::vector<double> fiber;
    if (cs.which == 1) {  // L = S(U(l+m) x U(n)); fiber su(l+m)
      base_a = metric.x7;
      base_b = metric.x8;
      if (d[1] > 0) fiber.push_back(metric.u1);
      if (d[2] > 0) fiber.push_back(metric.u2);
      fiber.push_back(metric.x6);
    } else if (cs.which == 2) {  // L = S(U(l) x U(m+n)); fiber su(m+n)
      base_a = metric.x6;
      base_b = metric.x7;
      if (d[2] > 0) fiber.push_back(metric.u2);
      if (d[3] > 0) fiber.push_back(metric.u3);
      fiber.push_back(metric.x8);
    } else {  // L = S(U(l+n) x U(m)); fiber su(l+n)
      base_a = metric.x6;
      base_b = metric.x8;
      if (d[1] > 0) fiber.push_back(metric.u1);
      if (d[3] > 0) fiber.push_back(metric.u3);
      fiber.push_back(metric.x7);
    }
    if (!near(base_a, base_b, eps)) continue;
    CenterDir w = center_direction(spec, cs.which);
    Eigen::Vector2d wv(w.w4, w.w5), zv(-w.w5, w.w4);
    double gww = wv.transpose() * G * wv;
    double gzw = zv.transpose() * G * wv;
    fiber.push_back(gww);
    if (!equal_all(fiber)) continue;
    if (!near(gzw, 0, eps)) continue;
    cls.naturally_reductive = true;
    cls.nr_case = cs.name;
    return cls;
  }
  return cls;
}

bool classify_jensen(const FlagSpec& spec, const MetricParams& metric, double tol) {
  if (metric.space != SpaceKind::Stiefel)
    throw std::invalid_argument("classify_jensen: Stiefel metrics only");
  MetricParams m = normalize_center_gauge(metric).scaled(1.0 / metric.x7);
  const double s = metric_scale(spec, m);
  const double eps = tol * s;
  if (!near(m.x8, m.x7, eps)) return false;
  Eigen::Matrix2d G = center_gram(m);
  if (!near(G(0, 1), 0, eps)) return false;
  const auto d = spec.dims();
  std::vector<double> fiber;  // su(l+m) block coefficients
  if (d[1] > 0) fiber.push_back(m.u1);
  if (d[2] > 0) fiber.push_back(m.u2);
  fiber.push_back(m.x6);
  fiber.push_back(G(1, 1));  // the H~5 direction inside su(l+m)
  for (size_t i = 1; i < fiber.size(); ++i)
    if (!near(fiber[i], fiber[0], eps)) return false;
  return true;
}

Classification classify_solution(const FlagSpec& spec, const MetricParams& metric,
                                 double tol) {
  MetricParams norm = normalize_center_gauge(metric);
  Classification cls;
  if (metric.space == SpaceKind::Group) {
    cls = classify_natural_reductivity(spec, norm, tol);
  } else {
    cls.tolerance_used = tol;
    cls.jensen_type = classify_jensen(spec, norm, tol);
  }
  return cls;
}

}  // namespace einstein
