#include "einstein/algebra.hpp"

namespace einstein {

CMatZ commutator(const CMatZ& x, const CMatZ& y) {
  if (x.n != y.n) throw std::invalid_argument("commutator: size mismatch");
  const int n = x.n;
  CMatZ z(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      long long xr = x.r(i, k), xi = x.i_(i, k);
      if (xr == 0 && xi == 0) continue;
      for (int j = 0; j < n; ++j) {
        long long yr = y.r(k, j), yi = y.i_(k, j);
        if (yr | yi) {
          z.r(i, j) += xr * yr - xi * yi;
          z.i_(i, j) += xr * yi + xi * yr;
        }
      }
    }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      long long yr = y.r(i, k), yi = y.i_(i, k);
      if (yr == 0 && yi == 0) continue;
      for (int j = 0; j < n; ++j) {
        long long xr = x.r(k, j), xi = x.i_(k, j);
        if (xr | xi) {
          z.r(i, j) -= yr * xr - yi * xi;
          z.i_(i, j) -= yr * xi + yi * xr;
        }
      }
    }
  return z;
}

long long trace_prod_re(const CMatZ& x, const CMatZ& y) {
  long long t = 0;
  const int n = x.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      t += x.r(i, j) * y.r(j, i) - x.i_(i, j) * y.i_(j, i);
  return t;
}

Eigen::MatrixXcd to_complex(const CMatZ& m) {
  Eigen::MatrixXcd out(m.n, m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      out(i, j) = std::complex<double>(double(m.r(i, j)), double(m.i_(i, j)));
  return out;
}

Eigen::MatrixXcd Decomposition::unit(int k, int idx) const {
  const BasisVec& v = blocks[size_t(k)][size_t(idx)];
  return to_complex(v.M) / std::sqrt(to_double(v.bnorm));
}

namespace {

CMatZ mat_A(int N, int i, int j) {  // E_ij - E_ji, 1-based indices
  CMatZ m(N);
  m.r(i - 1, j - 1) = 1;
  m.r(j - 1, i - 1) = -1;
  return m;
}

CMatZ mat_B(int N, int i, int j) {  // sqrt(-1)(E_ij + E_ji)
  CMatZ m(N);
  m.i_(i - 1, j - 1) = 1;
  m.i_(j - 1, i - 1) = 1;
  return m;
}

void push(std::vector<BasisVec>& out, int N, CMatZ m) {
  Int bn = killing_B_exact(N, m, m);
  out.push_back(BasisVec{std::move(m), std::move(bn)});
}

// su(sz) block starting at 1-based offset off+1: pairs then diagonals.
void su_block(std::vector<BasisVec>& out, int N, int off, int sz) {
  for (int i = 2; i <= sz; ++i)
    for (int j = 1; j < i; ++j) {
      push(out, N, mat_A(N, off + i, off + j));
      push(out, N, mat_B(N, off + i, off + j));
    }
  for (int k = 1; k < sz; ++k) {
    CMatZ m(N);
    for (int t = 1; t <= k; ++t) m.i_(off + t - 1, off + t - 1) = 1;
    m.i_(off + k, off + k) = -k;
    push(out, N, std::move(m));
  }
}

void pair_block(std::vector<BasisVec>& out, int N, int ilo, int ihi, int jlo, int jhi) {
  for (int i = ilo; i <= ihi; ++i)
    for (int j = jlo; j <= jhi; ++j) {
      push(out, N, mat_A(N, i, j));
      push(out, N, mat_B(N, i, j));
    }
}

}  // namespace

Decomposition build_decomposition(const FlagSpec& spec) {
  const int l = spec.l, m = spec.m, n = spec.n, N = spec.N();
  Decomposition dec;
  dec.spec = spec;

  su_block(dec.blocks[1], N, 0, l);
  su_block(dec.blocks[2], N, l, m);
  su_block(dec.blocks[3], N, l + m, n);

  {  // h_4 direction: sqrt(-1) diag(n I_{l+m}, -(l+m) I_n)
    CMatZ h4(N);
    for (int t = 0; t < l + m; ++t) h4.i_(t, t) = n;
    for (int t = l + m; t < N; ++t) h4.i_(t, t) = -(l + m);
    push(dec.blocks[4], N, std::move(h4));
  }
  {  // h_5 direction: sqrt(-1) diag(m I_l, -l I_m, 0)
    CMatZ h5(N);
    for (int t = 0; t < l; ++t) h5.i_(t, t) = m;
    for (int t = l; t < l + m; ++t) h5.i_(t, t) = -l;
    push(dec.blocks[5], N, std::move(h5));
  }

  pair_block(dec.blocks[6], N, l + 1, l + m, 1, l);          // m_12
  pair_block(dec.blocks[7], N, l + m + 1, N, 1, l);          // m_13
  pair_block(dec.blocks[8], N, l + m + 1, N, l + 1, l + m);  // m_23

  auto d = spec.dims();
  for (int k = 1; k <= 8; ++k)
    if (int(dec.blocks[size_t(k)].size()) != d[size_t(k)])
      throw std::logic_error("decomposition block dimension mismatch");
  return dec;
}

double killing_B(const FlagSpec& spec, const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y) {
  const int N = spec.N();
  if (X.rows() != N || X.cols() != N || Y.rows() != N || Y.cols() != N)
    throw std::invalid_argument("killing_B: matrix size does not match spec");
  double scale = std::max(1.0, std::max(X.cwiseAbs().maxCoeff(), Y.cwiseAbs().maxCoeff()));
  if ((X + X.adjoint()).cwiseAbs().maxCoeff() > 1e-13 * scale ||
      (Y + Y.adjoint()).cwiseAbs().maxCoeff() > 1e-13 * scale)
    throw std::invalid_argument("killing_B: inputs must be skew-Hermitian");
  return -2.0 * N * (X * Y).trace().real();
}

Eigen::MatrixXcd bracket(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y) {
  if (X.rows() != X.cols() || Y.rows() != Y.cols() || X.rows() != Y.rows())
    throw std::invalid_argument("bracket: square matrices of equal size required");
  return X * Y - Y * X;
}

CenterBasis center_basis(const FlagSpec& spec, const Gauge& gauge) {
  double det = gauge.det();
  if (std::abs(det) < 1e-14) throw std::invalid_argument("center_basis: singular gauge");
  const int l = spec.l, m = spec.m, n = spec.n, N = spec.N();
  using C = std::complex<double>;
  CenterBasis cb;
  cb.H4 = Eigen::MatrixXcd::Zero(N, N);
  cb.H5 = Eigen::MatrixXcd::Zero(N, N);
  for (int t = 0; t < l + m; ++t) cb.H4(t, t) = C(0, 1.0 / (l + m));
  for (int t = l + m; t < N; ++t) cb.H4(t, t) = C(0, -1.0 / n);
  for (int t = 0; t < l; ++t) cb.H5(t, t) = C(0, 1.0 / l);
  for (int t = l; t < l + m; ++t) cb.H5(t, t) = C(0, -1.0 / m);
  cb.c1 = std::sqrt(double(l + m) * n) / (N * std::sqrt(2.0));
  cb.c2 = std::sqrt(double(l) * m) / std::sqrt(2.0 * N * (l + m));
  cb.H4_tilde = cb.c1 * cb.H4;
  cb.H5_tilde = cb.c2 * cb.H5;
  double p = gauge.d / det, q = -gauge.b / det, r = -gauge.c / det, s = gauge.a / det;
  cb.V4 = p * cb.H4_tilde + r * cb.H5_tilde;
  cb.V5 = q * cb.H4_tilde + s * cb.H5_tilde;
  return cb;
}

unsigned bracket_targets(int bi, int bj) {
  if (bi > bj) std::swap(bi, bj);
  auto bit = [](int k) { return 1u << k; };
  // center h_4, h_5 commutes with itself and with h_1..h_3
  if (bi >= 1 && bj <= 5) {
    if (bi == bj && bi <= 3) return bit(bi);
    return 0u;
  }
  if (bj >= 6) {
    if (bi <= 5) {
      // [h_i, m_jk] relations
      static const unsigned tab[6][3] = {
          // blocks 6,7,8 indexed 0..2
          {0, 0, 0},
          {bit(6), bit(7), 0},        // h_1
          {bit(6), 0, bit(8)},        // h_2
          {0, bit(7), bit(8)},        // h_3
          {bit(6), bit(7), bit(8)},   // h_4
          {bit(6), bit(7), bit(8)}};  // h_5
      return tab[bi][bj - 6];
    }
    if (bi == bj) {
      switch (bi) {
        case 6: return bit(1) | bit(2) | bit(4) | bit(5);
        case 7: return bit(1) | bit(3) | bit(4) | bit(5);
        case 8: return bit(2) | bit(3) | bit(4) | bit(5);
      }
    }
    if (bi == 6 && bj == 7) return bit(8);
    if (bi == 6 && bj == 8) return bit(7);
    if (bi == 7 && bj == 8) return bit(6);
  }
  return 0u;
}

CenterRotations center_rotations(const FlagSpec& spec) {
  const long l = spec.l, m = spec.m, n = spec.n, N = spec.N();
  CenterRotations cr;
  cr.alpha2d[6] = Rat(0);
  cr.alpha2d[7] = rat(l, l + m);
  cr.alpha2d[8] = rat(m, l + m);
  cr.beta2d[6] = rat(l + m, N);
  cr.beta2d[7] = rat(m * n, N * (l + m));
  cr.beta2d[8] = rat(l * n, N * (l + m));
  cr.eps[6] = 0;
  cr.eps[7] = 1;
  cr.eps[8] = -1;
  cr.omega2_num = l * m * n;
  cr.omega2_den = N;
  return cr;
}

}  // namespace einstein
