#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "einstein/rational.hpp"

namespace einstein {

enum class SpaceKind { Group, Stiefel };

inline const char* space_name(SpaceKind s) {
  return s == SpaceKind::Group ? "group" : "stiefel";
}

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The triple (l, m, n) behind SU(l+m+n) and SU(l+m+n)/SU(n), with the
/// dimensions d_1..d_8 of the eight summands
///   h_1 = su(l), h_2 = su(m), h_3 = su(n), h_4, h_5 (center split),
///   n_6 = m_12, n_7 = m_13, n_8 = m_23.
struct FlagSpec {
  int l = 1, m = 1, n = 1;

  FlagSpec() = default;
  FlagSpec(int l_, int m_, int n_) : l(l_), m(m_), n(n_) {
    if (l < 1 || m < 1 || n < 1)
      throw std::invalid_argument("FlagSpec: l, m, n must be positive");
    if (l + m + n > 64)
      throw CapacityError("FlagSpec: N = l+m+n exceeds the supported bound 64");
  }

  int N() const { return l + m + n; }

  std::array<int, 9> dims() const {
    std::array<int, 9> d{};
    d[1] = l * l - 1;
    d[2] = m * m - 1;
    d[3] = n * n - 1;
    d[4] = 1;
    d[5] = 1;
    d[6] = 2 * l * m;
    d[7] = 2 * l * n;
    d[8] = 2 * m * n;
    return d;
  }

  bool block_present(int k, SpaceKind space) const {
    if (k == 3 && space == SpaceKind::Stiefel) return false;
    return dims()[k] > 0;
  }

  int tangent_dim(SpaceKind space) const {
    auto d = dims();
    int t = 0;
    for (int k = 1; k <= 8; ++k)
      if (block_present(k, space)) t += d[k];
    return t;
  }

  bool operator==(const FlagSpec& o) const { return l == o.l && m == o.m && n == o.n; }
};

/// Change of basis on the 2-dim center: (H~4, H~5) = (V4, V5) * [[a,b],[c,d]].
struct Gauge {
  double a = 1, b = 0, c = 0, d = 1;
  double det() const { return a * d - b * c; }
};

struct GaugeQ {
  Rat a = Rat(1), b = Rat(0), c = Rat(0), d = Rat(1);
  Rat det() const { return a * d - b * c; }
  Gauge approx() const { return Gauge{to_double(a), to_double(b), to_double(c), to_double(d)}; }
};

inline GaugeQ identity_gauge() { return GaugeQ{}; }

/// Dense complex matrix with exact Gaussian-rational entries scaled to
/// Gaussian integers; basis vectors are stored as M with the exact value
/// B(M, M) kept alongside, the unit vector being M / sqrt(B(M, M)).
struct CMatZ {
  int n = 0;
  std::vector<long long> re, im;

  CMatZ() = default;
  explicit CMatZ(int n_) : n(n_), re(size_t(n_) * n_, 0), im(size_t(n_) * n_, 0) {}

  long long& r(int i, int j) { return re[size_t(i) * n + j]; }
  long long& i_(int i, int j) { return im[size_t(i) * n + j]; }
  long long r(int i, int j) const { return re[size_t(i) * n + j]; }
  long long i_(int i, int j) const { return im[size_t(i) * n + j]; }
};

CMatZ commutator(const CMatZ& x, const CMatZ& y);
/// Real part of tr(X Y); imaginary part vanishes for skew-Hermitian inputs.
long long trace_prod_re(const CMatZ& x, const CMatZ& y);
/// Exact B(X, Y) = -2N tr(XY) for integer-scaled skew-Hermitian matrices.
inline Int killing_B_exact(int N, const CMatZ& x, const CMatZ& y) {
  return Int(-2L * N) * int_of(trace_prod_re(x, y));
}

Eigen::MatrixXcd to_complex(const CMatZ& m);

struct BasisVec {
  CMatZ M;    // integer-scaled representative
  Int bnorm;  // B(M, M) > 0
};

/// B-orthonormal bases of the eight blocks of su(N). Blocks with
/// dimension zero are empty. Blocks 4 and 5 hold the single vectors
/// whose units are H~4 and H~5.
struct Decomposition {
  FlagSpec spec;
  std::array<std::vector<BasisVec>, 9> blocks;

  const std::vector<BasisVec>& block(int k) const { return blocks[size_t(k)]; }
  Eigen::MatrixXcd unit(int k, int idx) const;
};

Decomposition build_decomposition(const FlagSpec& spec);

/// Negative of the Killing form, B(X, Y) = -2N tr(XY). Inputs must be
/// skew-Hermitian to 1e-13.
double killing_B(const FlagSpec& spec, const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y);

Eigen::MatrixXcd bracket(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y);

struct CenterBasis {
  Eigen::MatrixXcd H4, H5, H4_tilde, H5_tilde, V4, V5;
  double c1 = 0, c2 = 0;
};

CenterBasis center_basis(const FlagSpec& spec, const Gauge& gauge);

/// Blocks allowed to carry [block bi, block bj] per the bracket relations
/// of the decomposition (bitmask over 1..8).
unsigned bracket_targets(int bi, int bj);

/// Rotation speeds of ad(H~4), ad(H~5) on the blocks 6, 7, 8:
/// [H~4, A_ij] = alpha_j B_ij and [H~5, A_ij] = beta_j B_ij on block j.
/// Closed forms; squares and the products alpha*beta*d_j are rational.
struct CenterRotations {
  // alpha_j^2 * d_j and beta_j^2 * d_j for j = 6, 7, 8 (rational),
  // and eps_j with alpha_j*beta_j*d_j = eps_j * sqrt(lmn/N)/(l+m).
  std::array<Rat, 9> alpha2d{}, beta2d{};
  std::array<int, 9> eps{};
  Int omega2_num, omega2_den;  // omega^2 = lmn/N
};
CenterRotations center_rotations(const FlagSpec& spec);

}  // namespace einstein
