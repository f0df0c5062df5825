#pragma once

#include <optional>

#include <memory>

#include "einstein/structure.hpp"

namespace einstein {

/// Metric coefficients for the families g_1 (Group) and g_2 (Stiefel):
/// u_i on h_i, v_4/v_5 on the gauge-diagonalized center, x_(j) on the
/// off-diagonal blocks. Absent blocks (d_k = 0, or h_3 in Stiefel mode)
/// carry coefficient 1 by convention and are ignored.
struct MetricParams {
  SpaceKind space = SpaceKind::Group;
  double u1 = 1, u2 = 1, u3 = 1, v4 = 1, v5 = 1, x6 = 1, x7 = 1, x8 = 1;
  Gauge gauge;

  double coeff(int k) const {
    switch (k) {
      case 1: return u1;
      case 2: return u2;
      case 3: return u3;
      case 4: return v4;
      case 5: return v5;
      case 6: return x6;
      case 7: return x7;
      case 8: return x8;
    }
    throw std::out_of_range("MetricParams::coeff");
  }
  double& coeff_ref(int k) {
    switch (k) {
      case 1: return u1;
      case 2: return u2;
      case 3: return u3;
      case 4: return v4;
      case 5: return v5;
      case 6: return x6;
      case 7: return x7;
      case 8: return x8;
    }
    throw std::out_of_range("MetricParams::coeff_ref");
  }
  void check_positive(const FlagSpec& spec) const {
    for (int k = 1; k <= 8; ++k)
      if (spec.block_present(k, space) && !(coeff(k) > 0))
        throw std::invalid_argument("MetricParams: non-positive coefficient");
    if (std::abs(gauge.det()) < 1e-14)
      throw std::invalid_argument("MetricParams: singular gauge");
  }
  MetricParams scaled(double t) const {
    MetricParams s = *this;
    for (int k = 1; k <= 8; ++k) s.coeff_ref(k) = t * coeff(k);
    return s;
  }
};

struct RicciComponents {
  SpaceKind space = SpaceKind::Group;
  double r0 = 0;
  std::array<double, 9> r{};          // r[1..8]; absent blocks stay 0
  std::array<bool, 9> present{};      // which diagonal components exist
  std::optional<double> lambda_candidate;
};

RicciComponents ricci_closed(const FlagSpec& spec, const MetricParams& metric);

/// (r0, r_k - lambda over present k), evaluated from the closed forms.
std::vector<double> einstein_residual(const FlagSpec& spec, const MetricParams& metric,
                                      double lambda);

/// Exact closed components for rational-or-quadratic data with a diagonal
/// rational gauge (b = c = 0); enough for certifying the exact solution
/// families. r0 vanishes identically when x7 == x8 in this gauge.
struct MetricQ {
  SpaceKind space = SpaceKind::Group;
  Quad u1{Rat(1)}, u2{Rat(1)}, u3{Rat(1)}, v4{Rat(1)}, v5{Rat(1)}, x6{Rat(1)},
      x7{Rat(1)}, x8{Rat(1)};
  Rat gauge_a{1}, gauge_d{1};
  Quad coeff(int k) const {
    switch (k) {
      case 1: return u1;
      case 2: return u2;
      case 3: return u3;
      case 4: return v4;
      case 5: return v5;
      case 6: return x6;
      case 7: return x7;
      case 8: return x8;
    }
    throw std::out_of_range("MetricQ::coeff");
  }
  MetricParams approx(const Gauge& g = Gauge{}) const;
};

struct RicciComponentsQ {
  Quad r0_bracket;  // r0 = sqrt(v4 v5)/4 * bracket; zero iff bracket zero
  std::array<Quad, 9> r{};
  std::array<bool, 9> present{};
};

RicciComponentsQ ricci_closed_exact(const FlagSpec& spec, const MetricQ& metric);

/// Brute-force Ricci over the metric-orthonormal adapted basis, straight
/// from the curvature formula; the oracle for the closed forms.
class RicciBrute {
 public:
  RicciBrute(const FlagSpec& spec, SpaceKind space);
  RicciBrute(std::shared_ptr<const StructureTensor> st, SpaceKind space);

  const FlagSpec& spec() const { return st_->spec; }
  SpaceKind space() const { return space_; }
  int dim() const { return dim_; }
  int block_of(int local) const { return st_->block_of[size_t(idx_[size_t(local)])]; }
  /// Local index range of a block, empty for absent blocks.
  std::pair<int, int> block_range(int k) const;

  Eigen::MatrixXd ricci_matrix(const MetricParams& metric) const;
  /// max-norm of (Ricci - lambda * identity) over the adapted basis
  double certify(const MetricParams& metric, double lambda) const;

 private:
  std::shared_ptr<const StructureTensor> st_;
  SpaceKind space_;
  int dim_ = 0;
  std::vector<int> idx_;        // local -> tensor flat index
  std::vector<int> local_of_;   // tensor flat -> local or -1
  int c4_ = -1, c5_ = -1;       // local slots of the center
};

inline Eigen::MatrixXd ricci_brute(const Decomposition& dec, const MetricParams& metric) {
  return RicciBrute(dec.spec, metric.space).ricci_matrix(metric);
}

/// Textbook dense evaluation of the same matrix (small N); used to pin the
/// sparse engine in tests.
Eigen::MatrixXd ricci_naive(const Decomposition& dec, const MetricParams& metric);

}  // namespace einstein
