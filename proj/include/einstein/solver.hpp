#pragma once

#include "einstein/symbolic.hpp"

namespace einstein {

struct Classification {
  bool naturally_reductive = false;
  std::optional<std::string> nr_case;  // bi-invariant | case-1i | case-1ii | case-1iii | case-2
  std::optional<bool> jensen_type;     // Stiefel only
  double tolerance_used = 1e-6;
};

struct EinsteinSolution {
  FlagSpec spec{1, 1, 1};
  SpaceKind space = SpaceKind::Group;
  MetricParams metric;
  double lambda = 0;
  double residual = 0;  // brute-force certification residual
  std::optional<std::string> exact_form;
  std::map<std::string, std::string> exact_values;
  bool exact_certified = false;
  Classification classification;
  std::string origin;
};

struct RejectedCandidate {
  MetricParams metric;
  std::string reason;
};

struct SolveResult {
  FlagSpec spec{1, 1, 1};
  SpaceKind space = SpaceKind::Group;
  std::vector<EinsteinSolution> solutions;
  std::vector<RejectedCandidate> rejected;
  std::vector<std::string> notes;
  std::map<std::string, MultiPoly> artifacts;  // pipeline polynomials, for tests
  std::map<std::string, double> stats;
};

enum class SmallGroup { SU3, SU4 };
enum class SmallStiefel { V2C4, V3C5, V4C6 };

/// SU(3+n), l = 1, m = 2: r0 solved for c, x7 = 1, linear elimination of
/// u2, u3, v4, v5, bivariate remainder solved by resultant + isolation.
SolveResult solve_su_l1_m2(int n);
/// SU(4+n), l = m = 2, c = 0, x7 = x8 = 1 family.
SolveResult solve_su_l2_m2(int n);
/// The degree-16 characteristic polynomial of that family (roots in x6).
MultiPoly su_l2_m2_characteristic(int n);
SolveResult solve_su_small(SmallGroup which);
SolveResult solve_stiefel_small(SmallStiefel which);
/// V_{2m}C^{2m+n}: diagonal gauge, x7 = x8 = 1, u1 = u2.
SolveResult solve_stiefel_general(int m, int n);

struct NewtonOptions {
  uint64_t seed = 0;
  int starts = 512;
  int max_iter = 200;
  int max_halvings = 40;
  double fnorm_tol = 1e-13;
  int threads = 0;  // 0: EINSTEIN_THREADS or 1
};

SolveResult solve_generic_newton(const FlagSpec& spec, SpaceKind space,
                                 const NewtonOptions& opts = {});

struct SolveOptions {
  std::string pipeline = "auto";  // auto | newton
  NewtonOptions newton;
};

SolveResult solve_auto(const FlagSpec& spec, SpaceKind space, const SolveOptions& = {});

Classification classify_natural_reductivity(const FlagSpec& spec, const MetricParams& metric,
                                            double tol = 1e-6);
bool classify_jensen(const FlagSpec& spec, const MetricParams& metric, double tol = 1e-6);
/// Rewrite (v4, v5, gauge) in the unit-triangular normal form a = d = 1,
/// b = 0 presenting the same center inner product.
MetricParams normalize_center_gauge(const MetricParams& metric);
Classification classify_solution(const FlagSpec& spec, const MetricParams& metric,
                                 double tol = 1e-6);

namespace detail {

/// lambda from the mean of the closed components, residual from the brute
/// force; returns the certification residual.
double certify(const RicciBrute& engine, const FlagSpec& spec, const MetricParams& metric,
               double* lambda_out);

void sort_and_dedup(SolveResult& result, double tol = 1e-6);

/// Smallest-denominator rational in [lo, hi] (Stern-Brocot).
Rat simplest_rational_in(const Rat& lo, const Rat& hi);

}  // namespace detail

}  // namespace einstein
