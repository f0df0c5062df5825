#pragma once

#include "einstein/poly.hpp"
#include "einstein/ricci.hpp"

namespace einstein {

/// Symbolic Ricci components for the solver pipelines. Everything is built
/// over the fixed variable universe {u1,u2,u3,v4,v5,x6,x8} with x7 = 1 and
/// the center gauge in normal form a = d = 1, b = 0. The remaining gauge
/// entry is either c = 0 or the value solved from r0 = 0,
///   c = omega (1 - x8^2) / (l x8^2 + m),  omega^2 = l m n / N,
/// which keeps every component rational with denominator W = l x8^2 + m.
namespace sym {

/// Rational expression: num / (monomial * W^den_w); denominators are
/// positive on the admissible domain, so equations reduce to numerators.
struct Frac {
  MultiPoly num;
  std::map<std::string, int> den_mon;
  int den_w = 0;
};

struct Components {
  FlagSpec spec{1, 1, 1};
  SpaceKind space = SpaceKind::Group;
  bool c_solved = false;  // c from r0 = 0; otherwise c = 0
  bool x8_fixed = false;  // x8 = 1 (then c = 0 either way)
  std::vector<std::string> vars;
  MultiPoly W;            // l x8^2 + m, or 1 when x8 is fixed
  std::array<Frac, 9> r;  // r[0] is the r0 bracket divided by omega
  std::array<bool, 9> present{};
};

Components build_components(const FlagSpec& spec, SpaceKind space, bool c_solved,
                            bool x8_fixed);

/// Numerator of r_a - r_b over the common denominator.
MultiPoly diff_num(const Components& comp, int a, int b);
/// Numerator of r_a - v4/4 (the Einstein constant of the l = m = 2 family).
MultiPoly lambda_num(const Components& comp, int a);

/// Evaluate a component at a metric point (doubles), for cross-checks.
double eval_component(const Components& comp, int k,
                      const std::map<std::string, double>& point);

}  // namespace sym

/// Determinant of a small matrix of polynomials (fraction-free Bareiss).
MultiPoly poly_det(std::vector<std::vector<MultiPoly>> m);

/// Cramer data for a system linear in `unknowns`:
/// unknown_j = nums[j] / delta on the solution set.
struct LinearSolve {
  std::vector<std::string> unknowns;
  MultiPoly delta;
  std::vector<MultiPoly> nums;
};

LinearSolve solve_linear(const std::vector<MultiPoly>& eqs,
                         const std::vector<std::string>& unknowns);

/// Substitute unknown_j -> nums[j]/delta into eq and clear denominators.
MultiPoly substitute_solution(const MultiPoly& eq, const LinearSolve& ls);

/// Divide out content, monomial factors in the listed variables, known
/// denominator-born factors, and the naturally reductive branch factors
/// (var - 1) and (x6 - x8), counting the latter.
struct Stripped {
  MultiPoly p;
  std::map<std::string, int> factors;  // "x6-1", "x8-1", "x6-x8" counts
};

Stripped strip_equation(MultiPoly p, const std::vector<MultiPoly>& den_factors,
                        bool strip_branch_factors);

/// Gcd-based cleanup for univariate finals: removes exactly the factors
/// shared with the accumulated denominator, then content and monomials.
MultiPoly strip_univariate(MultiPoly p, const std::vector<MultiPoly>& den_factors);

/// Quad-valued evaluation (single radical) of a polynomial.
Quad eval_quad(const MultiPoly& p, const std::map<std::string, Quad>& point);

}  // namespace einstein
