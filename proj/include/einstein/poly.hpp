#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "einstein/rational.hpp"

namespace einstein {

struct DimensionGuard : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Multivariate polynomial over Q: ordered variable list plus a term map
/// from exponent vectors to coefficients. No zero coefficients stored.
struct MultiPoly {
  std::vector<std::string> vars;
  std::map<std::vector<int>, Rat> terms;

  MultiPoly() = default;
  explicit MultiPoly(std::vector<std::string> v) : vars(std::move(v)) {}

  static MultiPoly constant(std::vector<std::string> v, const Rat& c);
  static MultiPoly variable(std::vector<std::string> v, const std::string& name);

  bool is_zero() const { return terms.empty(); }
  int arity() const { return int(vars.size()); }
  int var_index(const std::string& name) const;

  int degree(const std::string& var) const;
  int total_degree() const;
  MultiPoly coeff_of(const std::string& var, int power) const;
  MultiPoly leading_coeff(const std::string& var) const { return coeff_of(var, degree(var)); }

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly operator-() const;
  MultiPoly& operator*=(const Rat& c);
  friend MultiPoly operator*(MultiPoly a, const Rat& c) { return a *= c; }

  bool operator==(const MultiPoly& o) const;

  MultiPoly derivative(const std::string& var) const;
  Rat eval(const std::map<std::string, Rat>& point) const;
  double eval_double(const std::map<std::string, double>& point) const;

  /// Division test: returns the quotient when divisor divides exactly.
  std::optional<MultiPoly> exact_divide(const MultiPoly& divisor) const;

  Rat content() const;      // gcd of coefficients (positive), 0 for zero poly
  MultiPoly primitive() const;

  bool is_univariate_in(const std::string& var) const;
  std::string str() const;
};

/// Extend both polynomials to the union of their variable lists.
std::pair<MultiPoly, MultiPoly> align_vars(const MultiPoly& a, const MultiPoly& b);

using Assignment = std::map<std::string, std::variant<Rat, MultiPoly>>;
MultiPoly poly_substitute(const MultiPoly& p, const Assignment& assignments);

/// Resultant of p and q with respect to var: determinant of the Sylvester
/// matrix. Fraction-free Bareiss on polynomial entries for small systems,
/// exact evaluation-interpolation for bivariate integer input. The combined
/// Sylvester dimension is capped at 40.
MultiPoly sylvester_resultant(const MultiPoly& p, const MultiPoly& q, const std::string& var);

/// Determinant of a square polynomial matrix (fraction-free Bareiss).
MultiPoly poly_det(std::vector<std::vector<MultiPoly>> m);

struct RootInterval {
  Rat lo, hi;
  int multiplicity_hint = 1;
  bool is_point() const { return lo == hi; }
  double mid() const { return to_double((lo + hi) / 2); }
};

/// Isolating intervals (Sturm bisection) for all real roots of a univariate
/// polynomial inside [lo, hi]; unbounded sides accepted as nullopt.
std::vector<RootInterval> isolate_real_roots(const MultiPoly& p,
                                             std::optional<Rat> lo = std::nullopt,
                                             std::optional<Rat> hi = std::nullopt);

// ---------------------------------------------------------------------------
// Integer univariate layer (used by the solver pipelines and the ops above).

namespace upoly {

/// Coefficients lowest-degree first, no trailing zeros.
struct UPolyZ {
  std::vector<Int> c;

  bool zero() const { return c.empty(); }
  int deg() const { return int(c.size()) - 1; }
  const Int& lc() const { return c.back(); }
  void normalize();

  friend UPolyZ operator+(const UPolyZ& a, const UPolyZ& b);
  friend UPolyZ operator-(const UPolyZ& a, const UPolyZ& b);
  friend UPolyZ operator*(const UPolyZ& a, const UPolyZ& b);
  UPolyZ operator-() const;
  UPolyZ scaled(const Int& k) const;

  UPolyZ derivative() const;
  Int content() const;
  UPolyZ primitive() const;
  Int eval_int(const Int& x) const;
  /// sign of p(a/b), b > 0, exact
  int sign_at(const Rat& x) const;
  double eval_double(double x) const;
  Rat eval_rat(const Rat& x) const;
};

UPolyZ from_rat_coeffs(const std::vector<Rat>& coeffs);  // clears denominators
std::vector<Rat> to_rat_coeffs(const UPolyZ& p);

/// Exact quotient; throws if division is not exact.
UPolyZ exact_div(const UPolyZ& a, const UPolyZ& b);
bool divides(const UPolyZ& b, const UPolyZ& a);

UPolyZ gcd(const UPolyZ& a, const UPolyZ& b);          // primitive, modular CRT
UPolyZ squarefree_part(const UPolyZ& a);
/// Yun decomposition: element i (from 1) collects the roots of multiplicity i.
std::vector<UPolyZ> squarefree_decomposition(const UPolyZ& a);

Int resultant(const UPolyZ& a, const UPolyZ& b);       // modular CRT, exact

/// Sturm chain of the (not necessarily squarefree) polynomial.
std::vector<UPolyZ> sturm_chain(const UPolyZ& p);
int sign_variations_at(const std::vector<UPolyZ>& chain, const Rat& x);
int sign_variations_at_inf(const std::vector<UPolyZ>& chain, int direction);
/// Number of distinct real roots in (a, b].
int count_roots(const std::vector<UPolyZ>& chain, const Rat& a, const Rat& b);
int count_real_roots(const UPolyZ& p);
Rat root_bound(const UPolyZ& p);  // all real roots lie in [-B, B]

struct Isolation {
  Rat lo, hi;  // lo == hi marks an exact rational root
};
/// Isolating intervals for the distinct real roots of a squarefree p in
/// (lo, hi], via Sturm bisection.
std::vector<Isolation> isolate_sturm(const UPolyZ& p, const Rat& lo, const Rat& hi);
/// Same contract via Descartes/bisection; for large inputs.
std::vector<Isolation> isolate_descartes(const UPolyZ& p, const Rat& lo, const Rat& hi);
/// Dispatches on degree.
std::vector<Isolation> isolate(const UPolyZ& p, const Rat& lo, const Rat& hi);

/// Shrink an isolating interval of squarefree p below the requested width.
Isolation refine(const UPolyZ& p, Isolation iv, const Rat& width);
double refine_to_double(const UPolyZ& p, Isolation iv);

/// Exact resultant of bivariate integer polynomials, eliminating ve.
/// mat[i][j] holds the coefficient of ve^i * vk^j.
std::vector<Int> bivar_resultant(const std::vector<std::vector<Int>>& p,
                                 const std::vector<std::vector<Int>>& q);

}  // namespace upoly

}  // namespace einstein
