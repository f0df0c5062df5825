#pragma once

#include <gmpxx.h>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace einstein {

using Int = mpz_class;
using Rat = mpq_class;

/// 64-bit long long -> Int (long is 64-bit on this platform)
inline Int int_of(long long v) { return Int(static_cast<long>(v)); }

inline Rat rat(long num, long den = 1) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline Rat rat(const Int& num, const Int& den) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline double to_double(const Rat& q) { return q.get_d(); }
inline double to_double(const Int& z) { return z.get_d(); }

inline Int int_pow(Int base, unsigned e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rat rat_pow(const Rat& q, unsigned e) {
  Rat r;
  mpz_pow_ui(r.get_num_mpz_t(), q.get_num().get_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), q.get_den().get_mpz_t(), e);
  r.canonicalize();
  return r;
}

/// Exact conversion; doubles are binary rationals.
inline Rat rat_of_double(double x) {
  Rat q(x);
  q.canonicalize();
  return q;
}

inline int sign(const Rat& q) { return sgn(q); }
inline int sign(const Int& z) { return sgn(z); }

/// Element of the real quadratic extension Q(sqrt(D)), D a nonnegative
/// integer (not necessarily squarefree). D == 0 or b == 0 means a plain
/// rational. Mixed-D arithmetic is only defined when one side is rational.
struct Quad {
  Rat a;  // rational part
  Rat b;  // coefficient of sqrt(D)
  Int D = 0;

  Quad() = default;
  Quad(Rat ra) : a(std::move(ra)) {}
  Quad(Rat ra, Rat rb, Int d) : a(std::move(ra)), b(std::move(rb)), D(std::move(d)) {
    if (b == 0) D = 0;
  }

  bool is_rational() const { return b == 0; }

  static void align(Quad& x, Quad& y) {
    if (x.D == y.D) return;
    if (x.is_rational()) { x.D = y.D; return; }
    if (y.is_rational()) { y.D = x.D; return; }
    throw std::invalid_argument("Quad: incompatible radicands");
  }

  friend Quad operator+(Quad x, Quad y) {
    align(x, y);
    return Quad(x.a + y.a, x.b + y.b, x.D);
  }
  friend Quad operator-(Quad x, Quad y) {
    align(x, y);
    return Quad(x.a - y.a, x.b - y.b, x.D);
  }
  friend Quad operator*(Quad x, Quad y) {
    align(x, y);
    return Quad(x.a * y.a + x.b * y.b * Rat(x.D), x.a * y.b + x.b * y.a, x.D);
  }
  friend Quad operator-(const Quad& x) { return Quad(-x.a, -x.b, x.D); }
  friend Quad operator/(Quad x, Quad y) {
    align(x, y);
    Rat n = y.a * y.a - y.b * y.b * Rat(y.D);
    if (n == 0) throw std::domain_error("Quad: division by zero");
    Quad conj(y.a / n, -y.b / n, y.D);
    return x * conj;
  }
  Quad& operator+=(const Quad& y) { return *this = *this + y; }
  Quad& operator-=(const Quad& y) { return *this = *this - y; }
  Quad& operator*=(const Quad& y) { return *this = *this * y; }

  bool operator==(const Quad& y) const {
    if (is_rational() && y.is_rational()) return a == y.a;
    return a == y.a && b == y.b && D == y.D;
  }
  bool is_zero() const { return a == 0 && b == 0; }

  double value() const {
    double s = b == 0 ? 0.0 : to_double(b) * std::sqrt(to_double(D));
    return to_double(a) + s;
  }

  std::string str() const {
    if (is_rational()) return a.get_str();
    std::string s = "(" + a.get_str();
    s += (sgn(b) >= 0 ? "+" : "-");
    Rat ab = abs(b);
    if (ab != 1) s += ab.get_str() + "*";
    s += "sqrt(" + D.get_str() + "))";
    return s;
  }
};

}  // namespace einstein
