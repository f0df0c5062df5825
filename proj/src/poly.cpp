#include "einstein/poly.hpp"

#include <algorithm>
#include <cmath>

namespace einstein {

// ---------------------------------------------------------------------------
// MultiPoly

MultiPoly MultiPoly::constant(std::vector<std::string> v, const Rat& c) {
  MultiPoly p(std::move(v));
  if (c != 0) p.terms[std::vector<int>(p.vars.size(), 0)] = c;
  return p;
}

MultiPoly MultiPoly::variable(std::vector<std::string> v, const std::string& name) {
  MultiPoly p(std::move(v));
  std::vector<int> e(p.vars.size(), 0);
  e[size_t(p.var_index(name))] = 1;
  p.terms[e] = Rat(1);
  return p;
}

int MultiPoly::var_index(const std::string& name) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return int(i);
  throw std::invalid_argument("MultiPoly: unknown variable " + name);
}

int MultiPoly::degree(const std::string& var) const {
  int vi = var_index(var), d = 0;
  for (const auto& [e, c] : terms) d = std::max(d, e[size_t(vi)]);
  return d;
}

int MultiPoly::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

MultiPoly MultiPoly::coeff_of(const std::string& var, int power) const {
  int vi = var_index(var);
  MultiPoly out(vars);
  for (const auto& [e, c] : terms)
    if (e[size_t(vi)] == power) {
      auto e2 = e;
      e2[size_t(vi)] = 0;
      out.terms[e2] += c;
    }
  for (auto it = out.terms.begin(); it != out.terms.end();)
    it = (it->second == 0) ? out.terms.erase(it) : std::next(it);
  return out;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  if (vars != o.vars) throw std::invalid_argument("MultiPoly: variable mismatch");
  for (const auto& [e, c] : o.terms) {
    Rat& t = terms[e];
    t += c;
    if (t == 0) terms.erase(e);
  }
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  if (vars != o.vars) throw std::invalid_argument("MultiPoly: variable mismatch");
  for (const auto& [e, c] : o.terms) {
    Rat& t = terms[e];
    t -= c;
    if (t == 0) terms.erase(e);
  }
  return *this;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly out(vars);
  for (const auto& [e, c] : terms) out.terms[e] = -c;
  return out;
}

MultiPoly& MultiPoly::operator*=(const Rat& k) {
  if (k == 0) {
    terms.clear();
    return *this;
  }
  for (auto& [e, c] : terms) c *= k;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.vars != b.vars) throw std::invalid_argument("MultiPoly: variable mismatch");
  MultiPoly out(a.vars);
  std::vector<int> e(a.vars.size());
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms) {
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      Rat& t = out.terms[e];
      t += ca * cb;
      if (t == 0) out.terms.erase(e);
    }
  return out;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
  return vars == o.vars && terms == o.terms;
}

MultiPoly MultiPoly::derivative(const std::string& var) const {
  int vi = var_index(var);
  MultiPoly out(vars);
  for (const auto& [e, c] : terms) {
    if (e[size_t(vi)] == 0) continue;
    auto e2 = e;
    e2[size_t(vi)] -= 1;
    out.terms[e2] += c * e[size_t(vi)];
  }
  return out;
}

Rat MultiPoly::eval(const std::map<std::string, Rat>& point) const {
  Rat total = 0;
  for (const auto& [e, c] : terms) {
    Rat t = c;
    for (size_t i = 0; i < vars.size(); ++i) {
      if (e[i] == 0) continue;
      auto it = point.find(vars[i]);
      if (it == point.end()) throw std::invalid_argument("eval: missing " + vars[i]);
      t *= rat_pow(it->second, unsigned(e[i]));
    }
    total += t;
  }
  return total;
}

double MultiPoly::eval_double(const std::map<std::string, double>& point) const {
  double total = 0;
  for (const auto& [e, c] : terms) {
    double t = to_double(c);
    for (size_t i = 0; i < vars.size(); ++i) {
      if (e[i] == 0) continue;
      auto it = point.find(vars[i]);
      if (it == point.end()) throw std::invalid_argument("eval: missing " + vars[i]);
      t *= std::pow(it->second, e[i]);
    }
    total += t;
  }
  return total;
}

std::optional<MultiPoly> MultiPoly::exact_divide(const MultiPoly& divisor) const {
  if (divisor.is_zero()) return std::nullopt;
  if (vars != divisor.vars) throw std::invalid_argument("exact_divide: variable mismatch");
  MultiPoly rem = *this, quo(vars);
  const auto dl = *divisor.terms.rbegin();  // lex-leading term
  std::vector<int> e(vars.size());
  while (!rem.is_zero()) {
    const auto& rl = *rem.terms.rbegin();
    bool ok = true;
    for (size_t i = 0; i < e.size(); ++i) {
      e[i] = rl.first[i] - dl.first[i];
      if (e[i] < 0) {
        ok = false;
        break;
      }
    }
    if (!ok) return std::nullopt;
    Rat c = rl.second / dl.second;
    quo.terms[e] += c;
    MultiPoly t(vars);
    t.terms[e] = c;
    rem -= t * divisor;
  }
  return quo;
}

Rat MultiPoly::content() const {
  Int num(0), den(1);
  for (const auto& [e, c] : terms) {
    num = gcd(num, c.get_num());
    den = lcm(den, c.get_den());
  }
  if (num == 0) return Rat(0);
  return rat(num, den);
}

MultiPoly MultiPoly::primitive() const {
  Rat c = content();
  if (c == 0) return *this;
  MultiPoly out = *this;
  out *= 1 / c;
  return out;
}

bool MultiPoly::is_univariate_in(const std::string& var) const {
  int vi = var_index(var);
  for (const auto& [e, c] : terms)
    for (size_t i = 0; i < e.size(); ++i)
      if (int(i) != vi && e[i] != 0) return false;
  return true;
}

std::string MultiPoly::str() const {
  if (terms.empty()) return "0";
  std::string s;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    if (!s.empty()) s += " + ";
    s += it->second.get_str();
    for (size_t i = 0; i < vars.size(); ++i)
      if (it->first[i] > 0) {
        s += "*" + vars[i];
        if (it->first[i] > 1) s += "^" + std::to_string(it->first[i]);
      }
  }
  return s;
}

std::pair<MultiPoly, MultiPoly> align_vars(const MultiPoly& a, const MultiPoly& b) {
  if (a.vars == b.vars) return {a, b};
  std::vector<std::string> u = a.vars;
  for (const auto& v : b.vars)
    if (std::find(u.begin(), u.end(), v) == u.end()) u.push_back(v);
  auto remap = [&](const MultiPoly& p) {
    MultiPoly out(u);
    std::vector<int> pos(p.vars.size());
    for (size_t i = 0; i < p.vars.size(); ++i)
      pos[i] = int(std::find(u.begin(), u.end(), p.vars[i]) - u.begin());
    for (const auto& [e, c] : p.terms) {
      std::vector<int> e2(u.size(), 0);
      for (size_t i = 0; i < e.size(); ++i) e2[size_t(pos[i])] = e[i];
      out.terms[e2] = c;
    }
    return out;
  };
  return {remap(a), remap(b)};
}

MultiPoly poly_substitute(const MultiPoly& p, const Assignment& assignments) {
  for (const auto& [name, v] : assignments) p.var_index(name);  // presence check
  MultiPoly out = MultiPoly::constant(p.vars, Rat(0));
  for (const auto& [e, c] : p.terms) {
    MultiPoly term = MultiPoly::constant(p.vars, c);
    for (size_t i = 0; i < p.vars.size(); ++i) {
      if (e[i] == 0) continue;
      auto it = assignments.find(p.vars[i]);
      if (it == assignments.end()) {
        std::vector<int> ev(p.vars.size(), 0);
        ev[i] = e[i];
        MultiPoly mono(p.vars);
        mono.terms[ev] = Rat(1);
        auto [t2, m2] = align_vars(term, mono);
        term = t2 * m2;
      } else if (std::holds_alternative<Rat>(it->second)) {
        term *= rat_pow(std::get<Rat>(it->second), unsigned(e[i]));
      } else {
        const MultiPoly& sub = std::get<MultiPoly>(it->second);
        MultiPoly power = sub;
        for (int k = 1; k < e[i]; ++k) {
          auto [pa, pb] = align_vars(power, sub);
          power = pa * pb;
        }
        auto [t3, pw] = align_vars(term, power);
        term = t3 * pw;
      }
    }
    auto [o2, tt] = align_vars(out, term);
    out = o2 + tt;
  }
  return out;
}

// ---------------------------------------------------------------------------
// integer univariate layer

namespace upoly {

void UPolyZ::normalize() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

UPolyZ operator+(const UPolyZ& a, const UPolyZ& b) {
  UPolyZ r;
  r.c.resize(std::max(a.c.size(), b.c.size()), Int(0));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  r.normalize();
  return r;
}

UPolyZ operator-(const UPolyZ& a, const UPolyZ& b) {
  UPolyZ r;
  r.c.resize(std::max(a.c.size(), b.c.size()), Int(0));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
  r.normalize();
  return r;
}

UPolyZ operator*(const UPolyZ& a, const UPolyZ& b) {
  if (a.zero() || b.zero()) return {};
  UPolyZ r;
  r.c.assign(a.c.size() + b.c.size() - 1, Int(0));
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j)
      if (b.c[j] != 0) r.c[i + j] += a.c[i] * b.c[j];
  }
  r.normalize();
  return r;
}

UPolyZ UPolyZ::operator-() const {
  UPolyZ r = *this;
  for (auto& x : r.c) x = -x;
  return r;
}

UPolyZ UPolyZ::scaled(const Int& k) const {
  if (k == 0) return {};
  UPolyZ r = *this;
  for (auto& x : r.c) x *= k;
  return r;
}

UPolyZ UPolyZ::derivative() const {
  UPolyZ r;
  if (c.size() <= 1) return r;
  r.c.resize(c.size() - 1);
  for (size_t i = 1; i < c.size(); ++i) r.c[i - 1] = c[i] * long(i);
  r.normalize();
  return r;
}

Int UPolyZ::content() const {
  Int g(0);
  for (const auto& x : c) g = gcd(g, x);
  return g;
}

UPolyZ UPolyZ::primitive() const {
  Int g = content();
  if (g == 0 || g == 1) return *this;
  UPolyZ r = *this;
  for (auto& x : r.c) x /= g;
  return r;
}

Int UPolyZ::eval_int(const Int& x) const {
  Int total(0);
  for (size_t i = c.size(); i-- > 0;) total = total * x + c[i];
  return total;
}

int UPolyZ::sign_at(const Rat& x) const {
  if (zero()) return 0;
  const Int& a = x.get_num();
  const Int& b = x.get_den();
  // p(a/b) * b^deg = sum c_i a^i b^(deg-i)
  Int total(0);
  for (size_t i = c.size(); i-- > 0;) {
    total = total * a;
    if (c[i] != 0) total += c[i] * int_pow(b, unsigned(c.size() - 1 - i));
  }
  return sgn(total);
}

double UPolyZ::eval_double(double x) const {
  double total = 0;
  for (size_t i = c.size(); i-- > 0;) total = total * x + to_double(c[i]);
  return total;
}

Rat UPolyZ::eval_rat(const Rat& x) const {
  Rat total(0);
  for (size_t i = c.size(); i-- > 0;) total = total * x + Rat(c[i]);
  return total;
}

UPolyZ from_rat_coeffs(const std::vector<Rat>& coeffs) {
  Int den(1);
  for (const auto& q : coeffs) den = lcm(den, q.get_den());
  UPolyZ p;
  p.c.reserve(coeffs.size());
  for (const auto& q : coeffs) p.c.push_back(q.get_num() * (den / q.get_den()));
  p.normalize();
  return p;
}

std::vector<Rat> to_rat_coeffs(const UPolyZ& p) {
  std::vector<Rat> out;
  out.reserve(p.c.size());
  for (const auto& x : p.c) out.emplace_back(x);
  return out;
}

namespace {

/// Pseudo-remainder; the output is sign * positive-multiple of (a mod b),
/// with sign reported through mult_sign.
UPolyZ prem_signed(UPolyZ a, const UPolyZ& b, int& mult_sign) {
  mult_sign = 1;
  const int lsign = sgn(b.lc());
  while (!a.zero() && a.deg() >= b.deg()) {
    int shift = a.deg() - b.deg();
    Int la = a.lc();
    UPolyZ t;
    t.c.assign(size_t(shift), Int(0));
    for (const auto& x : b.c) t.c.push_back(x * la);
    a = a.scaled(b.lc()) - t;
    mult_sign *= lsign;
    a.normalize();
  }
  return a;
}

}  // namespace

UPolyZ exact_div(const UPolyZ& a, const UPolyZ& b) {
  if (b.zero()) throw std::invalid_argument("exact_div by zero");
  if (a.zero()) return {};
  if (a.deg() < b.deg()) throw std::invalid_argument("exact_div: not divisible");
  UPolyZ rem = a, quo;
  quo.c.assign(size_t(a.deg() - b.deg() + 1), Int(0));
  while (!rem.zero() && rem.deg() >= b.deg()) {
    Int q, r_;
    mpz_tdiv_qr(q.get_mpz_t(), r_.get_mpz_t(), rem.lc().get_mpz_t(), b.lc().get_mpz_t());
    if (r_ != 0) throw std::invalid_argument("exact_div: not divisible");
    int shift = rem.deg() - b.deg();
    quo.c[size_t(shift)] = q;
    UPolyZ t;
    t.c.assign(size_t(shift), Int(0));
    for (const auto& x : b.c) t.c.push_back(x * q);
    rem = rem - t;
  }
  if (!rem.zero()) throw std::invalid_argument("exact_div: not divisible");
  quo.normalize();
  return quo;
}

bool divides(const UPolyZ& b, const UPolyZ& a) {
  if (a.zero()) return true;
  if (b.zero() || b.deg() > a.deg()) return false;
  try {
    exact_div(a, b);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

// --------------------------- modular arithmetic ----------------------------

namespace {

using u64 = uint64_t;
using u128 = unsigned __int128;

u64 addm(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  return s >= p ? s - p : s;
}
u64 subm(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }
u64 mulm(u64 a, u64 b, u64 p) { return u64((u128)a * b % p); }
u64 powm(u64 a, u64 e, u64 p) {
  u64 r = 1;
  a %= p;
  while (e) {
    if (e & 1) r = mulm(r, a, p);
    a = mulm(a, a, p);
    e >>= 1;
  }
  return r;
}
u64 invm(u64 a, u64 p) { return powm(a, p - 2, p); }

const std::vector<u64>& prime_table() {
  static const std::vector<u64> primes = [] {
    std::vector<u64> out;
    Int p = Int(1) << 61;
    for (int i = 0; i < 128; ++i) {
      mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
      out.push_back(u64(mpz_get_ui(p.get_mpz_t())));
    }
    return out;
  }();
  return primes;
}

u64 mod_of(const Int& x, u64 p) {
  Int pi = int_of(static_cast<long long>(p));
  Int r = x % pi;
  if (r < 0) r += pi;
  return u64(mpz_get_ui(r.get_mpz_t()));
}

using PolyP = std::vector<u64>;  // lowest first, normalized

void norm_p(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PolyP reduce_mod(const UPolyZ& a, u64 p) {
  PolyP out(a.c.size());
  for (size_t i = 0; i < a.c.size(); ++i) out[i] = mod_of(a.c[i], p);
  norm_p(out);
  return out;
}

PolyP rem_p(PolyP a, const PolyP& b, u64 p) {
  const u64 ib = invm(b.back(), p);
  while (a.size() >= b.size()) {
    u64 f = mulm(a.back(), ib, p);
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i + 1 < b.size(); ++i)
      a[shift + i] = subm(a[shift + i], mulm(f, b[i], p), p);
    a.resize(a.size() - 1);
    norm_p(a);
  }
  return a;
}

PolyP gcd_p(PolyP a, PolyP b, u64 p) {
  while (!b.empty()) {
    PolyP r = rem_p(std::move(a), b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    u64 ia = invm(a.back(), p);
    for (auto& x : a) x = mulm(x, ia, p);
  }
  return a;
}

u64 resultant_p(PolyP f, PolyP g, u64 p) {
  if (f.empty() || g.empty()) return 0;
  u64 res = 1;
  bool neg = false;
  while (g.size() > 1) {
    PolyP r = rem_p(f, g, p);
    int df = int(f.size()) - 1, dg = int(g.size()) - 1;
    int dr = r.empty() ? 0 : int(r.size()) - 1;
    if ((df & 1) && (dg & 1)) neg = !neg;
    if (r.empty()) return 0;
    res = mulm(res, powm(g.back(), u64(df - dr), p), p);
    f = std::move(g);
    g = std::move(r);
  }
  res = mulm(res, powm(g[0], u64(f.size() - 1), p), p);
  return neg ? (p - res) % p : res;
}

PolyP interpolate_p(const std::vector<u64>& xs, const std::vector<u64>& ys, u64 p) {
  const size_t n = xs.size();
  PolyP master{1};
  master.reserve(n + 1);
  for (size_t i = 0; i < n; ++i) {
    PolyP next(master.size() + 1, 0);
    for (size_t j = 0; j < master.size(); ++j) {
      next[j + 1] = addm(next[j + 1], master[j], p);
      next[j] = subm(next[j], mulm(master[j], xs[i], p), p);
    }
    master = std::move(next);
  }
  PolyP out(n, 0), q(n, 0);
  for (size_t i = 0; i < n; ++i) {
    u64 carry = 0;  // synthetic division by (x - x_i)
    for (size_t j = master.size(); j-- > 1;) {
      u64 cur = addm(master[j], mulm(carry, xs[i], p), p);
      q[j - 1] = cur;
      carry = cur;
    }
    u64 dv = 0;  // q(x_i)
    for (size_t j = n; j-- > 0;) dv = addm(mulm(dv, xs[i], p), q[j], p);
    u64 f = mulm(ys[i] % p, invm(dv, p), p);
    for (size_t j = 0; j < n; ++j) out[j] = addm(out[j], mulm(q[j], f, p), p);
  }
  norm_p(out);
  return out;
}

struct Crt {
  Int value{0}, modulus{1};
  void add(u64 residue, u64 p) {
    u64 vm = mod_of(value, p);
    u64 mm = mod_of(modulus, p);
    u64 t = mulm(subm(residue % p, vm, p), invm(mm, p), p);
    value += modulus * int_of(static_cast<long long>(t));
    modulus *= int_of(static_cast<long long>(p));
  }
  Int lifted() const {
    Int half = modulus / 2;
    Int v = value % modulus;
    if (v < 0) v += modulus;
    if (v > half) v -= modulus;
    return v;
  }
};

double log2_norm1(const UPolyZ& a) {
  Int s(0);
  for (const auto& x : a.c) s += abs(x);
  if (s == 0) return 0;
  return double(mpz_sizeinbase(s.get_mpz_t(), 2));
}

}  // namespace

UPolyZ gcd(const UPolyZ& a0, const UPolyZ& b0) {
  auto poscale = [](UPolyZ p) {
    if (!p.zero() && sgn(p.lc()) < 0)
      for (auto& x : p.c) x = -x;
    return p;
  };
  if (a0.zero()) return poscale(b0);
  if (b0.zero()) return poscale(a0);
  Int cont = gcd(a0.content(), b0.content());
  UPolyZ a = a0.primitive(), b = b0.primitive();
  if (a.deg() < b.deg()) std::swap(a, b);
  if (b.deg() == 0) {
    UPolyZ one;
    one.c = {cont};
    return one;
  }
  Int lg = gcd(a.lc(), b.lc());
  int best_deg = -1;
  std::vector<Crt> acc;
  int stable = 0;
  for (u64 p : prime_table()) {
    if (mod_of(a.lc(), p) == 0 || mod_of(b.lc(), p) == 0) continue;
    PolyP gp = gcd_p(reduce_mod(a, p), reduce_mod(b, p), p);
    int dg = int(gp.size()) - 1;
    if (dg == 0) {
      UPolyZ one;
      one.c = {cont};
      return one;
    }
    u64 lgp = mod_of(lg, p);
    for (auto& x : gp) x = mulm(x, lgp, p);
    if (best_deg < 0 || dg < best_deg) {
      best_deg = dg;
      acc.assign(size_t(dg + 1), Crt{});
      stable = 0;
    } else if (dg > best_deg) {
      continue;  // unlucky prime
    }
    for (int i = 0; i <= dg; ++i) acc[size_t(i)].add(gp[size_t(i)], p);
    ++stable;
    if (stable >= 2) {
      UPolyZ cand;
      cand.c.resize(size_t(best_deg + 1));
      for (int i = 0; i <= best_deg; ++i) cand.c[size_t(i)] = acc[size_t(i)].lifted();
      cand.normalize();
      if (!cand.zero()) {
        cand = poscale(cand.primitive());
        if (divides(cand, a) && divides(cand, b)) return cand.scaled(cont);
      }
    }
  }
  throw std::runtime_error("upoly::gcd: prime table exhausted");
}

UPolyZ squarefree_part(const UPolyZ& a) {
  if (a.zero() || a.deg() <= 1) return a.primitive();
  UPolyZ g = gcd(a, a.derivative());
  if (g.deg() == 0) return a.primitive();
  return exact_div(a.primitive(), g.primitive()).primitive();
}

std::vector<UPolyZ> squarefree_decomposition(const UPolyZ& a) {
  std::vector<UPolyZ> out;
  if (a.zero() || a.deg() == 0) return out;
  UPolyZ f = a.primitive();
  if (sgn(f.lc()) < 0) f = -f;
  UPolyZ g = gcd(f, f.derivative()).primitive();
  if (g.deg() == 0) {
    out.push_back(f);
    return out;
  }
  UPolyZ w = exact_div(f, g);
  UPolyZ y = exact_div(f.derivative(), g);
  while (w.deg() > 0) {
    UPolyZ z = y - w.derivative();
    UPolyZ pk = gcd(w, z).primitive();
    out.push_back(pk);
    w = exact_div(w, pk);
    y = exact_div(z, pk);
  }
  return out;
}

Int resultant(const UPolyZ& a, const UPolyZ& b) {
  if (a.zero() || b.zero()) return Int(0);
  if (a.deg() == 0) return int_pow(a.c[0], unsigned(b.deg()));
  if (b.deg() == 0) return int_pow(b.c[0], unsigned(a.deg()));
  const double bits =
      b.deg() * (log2_norm1(a) + 1) + a.deg() * (log2_norm1(b) + 1) + 8;
  Crt crt;
  for (u64 p : prime_table()) {
    if (mod_of(a.lc(), p) == 0 || mod_of(b.lc(), p) == 0) continue;
    crt.add(resultant_p(reduce_mod(a, p), reduce_mod(b, p), p), p);
    if (double(mpz_sizeinbase(crt.modulus.get_mpz_t(), 2)) > bits) return crt.lifted();
  }
  throw std::runtime_error("upoly::resultant: prime table exhausted");
}

std::vector<UPolyZ> sturm_chain(const UPolyZ& p) {
  std::vector<UPolyZ> chain;
  if (p.zero()) return chain;
  chain.push_back(p.primitive());
  if (p.deg() == 0) return chain;
  chain.push_back(p.derivative().primitive());
  while (!chain.back().zero() && chain.back().deg() > 0) {
    int msign = 1;
    UPolyZ r = prem_signed(chain[chain.size() - 2], chain.back(), msign);
    if (r.zero()) break;
    r = r.primitive();
    if (msign > 0) r = -r;
    chain.push_back(std::move(r));
  }
  return chain;
}

int sign_variations_at(const std::vector<UPolyZ>& chain, const Rat& x) {
  int var = 0, prev = 0;
  for (const auto& p : chain) {
    int s = p.sign_at(x);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++var;
    prev = s;
  }
  return var;
}

int sign_variations_at_inf(const std::vector<UPolyZ>& chain, int direction) {
  int var = 0, prev = 0;
  for (const auto& p : chain) {
    if (p.zero()) continue;
    int s = sgn(p.lc());
    if (direction < 0 && (p.deg() & 1)) s = -s;
    if (prev != 0 && s != prev) ++var;
    prev = s;
  }
  return var;
}

int count_roots(const std::vector<UPolyZ>& chain, const Rat& a, const Rat& b) {
  return sign_variations_at(chain, a) - sign_variations_at(chain, b);
}

int count_real_roots(const UPolyZ& p) {
  auto chain = sturm_chain(p);
  return sign_variations_at_inf(chain, -1) - sign_variations_at_inf(chain, +1);
}

Rat root_bound(const UPolyZ& p) {
  if (p.zero() || p.deg() == 0) return Rat(1);
  Int m(0);
  for (const auto& x : p.c) {
    Int a = abs(x);
    if (a > m) m = a;
  }
  return 1 + rat(m, abs(p.lc()));
}

namespace {

Rat pick_nonroot_near(const UPolyZ& p, const Rat& x, Rat step) {
  for (int k = 0; k < 96; ++k) {
    Rat cand = x - step;
    if (p.sign_at(cand) != 0) return cand;
    step /= 7;
  }
  throw std::runtime_error("pick_nonroot_near failed");
}

}  // namespace

std::vector<Isolation> isolate_sturm(const UPolyZ& p, const Rat& lo, const Rat& hi) {
  std::vector<Isolation> out;
  if (p.zero() || p.deg() == 0 || !(lo < hi)) return out;
  auto chain = sturm_chain(p);
  Rat a0 = lo, b0 = hi;
  if (p.sign_at(a0) == 0) {
    out.push_back({a0, a0});
    a0 = pick_nonroot_near(p, a0, -(hi - lo) / 1024);
  }
  if (p.sign_at(b0) == 0) {
    out.push_back({b0, b0});
    b0 = pick_nonroot_near(p, b0, (hi - lo) / 1024);
  }
  struct Node {
    Rat a, b;
    int cnt;
  };
  std::vector<Node> stack{{a0, b0, count_roots(chain, a0, b0)}};
  while (!stack.empty()) {
    Node nd = stack.back();
    stack.pop_back();
    if (nd.cnt <= 0) continue;
    if (nd.cnt == 1 && p.sign_at(nd.a) * p.sign_at(nd.b) < 0) {
      out.push_back({nd.a, nd.b});
      continue;
    }
    Rat mid = (nd.a + nd.b) / 2;
    if (p.sign_at(mid) == 0) {
      out.push_back({mid, mid});
      Rat left = pick_nonroot_near(p, mid, (mid - nd.a) / 64);
      Rat right = pick_nonroot_near(p, mid, -(nd.b - mid) / 64);
      stack.push_back({nd.a, left, count_roots(chain, nd.a, left)});
      stack.push_back({right, nd.b, count_roots(chain, right, nd.b)});
    } else {
      int lcnt = count_roots(chain, nd.a, mid);
      stack.push_back({nd.a, mid, lcnt});
      stack.push_back({mid, nd.b, nd.cnt - lcnt});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Isolation& x, const Isolation& y) { return x.lo < y.lo; });
  return out;
}

namespace {

void shift1(std::vector<Int>& c) {  // p(x) -> p(x+1)
  const int n = int(c.size());
  for (int i = 0; i < n - 1; ++i)
    for (int j = n - 2; j >= i; --j) c[size_t(j)] += c[size_t(j) + 1];
}

int descartes_count(const std::vector<Int>& c) {
  std::vector<Int> r(c.rbegin(), c.rend());
  shift1(r);
  int var = 0, prev = 0;
  for (const auto& x : r) {
    int s = sgn(x);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++var;
    prev = s;
  }
  return var;
}

void descartes01(std::vector<Int> c, const Rat& lo, const Rat& hi, const UPolyZ& orig,
                 std::vector<Isolation>& out, int depth) {
  if (depth > 512) throw std::runtime_error("descartes01: depth exceeded");
  int v = descartes_count(c);
  if (v == 0) return;
  if (v == 1) {
    out.push_back({lo, hi});
    return;
  }
  const int n = int(c.size()) - 1;
  std::vector<Int> left(c.size());
  for (size_t i = 0; i < c.size(); ++i) left[i] = c[i] << unsigned(n - int(i));
  std::vector<Int> right = left;
  shift1(right);
  Rat mid = (lo + hi) / 2;
  if (orig.sign_at(mid) == 0) out.push_back({mid, mid});
  descartes01(std::move(left), lo, mid, orig, out, depth + 1);
  descartes01(std::move(right), mid, hi, orig, out, depth + 1);
}

}  // namespace

std::vector<Isolation> isolate_descartes(const UPolyZ& p, const Rat& lo, const Rat& hi) {
  std::vector<Isolation> out;
  if (p.zero() || p.deg() == 0) return out;
  Rat bound = root_bound(p);
  Rat a = std::max(lo, Rat(-bound)), b = std::min(hi, bound);
  if (!(a < b)) return out;
  const int n = p.deg();
  const Rat span = b - a;
  // q(t) = p(a + span t), exact affine composition
  std::vector<Rat> cur{Rat(0)};
  for (int i = n; i >= 0; --i) {
    std::vector<Rat> next(cur.size() + 1, Rat(0));
    for (size_t j = 0; j < cur.size(); ++j) {
      next[j] += cur[j] * a;
      next[j + 1] += cur[j] * span;
    }
    next[0] += Rat(p.c[size_t(i)]);
    while (next.size() > 1 && next.back() == 0) next.pop_back();
    cur = std::move(next);
  }
  cur.resize(size_t(n + 1), Rat(0));
  UPolyZ q = from_rat_coeffs(cur);
  std::vector<Isolation> t_out;
  if (q.sign_at(Rat(1)) == 0) t_out.push_back({Rat(1), Rat(1)});
  std::vector<Int> qq = q.c;
  qq.resize(size_t(n + 1), Int(0));
  descartes01(std::move(qq), Rat(0), Rat(1), q, t_out, 0);
  for (auto& iv : t_out) out.push_back({a + span * iv.lo, a + span * iv.hi});
  std::sort(out.begin(), out.end(),
            [](const Isolation& x, const Isolation& y) { return x.lo < y.lo; });
  // the requested window is (lo, hi]
  std::vector<Isolation> clipped;
  for (auto& iv : out) {
    if (iv.lo == iv.hi && (iv.lo <= lo || iv.lo > hi)) continue;
    clipped.push_back(iv);
  }
  return clipped;
}

std::vector<Isolation> isolate(const UPolyZ& p, const Rat& lo, const Rat& hi) {
  if (p.deg() <= 128) return isolate_sturm(p, lo, hi);
  return isolate_descartes(p, lo, hi);
}

Isolation refine(const UPolyZ& p, Isolation iv, const Rat& width) {
  if (iv.lo == iv.hi) return iv;
  // an endpoint may be an exact rational root of p distinct from the
  // isolated one; deflate it so the bracket has nonzero endpoint signs
  UPolyZ q = p;
  auto deflate = [&](const Rat& r) {
    Rat rr = r;
    rr.canonicalize();
    UPolyZ lin;
    lin.c = {-rr.get_num(), rr.get_den()};
    q = exact_div(q, lin);
  };
  while (!q.zero() && q.deg() > 0 && q.sign_at(iv.lo) == 0) deflate(iv.lo);
  while (!q.zero() && q.deg() > 0 && q.sign_at(iv.hi) == 0) deflate(iv.hi);
  const int sl = q.sign_at(iv.lo);
  while (iv.hi - iv.lo > width) {
    Rat mid = (iv.lo + iv.hi) / 2;
    int sm = q.sign_at(mid);
    if (sm == 0) return {mid, mid};
    if (sm == sl) iv.lo = mid;
    else iv.hi = mid;
  }
  return iv;
}

double refine_to_double(const UPolyZ& p, Isolation iv) {
  iv = refine(p, iv, Rat(Int(1), int_pow(Int(10), 24)));
  return to_double((iv.lo + iv.hi) / 2);
}

std::vector<Int> bivar_resultant(const std::vector<std::vector<Int>>& pm,
                                 const std::vector<std::vector<Int>>& qm) {
  const int dep = int(pm.size()) - 1, deq = int(qm.size()) - 1;
  if (dep < 1 || deq < 1) throw std::invalid_argument("bivar_resultant: degree 0");
  auto dk = [](const std::vector<std::vector<Int>>& m) {
    int d = 0;
    for (const auto& row : m) d = std::max(d, int(row.size()) - 1);
    return d;
  };
  const int dkp = dk(pm), dkq = dk(qm);
  const int D = dep * dkq + deq * dkp;

  auto as_upoly = [](const std::vector<Int>& row) {
    UPolyZ u;
    u.c = row;
    u.normalize();
    return u;
  };
  UPolyZ lcp = as_upoly(pm.back()), lcq = as_upoly(qm.back());
  if (lcp.zero() || lcq.zero())
    throw std::invalid_argument("bivar_resultant: zero leading row");

  std::vector<long> nodes;
  for (long t = 0; int(nodes.size()) < D + 2; t = t > 0 ? -t : -t + 1) {
    if (lcp.eval_int(Int(t)) != 0 && lcq.eval_int(Int(t)) != 0) nodes.push_back(t);
    if (t > 8L * (D + 16)) throw std::runtime_error("bivar_resultant: node search failed");
  }
  const long verify_node = nodes.back();
  nodes.pop_back();

  Int s_p(0), s_q(0);
  for (const auto& row : pm)
    for (const auto& x : row) s_p += abs(x);
  for (const auto& row : qm)
    for (const auto& x : row) s_q += abs(x);
  const double bits = deq * double(mpz_sizeinbase(s_p.get_mpz_t(), 2)) +
                      dep * double(mpz_sizeinbase(s_q.get_mpz_t(), 2)) + 16;

  std::vector<Crt> acc(size_t(D + 1));
  double have = 0;
  for (u64 p : prime_table()) {
    bool ok = true;
    for (long t : nodes)
      if (mod_of(lcp.eval_int(Int(t)), p) == 0 || mod_of(lcq.eval_int(Int(t)), p) == 0) {
        ok = false;
        break;
      }
    if (!ok) continue;
    std::vector<std::vector<u64>> pmr(pm.size()), qmr(qm.size());
    for (size_t i = 0; i < pm.size(); ++i) {
      pmr[i].resize(pm[i].size());
      for (size_t j = 0; j < pm[i].size(); ++j) pmr[i][j] = mod_of(pm[i][j], p);
    }
    for (size_t i = 0; i < qm.size(); ++i) {
      qmr[i].resize(qm[i].size());
      for (size_t j = 0; j < qm[i].size(); ++j) qmr[i][j] = mod_of(qm[i][j], p);
    }
    std::vector<u64> xs, ys;
    xs.reserve(nodes.size());
    ys.reserve(nodes.size());
    for (long t : nodes) {
      u64 tm = t >= 0 ? u64(t) % p : p - (u64(-t) % p);
      auto eval_rows = [&](const std::vector<std::vector<u64>>& m) {
        PolyP out(m.size());
        for (size_t i = 0; i < m.size(); ++i) {
          u64 v = 0;
          for (size_t j = m[i].size(); j-- > 0;) v = addm(mulm(v, tm, p), m[i][j], p);
          out[i] = v;
        }
        norm_p(out);
        return out;
      };
      xs.push_back(tm);
      ys.push_back(resultant_p(eval_rows(pmr), eval_rows(qmr), p));
    }
    PolyP rp = interpolate_p(xs, ys, p);
    rp.resize(size_t(D + 1), 0);
    for (int i = 0; i <= D; ++i) acc[size_t(i)].add(rp[size_t(i)], p);
    have = double(mpz_sizeinbase(acc[0].modulus.get_mpz_t(), 2));
    if (have > bits) break;
  }
  if (have <= bits) throw std::runtime_error("bivar_resultant: prime table exhausted");

  std::vector<Int> out(size_t(D + 1));
  for (int i = 0; i <= D; ++i) out[size_t(i)] = acc[size_t(i)].lifted();
  while (!out.empty() && out.back() == 0) out.pop_back();

  {  // verification at a held-out node
    auto eval_rows_z = [&](const std::vector<std::vector<Int>>& m, long t) {
      UPolyZ u;
      u.c.resize(m.size());
      for (size_t i = 0; i < m.size(); ++i) {
        Int v(0);
        for (size_t j = m[i].size(); j-- > 0;) v = v * long(t) + m[i][j];
        u.c[i] = v;
      }
      u.normalize();
      return u;
    };
    UPolyZ pv = eval_rows_z(pm, verify_node), qv = eval_rows_z(qm, verify_node);
    Int expect = resultant(pv, qv);
    UPolyZ r;
    r.c = out;
    r.normalize();
    if (r.eval_int(Int(verify_node)) != expect)
      throw std::runtime_error("bivar_resultant: verification failed");
  }
  return out;
}

}  // namespace upoly

// ---------------------------------------------------------------------------
// resultant and isolation front ends

MultiPoly poly_det(std::vector<std::vector<MultiPoly>> m) {
  const int n = int(m.size());
  if (n == 0) return MultiPoly::constant({}, Rat(1));
  MultiPoly prev = MultiPoly::constant(m[0][0].vars, Rat(1));
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[size_t(k)][size_t(k)].is_zero()) {
      int r = -1;
      for (int i = k + 1; i < n; ++i)
        if (!m[size_t(i)][size_t(k)].is_zero()) {
          r = i;
          break;
        }
      if (r < 0) return MultiPoly::constant(m[0][0].vars, Rat(0));
      std::swap(m[size_t(k)], m[size_t(r)]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        MultiPoly num = m[size_t(k)][size_t(k)] * m[size_t(i)][size_t(j)] -
                        m[size_t(i)][size_t(k)] * m[size_t(k)][size_t(j)];
        auto quo = num.exact_divide(prev);
        if (!quo) throw std::logic_error("bareiss: exact division failed");
        m[size_t(i)][size_t(j)] = std::move(*quo);
      }
    prev = m[size_t(k)][size_t(k)];
  }
  MultiPoly det = m[size_t(n - 1)][size_t(n - 1)];
  if (sign < 0) det = -det;
  return det;
}

MultiPoly sylvester_resultant(const MultiPoly& p0, const MultiPoly& q0,
                              const std::string& var) {
  auto [p, q] = align_vars(p0, q0);
  if (p.is_zero() || q.is_zero())
    throw std::invalid_argument("sylvester_resultant: zero input");
  const int dp = p.degree(var), dq = q.degree(var);
  if (dp == 0 || dq == 0)
    throw std::invalid_argument("sylvester_resultant: degree 0 in " + var);
  if (dp + dq > 40)
    throw DimensionGuard("sylvester_resultant: Sylvester dimension exceeds 40");

  std::vector<std::string> others;
  for (const auto& v : p.vars)
    if (v != var && (p.degree(v) > 0 || q.degree(v) > 0)) others.push_back(v);

  if (others.size() == 1 && dp + dq > 8) {
    const std::string& kept = others[0];
    auto scale = [&](const MultiPoly& f) {
      Int den(1);
      for (const auto& [e, c] : f.terms) den = lcm(den, c.get_den());
      std::vector<std::vector<Int>> m(size_t(f.degree(var) + 1));
      int dkk = f.degree(kept);
      for (auto& row : m) row.assign(size_t(dkk + 1), Int(0));
      int iv = f.var_index(var), ik = f.var_index(kept);
      for (const auto& [e, c] : f.terms)
        m[size_t(e[size_t(iv)])][size_t(e[size_t(ik)])] = c.get_num() * (den / c.get_den());
      return m;
    };
    auto rc = upoly::bivar_resultant(scale(p), scale(q));
    Int denp(1), denq(1);
    for (const auto& [e, c] : p.terms) denp = lcm(denp, c.get_den());
    for (const auto& [e, c] : q.terms) denq = lcm(denq, c.get_den());
    Rat factor = rat(Int(1), int_pow(denp, unsigned(dq)) * int_pow(denq, unsigned(dp)));
    MultiPoly out(p.vars);
    std::vector<int> e(p.vars.size(), 0);
    int ik = out.var_index(kept);
    for (size_t i = 0; i < rc.size(); ++i) {
      if (rc[i] == 0) continue;
      e[size_t(ik)] = int(i);
      out.terms[e] = Rat(rc[i]) * factor;
    }
    return out;
  }

  const int n = dp + dq;
  std::vector<std::vector<MultiPoly>> m(size_t(n),
                                        std::vector<MultiPoly>(size_t(n), MultiPoly(p.vars)));
  for (int r = 0; r < dq; ++r)
    for (int k = 0; k <= dp; ++k) m[size_t(r)][size_t(r + k)] = p.coeff_of(var, dp - k);
  for (int r = 0; r < dp; ++r)
    for (int k = 0; k <= dq; ++k)
      m[size_t(dq + r)][size_t(r + k)] = q.coeff_of(var, dq - k);
  return poly_det(std::move(m));
}

std::vector<RootInterval> isolate_real_roots(const MultiPoly& p, std::optional<Rat> lo,
                                             std::optional<Rat> hi) {
  if (p.is_zero()) throw std::invalid_argument("isolate_real_roots: zero polynomial");
  std::string var;
  for (const auto& v : p.vars)
    if (p.degree(v) > 0) {
      if (!var.empty()) throw std::invalid_argument("isolate_real_roots: not univariate");
      var = v;
    }
  if (var.empty()) return {};
  std::vector<Rat> coeffs(size_t(p.degree(var) + 1), Rat(0));
  int vi = p.var_index(var);
  for (const auto& [e, c] : p.terms) coeffs[size_t(e[size_t(vi)])] = c;
  upoly::UPolyZ z = upoly::from_rat_coeffs(coeffs);
  upoly::UPolyZ sf = upoly::squarefree_part(z);
  auto yun = upoly::squarefree_decomposition(z);

  Rat bound = upoly::root_bound(sf);
  Rat a = lo.value_or(-bound), b = hi.value_or(bound);
  if (!(a < b)) return {};
  auto iso = upoly::isolate(sf, a, b);
  std::vector<RootInterval> out;
  for (const auto& iv : iso) {
    int mult = 1;
    for (size_t i = 0; i < yun.size(); ++i) {
      const auto& f = yun[i];
      if (f.deg() < 1) continue;
      bool has = iv.lo == iv.hi ? f.sign_at(iv.lo) == 0
                                : f.sign_at(iv.lo) * f.sign_at(iv.hi) < 0;
      if (has) {
        mult = int(i) + 1;
        break;
      }
    }
    out.push_back(RootInterval{iv.lo, iv.hi, mult});
  }
  return out;
}

}  // namespace einstein
