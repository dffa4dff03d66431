#pragma once

// Factorisation of square-free polynomials over Z (and hence Q): distinct-degree
// and Cantor-Zassenhaus splitting modulo a small prime, quadratic Hensel lifting,
// then recombination of the lifted factors by trial division.

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ndescent/exact/rational.hpp"

namespace ndescent {

using ZPoly = std::vector<Integer>;  // constant term first

namespace zfactor {

using u64 = std::uint64_t;
using ModPoly = std::vector<u64>;

inline void trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}
inline void trim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline u64 mulmod(u64 a, u64 b, u64 p) { return a * b % p; }

inline u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

inline ModPoly sub(ModPoly a, const ModPoly& b, u64 p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

inline ModPoly mul(const ModPoly& a, const ModPoly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  ModPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trim(r);
  return r;
}

inline void divmod(ModPoly a, const ModPoly& b, u64 p, ModPoly& q, ModPoly& r) {
  trim(a);
  const u64 inv = invmod(b.back(), p);
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
  while (!a.empty() && a.size() >= b.size()) {
    const std::size_t s = a.size() - b.size();
    const u64 c = mulmod(a.back(), inv, p);
    for (std::size_t i = 0; i < b.size(); ++i) a[s + i] = (a[s + i] + p - mulmod(c, b[i], p)) % p;
    q[s] = c;
    a.pop_back();
    trim(a);
  }
  trim(q);
  r = std::move(a);
}

inline ModPoly mod(const ModPoly& a, const ModPoly& b, u64 p) {
  ModPoly q, r;
  divmod(a, b, p, q, r);
  return r;
}

inline ModPoly quo(const ModPoly& a, const ModPoly& b, u64 p) {
  ModPoly q, r;
  divmod(a, b, p, q, r);
  return q;
}

inline ModPoly make_monic(ModPoly a, u64 p) {
  if (a.empty()) return a;
  const u64 inv = invmod(a.back(), p);
  for (auto& c : a) c = mulmod(c, inv, p);
  return a;
}

inline ModPoly gcd(ModPoly a, ModPoly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    ModPoly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a, p);
}

inline ModPoly derivative(const ModPoly& a, u64 p) {
  ModPoly r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(mulmod(a[i], i % p, p));
  trim(r);
  return r;
}

/// base^e mod m, with e a big integer.
inline ModPoly powmod(const ModPoly& base, const Integer& e, const ModPoly& m, u64 p) {
  ModPoly r{1};
  ModPoly b = mod(base, m, p);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = mod(mul(r, r, p), m, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = mod(mul(r, b, p), m, p);
  }
  return r;
}

/// Distinct-degree factorisation of a monic square-free polynomial: (product, degree) pairs.
inline std::vector<std::pair<ModPoly, int>> distinct_degree(ModPoly f, u64 p) {
  std::vector<std::pair<ModPoly, int>> out;
  const ModPoly x{0, 1};
  ModPoly h = x;
  for (int i = 1; static_cast<int>(f.size()) - 1 >= 2 * i; ++i) {
    h = powmod(h, Integer(static_cast<unsigned long>(p)), f, p);
    ModPoly g = gcd(f, sub(h, x, p), p);
    if (g.size() > 1) {
      out.emplace_back(g, i);
      f = quo(f, g, p);
      h = mod(h, f, p);
    }
  }
  if (f.size() > 1) out.emplace_back(f, static_cast<int>(f.size()) - 1);
  return out;
}

/// Equal-degree splitting (odd p) of a monic product of irreducibles of degree d.
inline void equal_degree(const ModPoly& f, int d, u64 p, std::mt19937_64& rng, std::vector<ModPoly>& out) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n == d) {
    out.push_back(f);
    return;
  }
  Integer e;
  mpz_ui_pow_ui(e.get_mpz_t(), p, static_cast<unsigned long>(d));
  e = (e - 1) / 2;
  for (;;) {
    ModPoly a(static_cast<std::size_t>(n));
    for (auto& c : a) c = rng() % p;
    trim(a);
    if (a.size() < 2) continue;
    ModPoly g = gcd(a, f, p);
    if (g.size() > 1 && g.size() < f.size()) {
      equal_degree(g, d, p, rng, out);
      equal_degree(quo(f, g, p), d, p, rng, out);
      return;
    }
    ModPoly b = sub(powmod(a, e, f, p), ModPoly{1}, p);
    g = gcd(b, f, p);
    if (g.size() > 1 && g.size() < f.size()) {
      equal_degree(g, d, p, rng, out);
      equal_degree(quo(f, g, p), d, p, rng, out);
      return;
    }
  }
}

inline std::vector<ModPoly> factor_mod_p(const ModPoly& f, u64 p, std::mt19937_64& rng) {
  std::vector<ModPoly> out;
  for (const auto& [g, d] : distinct_degree(f, p)) equal_degree(g, d, p, rng, out);
  return out;
}

// ---- integer polynomial helpers ------------------------------------------

inline Integer smod(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  if (2 * r > m) r -= m;
  return r;
}

inline ZPoly reduce(ZPoly a, const Integer& m) {
  for (auto& c : a) c = smod(c, m);
  trim(a);
  return a;
}

inline ZPoly zadd(ZPoly a, const ZPoly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  trim(a);
  return a;
}
inline ZPoly zsub(ZPoly a, const ZPoly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}
inline ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

/// Division by a monic divisor modulo m (m may be 0 for exact integer division).
inline void zdivmod_monic(ZPoly a, const ZPoly& b, const Integer& m, ZPoly& q, ZPoly& r) {
  trim(a);
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Integer(0));
  while (!a.empty() && a.size() >= b.size()) {
    const std::size_t s = a.size() - b.size();
    Integer c = a.back();
    for (std::size_t i = 0; i < b.size(); ++i) a[s + i] -= c * b[i];
    q[s] = c;
    a.pop_back();
    if (m != 0) a = reduce(a, m);
    trim(a);
  }
  if (m != 0) q = reduce(q, m);
  trim(q);
  r = std::move(a);
}

inline ModPoly to_mod(const ZPoly& a, u64 p) {
  ModPoly r;
  for (const auto& c : a) {
    Integer t = c % Integer(static_cast<unsigned long>(p));
    if (t < 0) t += static_cast<unsigned long>(p);
    r.push_back(t.get_ui());
  }
  trim(r);
  return r;
}

inline ZPoly from_mod(const ModPoly& a) {
  ZPoly r;
  for (auto c : a) r.emplace_back(static_cast<unsigned long>(c));
  return r;
}

/// One quadratic Hensel step: f = g h mod m, s g + t h = 1 mod m, h monic; result mod m^2.
inline void hensel_step(const ZPoly& f, ZPoly& g, ZPoly& h, ZPoly& s, ZPoly& t, const Integer& m2) {
  ZPoly e = reduce(zsub(f, zmul(g, h)), m2);
  ZPoly q, r;
  zdivmod_monic(reduce(zmul(s, e), m2), h, m2, q, r);
  ZPoly g1 = reduce(zadd(zadd(g, zmul(t, e)), zmul(q, g)), m2);
  ZPoly h1 = reduce(zadd(h, r), m2);
  ZPoly b = reduce(zsub(zadd(zmul(s, g1), zmul(t, h1)), ZPoly{Integer(1)}), m2);
  ZPoly c, d;
  zdivmod_monic(reduce(zmul(s, b), m2), h1, m2, c, d);
  ZPoly s1 = reduce(zsub(s, d), m2);
  ZPoly t1 = reduce(zsub(zsub(t, zmul(t, b)), zmul(c, g1)), m2);
  g = std::move(g1);
  h = std::move(h1);
  s = std::move(s1);
  t = std::move(t1);
}

/// Lifts a monic factorisation f = prod u_i mod p to modulus p^k (p^k >= bound).
inline std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<ModPoly>& factors, u64 p, const Integer& modulus_target,
                                      Integer& modulus) {
  std::vector<ZPoly> lifted;
  ZPoly rest = f;
  for (std::size_t i = 0; i + 1 < factors.size(); ++i) {
    // rest = g * h with h = factors[i], g = the product of the remaining factors
    ModPoly hm = factors[i];
    ModPoly gm{1};
    for (std::size_t j = i + 1; j < factors.size(); ++j) gm = mul(gm, factors[j], p);
    // s g + t h = 1 mod p via extended Euclid over F_p
    ModPoly r0 = gm, r1 = hm, s0{1}, s1{}, t0{}, t1{1};
    while (!r1.empty()) {
      ModPoly q, r;
      divmod(r0, r1, p, q, r);
      ModPoly s2 = sub(s0, mul(q, s1, p), p), t2 = sub(t0, mul(q, t1, p), p);
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s2);
      t0 = std::move(t1);
      t1 = std::move(t2);
    }
    const u64 inv = invmod(r0[0], p);
    for (auto& c : s0) c = mulmod(c, inv, p);
    for (auto& c : t0) c = mulmod(c, inv, p);
    ZPoly g = from_mod(gm), h = from_mod(hm), s = from_mod(s0), t = from_mod(t0);
    Integer m(static_cast<unsigned long>(p));
    while (m < modulus_target) {
      m *= m;
      hensel_step(reduce(rest, m), g, h, s, t, m);
    }
    modulus = m;
    lifted.push_back(h);
    rest = g;
  }
  lifted.push_back(reduce(rest, modulus));
  return lifted;
}

inline bool exact_divide_monic(const ZPoly& a, const ZPoly& b, ZPoly& q) {
  ZPoly r;
  zdivmod_monic(a, b, Integer(0), q, r);
  return r.empty();
}

inline ZPoly primitive_part(ZPoly a) {
  trim(a);
  if (a.empty()) return a;
  Integer g = 0;
  for (const auto& c : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  for (auto& c : a) c /= g;
  if (a.back() < 0)
    for (auto& c : a) c = -c;
  return a;
}

inline const std::vector<u64>& small_primes() {
  static const std::vector<u64> ps = [] {
    std::vector<u64> v;
    for (u64 n = 11; v.size() < 200; n += 2) {
      bool prime = true;
      for (u64 d = 3; d * d <= n; d += 2)
        if (n % d == 0) {
          prime = false;
          break;
        }
      if (prime) v.push_back(n);
    }
    return v;
  }();
  return ps;
}

/// Factors a monic square-free integer polynomial into monic irreducibles.
inline std::vector<ZPoly> factor_monic_squarefree(const ZPoly& f) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n <= 1) return {f};
  std::mt19937_64 rng(0x5eedULL);

  u64 best_p = 0;
  std::vector<ModPoly> best;
  int tried = 0;
  for (u64 p : small_primes()) {
    ModPoly fp = to_mod(f, p);
    if (static_cast<int>(fp.size()) - 1 != n) continue;
    if (gcd(fp, derivative(fp, p), p).size() > 1) continue;
    std::vector<ModPoly> fac = factor_mod_p(fp, p, rng);
    if (best_p == 0 || fac.size() < best.size()) {
      best_p = p;
      best = std::move(fac);
    }
    if (best.size() == 1 || ++tried >= 6) break;
  }
  if (best_p == 0) throw std::runtime_error("no good reduction prime found");
  if (best.size() == 1) return {f};

  // Landau-Mignotte: coefficients of a factor are at most 2^n |f|_2.
  Integer norm2 = 0;
  for (const auto& c : f) norm2 += c * c;
  Integer root;
  mpz_sqrt(root.get_mpz_t(), norm2.get_mpz_t());
  Integer bound = (root + 1) << static_cast<unsigned>(n);
  Integer target = 2 * bound + 1;

  Integer modulus;
  std::vector<ZPoly> lifted = hensel_lift(f, best, best_p, target, modulus);

  std::vector<ZPoly> result;
  ZPoly rest = f;
  std::vector<ZPoly> pool = lifted;
  std::size_t k = 1;
  while (2 * k <= pool.size()) {
    bool found = false;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      ZPoly g{Integer(1)};
      for (auto i : idx) g = reduce(zmul(g, pool[i]), modulus);
      ZPoly q;
      if (exact_divide_monic(rest, g, q)) {
        result.push_back(g);
        rest = q;
        std::vector<ZPoly> next;
        for (std::size_t i = 0; i < pool.size(); ++i)
          if (std::find(idx.begin(), idx.end(), i) == idx.end()) next.push_back(pool[i]);
        pool = std::move(next);
        found = true;
        break;
      }
      // next k-subset in lexicographic order
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == pool.size() - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
    if (!found) ++k;
  }
  if (rest.size() > 1) result.push_back(rest);
  return result;
}

}  // namespace zfactor

/// Irreducible factors over Q of a square-free rational polynomial, as primitive integer polynomials
/// with positive leading coefficient.
inline std::vector<ZPoly> factor_squarefree_over_Q(const std::vector<Rational>& poly) {
  std::vector<Rational> p = poly;
  while (!p.empty() && p.back() == 0) p.pop_back();
  if (p.size() < 2) return {};
  Integer den = 1;
  for (const auto& c : p) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  ZPoly f;
  for (const auto& c : p) f.push_back(Integer(c * den));
  f = zfactor::primitive_part(f);
  const std::size_t n = f.size() - 1;
  if (n == 1) return {f};
  // monic transform: F(x) = lc^(n-1) f(x / lc)
  const Integer lc = f.back();
  ZPoly mono(f.size());
  Integer pw = 1;
  for (std::size_t i = n; i-- > 0;) {
    mono[i] = f[i] * pw;
    pw *= lc;
  }
  mono[n] = 1;
  std::vector<ZPoly> out;
  for (const auto& g : zfactor::factor_monic_squarefree(mono)) {
    // back-substitute x -> lc x
    ZPoly h(g.size());
    Integer s = 1;
    for (std::size_t i = 0; i < g.size(); ++i) {
      h[i] = g[i] * s;
      s *= lc;
    }
    out.push_back(zfactor::primitive_part(h));
  }
  return out;
}

}  // namespace ndescent
