#pragma once

#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndescent/exact/factor.hpp"

namespace ndescent {

class OffCurve : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class VerticalLine : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Short Weierstrass curve y^2 = x^3 + a x + b over a tower.
struct Curve {
  TowerPtr field;
  FieldElement a, b;

  Curve() = default;
  Curve(TowerPtr k, FieldElement a_, FieldElement b_) : field(std::move(k)), a(a_.embed(field)), b(b_.embed(field)) {
    FieldElement disc = FieldElement::integer(field, 4) * a * a * a + FieldElement::integer(field, 27) * b * b;
    if (disc.is_zero()) throw std::invalid_argument("singular curve: 4a^3 + 27b^2 = 0");
  }

  /// x^3 + a x + b.
  Poly rhs() const { return Poly(field, {b, a, FieldElement::zero(field), FieldElement::one(field)}); }
  FieldElement rhs(const FieldElement& x) const { return (x * x + a) * x + b; }
};

struct Point {
  bool inf = true;
  FieldElement x, y;

  static Point O() { return {}; }
  static Point affine(FieldElement x_, FieldElement y_) {
    Point p;
    p.inf = false;
    auto [cx, cy] = coerce(x_, y_);
    p.x = std::move(cx);
    p.y = std::move(cy);
    return p;
  }
  bool is_O() const { return inf; }
  TowerPtr field(const TowerPtr& fallback) const { return inf ? fallback : x.field(); }
};

inline bool operator==(const Point& p, const Point& q) {
  if (p.inf || q.inf) return p.inf == q.inf;
  return p.x == q.x && p.y == q.y;
}
inline bool operator!=(const Point& p, const Point& q) { return !(p == q); }

/// Deterministic order: O first, then by x coordinates, then y.
inline int compare_points(const Point& p, const Point& q) {
  if (p.inf || q.inf) return p.inf == q.inf ? 0 : (p.inf ? -1 : 1);
  int c = p.x.compare(q.x);
  return c != 0 ? c : p.y.compare(q.y);
}

inline std::string to_string(const Point& p) {
  if (p.inf) return "O";
  return "(" + p.x.to_string() + ", " + p.y.to_string() + ")";
}

inline bool on_curve(const Curve& e, const Point& p) { return p.inf || p.y * p.y == e.rhs(p.x); }

inline void require_on_curve(const Curve& e, const Point& p) {
  if (!on_curve(e, p)) throw OffCurve("point " + to_string(p) + " is not on the curve");
}

inline Point point_neg(const Curve&, const Point& p) {
  if (p.inf) return p;
  return Point::affine(p.x, -p.y);
}

/// Chord slope through P and Q, or tangent slope when P = Q.
inline FieldElement slope(const Curve& e, const Point& p, const Point& q) {
  if (p.inf || q.inf) throw VerticalLine("slope undefined at O");
  if (p.x == q.x) {
    if (p.y != q.y || p.y.is_zero()) throw VerticalLine("P + Q = O: the line is vertical");
    return (FieldElement::integer(p.x.field(), 3) * p.x * p.x + e.a) / (p.y + p.y);
  }
  return (q.y - p.y) / (q.x - p.x);
}

inline Point point_add(const Curve& e, const Point& p, const Point& q) {
  if (p.inf) return q;
  if (q.inf) return p;
  if (p.x == q.x && (p.y != q.y || p.y.is_zero())) return Point::O();
  FieldElement l = slope(e, p, q);
  FieldElement x3 = l * l - p.x - q.x;
  FieldElement y3 = l * (p.x - x3) - p.y;
  return Point::affine(x3, y3);
}

inline Point point_sub(const Curve& e, const Point& p, const Point& q) { return point_add(e, p, point_neg(e, q)); }

inline Point point_mul(const Curve& e, long k, const Point& p) {
  if (k < 0) return point_mul(e, -k, point_neg(e, p));
  Point r = Point::O(), base = p;
  while (k > 0) {
    if (k & 1) r = point_add(e, r, base);
    k >>= 1;
    if (k) base = point_add(e, base, base);
  }
  return r;
}

/// phi_k in K[x] with psi_k = phi_k * y^[k even], for any k >= 0.
inline Poly division_polynomial_phi(const Curve& e, int n) {
  if (n < 0) throw std::invalid_argument("division polynomial: index must be nonnegative");
  const TowerPtr& k = e.field;
  auto c = [&](long v) { return FieldElement::integer(k, v); };
  const FieldElement& a = e.a;
  const FieldElement& b = e.b;
  std::map<int, Poly> phi;
  phi[0] = Poly(k);
  phi[1] = Poly::constant(c(1));
  phi[2] = Poly::constant(c(2));
  phi[3] = Poly(k, {-a * a, c(12) * b, c(6) * a, FieldElement::zero(k), c(3)});
  phi[4] = Poly(k, {c(-8) * b * b - a * a * a, c(-4) * a * b, c(-5) * a * a, c(20) * b, c(5) * a, FieldElement::zero(k),
                    c(1)}) *
           c(4);
  const Poly f = e.rhs();
  const Poly f2 = f * f;
  const FieldElement half = c(2).inverse();
  std::function<const Poly&(int)> get = [&](int m) -> const Poly& {
    auto it = phi.find(m);
    if (it != phi.end()) return it->second;
    Poly r;
    if (m % 2 == 1) {
      const int h = (m - 1) / 2;
      Poly t1 = get(h + 2) * pow(get(h), 3);
      Poly t2 = get(h - 1) * pow(get(h + 1), 3);
      if (h % 2 == 0) t1 = t1 * f2;
      else t2 = t2 * f2;
      r = t1 - t2;
    } else {
      const int h = m / 2;
      r = get(h) * (get(h + 2) * pow(get(h - 1), 2) - get(h - 2) * pow(get(h + 1), 2)) * half;
    }
    return phi.emplace(m, std::move(r)).first->second;
  };
  return get(n);
}

/// psi_n for odd n, a polynomial in x of degree (n^2 - 1)/2 with leading coefficient n.
inline Poly division_polynomial(const Curve& e, int n) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("division polynomial: odd n >= 1 required");
  return division_polynomial_phi(e, n);
}

// ---------------------------------------------------------------------------
// Sampling points over K or a quadratic extension K(sqrt(f(x0))).

/// Points whose x coordinate is excluded are skipped; the seed fixes the sequence.
class PointSampler {
 public:
  PointSampler(const Curve& e, std::uint64_t seed) : e_(e), rng_(seed) {}

  void exclude_x(const FieldElement& x) { excluded_.push_back(x); }

  /// Next sampled point with a small rational x0. Its field is K when f(x0) is a square in K,
  /// otherwise a fresh quadratic extension of K.
  Point next() {
    for (;;) {
      const long num = static_cast<long>(rng_() % 61) - 30;
      const long den = static_cast<long>(rng_() % 5) + 1;
      FieldElement x0 = FieldElement::rational(e_.field, Rational(num, den));
      bool bad = false;
      for (const auto& x : excluded_) bad = bad || x == x0;
      for (const auto& x : used_) bad = bad || x == x0;
      if (bad) continue;
      FieldElement fx = e_.rhs(x0);
      if (fx.is_zero()) continue;
      used_.push_back(x0);
      Poly m(e_.field, {-fx, FieldElement::zero(e_.field), FieldElement::one(e_.field)});
      try {
        TowerPtr l = tower_extend(e_.field, m, "s" + std::to_string(++counter_));
        return Point::affine(x0.embed(l), FieldElement::generator(l));
      } catch (const ReducibleExtension& r) {
        return Point::affine(x0, -r.factor().coeff(0));
      }
    }
  }

  /// Next sampled point that is forced to lie in a proper quadratic extension.
  Point next_in_extension() {
    for (;;) {
      Point p = next();
      if (p.x.field().get() != e_.field.get()) return p;
    }
  }

 private:
  Curve e_;
  std::mt19937_64 rng_;
  std::vector<FieldElement> excluded_, used_;
  int counter_ = 0;
};

}  // namespace ndescent
