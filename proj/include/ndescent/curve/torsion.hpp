#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndescent/curve/function_field.hpp"

namespace ndescent {

class TorsionNotRational : public std::domain_error {
 public:
  TorsionNotRational(std::size_t found, std::size_t expected)
      : std::domain_error("n-torsion is not rational over the given field: found " + std::to_string(found) + " of " +
                          std::to_string(expected) + " points"),
        found_(found),
        expected_(expected) {}
  std::size_t found() const { return found_; }
  std::size_t expected() const { return expected_; }

 private:
  std::size_t found_, expected_;
};

using CurvePtr = std::shared_ptr<const Curve>;

/// The vertical line x - x_R through R and -R (1 when R = O).
inline FunctionFieldElement vertical_line(const CurvePtr& e, const Point& r) {
  if (r.inf) return FunctionFieldElement::constant(e, FieldElement::one(e->field));
  return FunctionFieldElement::x(e) - FunctionFieldElement::constant(e, r.x);
}

/// The line through P and Q (tangent if P = Q), vertical when P + Q = O.
inline FunctionFieldElement line_through(const CurvePtr& e, const Point& p, const Point& q) {
  if (p.inf) return vertical_line(e, q);
  if (q.inf) return vertical_line(e, p);
  if (point_add(*e, p, q).inf) return vertical_line(e, p);
  const FieldElement l = slope(*e, p, q);
  return FunctionFieldElement::y(e) - FunctionFieldElement::constant(e, p.y) -
         (FunctionFieldElement::x(e) - FunctionFieldElement::constant(e, p.x)) * l;
}

/// F_T with divisor n(T) - n(O), scaled to have leading Laurent coefficient 1 at O in t = x/y.
inline FunctionFieldElement miller_F(const CurvePtr& e, const Point& t, int n) {
  const FunctionFieldElement one = FunctionFieldElement::constant(e, FieldElement::one(e->field));
  if (t.inf) return one;
  int top = 0;
  while ((n >> (top + 1)) > 0) ++top;
  FunctionFieldElement f = one;
  Point r = t;
  for (int bit = top - 1; bit >= 0; --bit) {
    const Point r2 = point_add(*e, r, r);
    f = f * f * line_through(e, r, r) / vertical_line(e, r2);
    r = r2;
    if ((n >> bit) & 1) {
      const Point rt = point_add(*e, r, t);
      f = f * line_through(e, r, t) / vertical_line(e, rt);
      r = rt;
    }
  }
  if (!r.inf) throw std::invalid_argument("miller_F: point is not n-torsion");
  const LaurentSeries s = laurent_at_O(f, 1);
  if (s.valuation != -n) throw std::logic_error("miller_F: wrong pole order at O");
  return f * s.leading().inverse();
}

/// E[n](K) in the order i T1 + j T2 (index i n + j), with its Miller functions F_T.
class TorsionTable {
 public:
  const CurvePtr& curve_ptr() const { return e_; }
  const Curve& curve() const { return *e_; }
  int n() const { return n_; }
  std::size_t size() const { return pts_.size(); }
  const Point& point(std::size_t i) const { return pts_[i]; }
  const std::vector<Point>& points() const { return pts_; }
  /// Indices of T1 and T2.
  std::size_t basis1() const { return static_cast<std::size_t>(n_); }
  std::size_t basis2() const { return 1; }
  const FunctionFieldElement& F(std::size_t i) const { return F_[i]; }

  std::size_t index(int i, int j) const {
    const int m = n_;
    return static_cast<std::size_t>(((i % m) + m) % m * m + ((j % m) + m) % m);
  }
  int coord1(std::size_t idx) const { return static_cast<int>(idx) / n_; }
  int coord2(std::size_t idx) const { return static_cast<int>(idx) % n_; }
  std::size_t add(std::size_t a, std::size_t b) const { return index(coord1(a) + coord1(b), coord2(a) + coord2(b)); }
  std::size_t neg(std::size_t a) const { return index(-coord1(a), -coord2(a)); }
  std::size_t sub(std::size_t a, std::size_t b) const { return add(a, neg(b)); }

  std::optional<std::size_t> find(const Point& p) const {
    for (std::size_t i = 0; i < pts_.size(); ++i)
      if (pts_[i] == p) return i;
    return std::nullopt;
  }

  /// eps(S, T) = F_{S+T}(P) / (F_S(P) F_T(P - S)) at the first admissible point P of the table.
  FieldElement epsilon(std::size_t s, std::size_t t) const {
    if (s == 0 || t == 0) return FieldElement::one(e_->field);
    const std::size_t st = add(s, t);
    for (std::size_t p = 0; p < pts_.size(); ++p) {
      if (p == 0 || p == s || p == st) continue;
      return epsilon_at(s, t, pts_[p]);
    }
    throw std::logic_error("no admissible evaluation point in the torsion table");
  }

  /// The same quantity evaluated at an arbitrary point P outside {O, S, S+T}.
  FieldElement epsilon_at(std::size_t s, std::size_t t, const Point& p) const {
    if (s == 0 || t == 0) return FieldElement::one(e_->field);
    const std::size_t st = add(s, t);
    const Point ps = point_sub(*e_, p, pts_[s]);
    return F_[st](p) / (F_[s](p) * F_[t](ps));
  }

  /// e_n(S, T) = eps(S, T) / eps(T, S).
  FieldElement weil_pairing(std::size_t s, std::size_t t) const { return epsilon(s, t) / epsilon(t, s); }

  static TorsionTable build(const Curve& curve, int n);
  /// Table over explicitly given points in index order (used when reading files); verifies the group structure.
  static TorsionTable from_points(const Curve& curve, int n, std::vector<Point> pts);

 private:
  CurvePtr e_;
  int n_ = 0;
  std::vector<Point> pts_;
  std::vector<FunctionFieldElement> F_;
};

namespace detail {

inline int point_order(const Curve& e, const Point& p, int bound) {
  Point q = p;
  for (int k = 1; k <= bound; ++k) {
    if (q.inf) return k;
    q = point_add(e, q, p);
  }
  return 0;
}

inline int multiplicative_order(const FieldElement& z, int bound) {
  FieldElement w = z;
  for (int k = 1; k <= bound; ++k) {
    if (w.is_one()) return k;
    w *= z;
  }
  return 0;
}

}  // namespace detail

/// All n^2 points of E[n] over the curve's field; throws TorsionNotRational if fewer are rational.
inline std::vector<Point> rational_torsion_points(const Curve& e, int n) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("torsion: odd n >= 3 required");
  std::vector<Point> pts{Point::O()};
  const Poly psi = division_polynomial(e, n);
  for (const auto& r : roots_in_field(psi)) {
    const FieldElement fx = e.rhs(r.value);
    Poly ysq(e.field, {-fx, FieldElement::zero(e.field), FieldElement::one(e.field)});
    for (const auto& ry : roots_in_field(ysq)) pts.push_back(Point::affine(r.value, ry.value));
  }
  std::sort(pts.begin(), pts.end(), [](const Point& p, const Point& q) { return compare_points(p, q) < 0; });
  const std::size_t expected = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (pts.size() != expected) throw TorsionNotRational(pts.size(), expected);
  return pts;
}

inline TorsionTable TorsionTable::from_points(const Curve& curve, int n, std::vector<Point> pts) {
  TorsionTable t;
  t.e_ = std::make_shared<const Curve>(curve);
  t.n_ = n;
  const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (pts.size() != nn) throw std::invalid_argument("torsion table must list n^2 points");
  for (const auto& p : pts) require_on_curve(curve, p);
  if (!pts[0].inf) throw std::invalid_argument("torsion table must start with O");
  const Point t1 = pts[static_cast<std::size_t>(n)], t2 = pts[1];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Point expect = point_add(curve, point_mul(curve, i, t1), point_mul(curve, j, t2));
      if (expect != pts[t.index(i, j)]) throw std::invalid_argument("torsion table is not in i*T1 + j*T2 order");
    }
  for (const auto& p : pts) t.F_.push_back(miller_F(t.e_, p, n));
  t.pts_ = std::move(pts);
  return t;
}

inline TorsionTable TorsionTable::build(const Curve& curve, int n) {
  const std::vector<Point> sorted = rational_torsion_points(curve, n);
  const CurvePtr e = std::make_shared<const Curve>(curve);
  const int nn = n * n;
  // T1: first point of exact order n
  std::size_t i1 = 0;
  for (std::size_t k = 0; k < sorted.size() && i1 == 0; ++k)
    if (detail::point_order(curve, sorted[k], n) == n) i1 = k;
  if (i1 == 0) throw std::logic_error("no point of exact order n");
  // T2: first point whose pairing with T1 has exact order n; the pairing is eps(T1,T2)/eps(T2,T1)
  std::vector<FunctionFieldElement> f;
  for (const auto& p : sorted) f.push_back(miller_F(e, p, n));
  auto find_sorted = [&](const Point& p) {
    for (std::size_t k = 0; k < sorted.size(); ++k)
      if (sorted[k] == p) return k;
    throw std::logic_error("torsion point missing from enumeration");
  };
  auto eps = [&](std::size_t s, std::size_t t) {
    if (sorted[s].inf || sorted[t].inf) return FieldElement::one(curve.field);
    const Point st = point_add(curve, sorted[s], sorted[t]);
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      const Point& p = sorted[k];
      if (p.inf || p == sorted[s] || p == st) continue;
      const Point ps = point_sub(curve, p, sorted[s]);
      return f[find_sorted(st)](p) / (f[s](p) * f[t](ps));
    }
    throw std::logic_error("no admissible evaluation point");
  };
  std::size_t i2 = 0;
  for (std::size_t k = 1; k < sorted.size() && i2 == 0; ++k) {
    if (k == i1) continue;
    const FieldElement e12 = eps(i1, k) / eps(k, i1);
    if (detail::multiplicative_order(e12, n) == n) i2 = k;
  }
  if (i2 == 0) throw std::logic_error("no point pairs with T1 to exact order n");
  std::vector<Point> ordered(static_cast<std::size_t>(nn));
  TorsionTable t;
  t.e_ = e;
  t.n_ = n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      ordered[t.index(i, j)] = point_add(curve, point_mul(curve, i, sorted[i1]), point_mul(curve, j, sorted[i2]));
  for (const auto& p : ordered) t.F_.push_back(f[find_sorted(p)]);
  t.pts_ = std::move(ordered);
  return t;
}

inline TorsionTable torsion_table(const Curve& curve, int n) { return TorsionTable::build(curve, n); }

// ---------------------------------------------------------------------------
// r_{(T1,T2)}: divisor (T1) + (T2) - (O) - (T1 + T2).

/// lambda(T1, T2): the chord or tangent slope.
inline FieldElement lambda(const TorsionTable& tab, std::size_t i1, std::size_t i2) {
  return slope(tab.curve(), tab.point(i1), tab.point(i2));
}

inline FunctionFieldElement r_function(const TorsionTable& tab, std::size_t i1, std::size_t i2) {
  const CurvePtr& e = tab.curve_ptr();
  if (i1 == 0 || i2 == 0) return FunctionFieldElement::constant(e, FieldElement::one(e->field));
  const std::size_t s = tab.add(i1, i2);
  if (s == 0) return FunctionFieldElement::x(e) - FunctionFieldElement::constant(e, tab.point(i1).x);
  const Point& p3 = tab.point(s);
  return (FunctionFieldElement::y(e) + FunctionFieldElement::constant(e, p3.y)) /
             (FunctionFieldElement::x(e) - FunctionFieldElement::constant(e, p3.x)) -
         FunctionFieldElement::constant(e, lambda(tab, i1, i2));
}

/// Value of r_{(T1,T2)} at P by the three-case formula; PoleAtP where that formula is undefined.
inline FieldElement r_eval(const TorsionTable& tab, std::size_t i1, std::size_t i2, const Point& p) {
  const TowerPtr& k = tab.curve().field;
  if (i1 == 0 || i2 == 0) return FieldElement::one(k);
  if (p.inf) throw PoleAtP("r has a pole at O");
  const std::size_t s = tab.add(i1, i2);
  if (s == 0) return p.x - tab.point(i1).x;
  const Point& p3 = tab.point(s);
  if (p.x == p3.x) throw PoleAtP("r formula undefined at +-(T1 + T2)");
  return (p.y + p3.y) / (p.x - p3.x) - lambda(tab, i1, i2);
}

}  // namespace ndescent
