#pragma once

#include <climits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndescent/curve/curve.hpp"

namespace ndescent {

class PoleAtP : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// (u(x) + v(x) y) / w(x) in K(E), with gcd(u, v, w) = 1 and w monic; this form is unique.
class FunctionFieldElement {
 public:
  using CurvePtr = std::shared_ptr<const Curve>;

  FunctionFieldElement() = default;
  explicit FunctionFieldElement(const Curve& e) : FunctionFieldElement(std::make_shared<const Curve>(e)) {}
  explicit FunctionFieldElement(CurvePtr e)
      : e_(std::move(e)), u_(e_->field), v_(e_->field), w_(Poly::constant(FieldElement::one(e_->field))) {}
  FunctionFieldElement(const Curve& e, Poly u, Poly v, Poly w)
      : FunctionFieldElement(std::make_shared<const Curve>(e), std::move(u), std::move(v), std::move(w)) {}
  FunctionFieldElement(CurvePtr e, Poly u, Poly v, Poly w)
      : e_(std::move(e)), u_(std::move(u)), v_(std::move(v)), w_(std::move(w)) {
    if (w_.is_zero()) throw std::domain_error("function field element with zero denominator");
    normalize();
  }

  static FunctionFieldElement constant(const CurvePtr& e, const FieldElement& c) {
    return FunctionFieldElement(e, Poly::constant(c), Poly(e->field), one_poly(e));
  }
  static FunctionFieldElement x(const CurvePtr& e) { return FunctionFieldElement(e, Poly::x(e->field), Poly(e->field), one_poly(e)); }
  static FunctionFieldElement y(const CurvePtr& e) { return FunctionFieldElement(e, Poly(e->field), one_poly(e), one_poly(e)); }
  static FunctionFieldElement from_poly(const CurvePtr& e, const Poly& u, const Poly& v = Poly()) {
    return FunctionFieldElement(e, u, v.is_zero() ? Poly(e->field) : v, one_poly(e));
  }

  const CurvePtr& curve_ptr() const { return e_; }
  FunctionFieldElement constant_like(const FieldElement& c) const { return constant(e_, c); }

  const Curve& curve() const { return *e_; }
  const Poly& u() const { return u_; }
  const Poly& v() const { return v_; }
  const Poly& w() const { return w_; }
  bool is_zero() const { return u_.is_zero() && v_.is_zero(); }
  /// True when the denominator is 1.
  bool is_polynomial() const { return w_.degree() == 0; }

  FunctionFieldElement operator-() const { return FunctionFieldElement(e_, -u_, -v_, w_); }

  friend FunctionFieldElement operator+(const FunctionFieldElement& a, const FunctionFieldElement& b) {
    if (a.w_ == b.w_) return FunctionFieldElement(a.e_, a.u_ + b.u_, a.v_ + b.v_, a.w_);
    return FunctionFieldElement(a.e_, a.u_ * b.w_ + b.u_ * a.w_, a.v_ * b.w_ + b.v_ * a.w_, a.w_ * b.w_);
  }
  friend FunctionFieldElement operator-(const FunctionFieldElement& a, const FunctionFieldElement& b) { return a + (-b); }

  friend FunctionFieldElement operator*(const FunctionFieldElement& a, const FunctionFieldElement& b) {
    const Poly f = a.e_->rhs();
    return FunctionFieldElement(a.e_, a.u_ * b.u_ + a.v_ * b.v_ * f, a.u_ * b.v_ + a.v_ * b.u_, a.w_ * b.w_);
  }
  friend FunctionFieldElement operator*(const FunctionFieldElement& a, const FieldElement& s) {
    return FunctionFieldElement(a.e_, a.u_ * s, a.v_ * s, a.w_);
  }

  /// Numerator of the norm to K(x): u^2 - v^2 f.
  Poly norm_numerator() const { return u_ * u_ - v_ * v_ * e_->rhs(); }

  FunctionFieldElement inverse() const {
    if (is_zero()) throw std::domain_error("inverse of the zero function");
    // w / (u + v y) = w (u - v y) / (u^2 - v^2 f)
    return FunctionFieldElement(e_, w_ * u_, -(w_ * v_), norm_numerator());
  }
  friend FunctionFieldElement operator/(const FunctionFieldElement& a, const FunctionFieldElement& b) {
    return a * b.inverse();
  }

  FunctionFieldElement pow(unsigned k) const {
    FunctionFieldElement r = constant(e_, FieldElement::one(e_->field)), b = *this;
    while (k) {
      if (k & 1u) r = r * b;
      k >>= 1u;
      if (k) b = b * b;
    }
    return r;
  }

  friend bool operator==(const FunctionFieldElement& a, const FunctionFieldElement& b) {
    return a.u_ == b.u_ && a.v_ == b.v_ && a.w_ == b.w_;
  }
  friend bool operator!=(const FunctionFieldElement& a, const FunctionFieldElement& b) { return !(a == b); }

  /// Value at an affine point (possibly over an extension of K).
  FieldElement operator()(const Point& p) const {
    if (p.inf) throw PoleAtP("evaluation at O; use the Laurent expansion");
    const FieldElement wx = w_(p.x);
    if (!wx.is_zero()) return (u_(p.x) + v_(p.x) * p.y) / wx;
    // (u + v y) / w = (u^2 - v^2 f) / (w (u - v y)); cancel the factors x - x_P shared by w and the norm
    const Poly lin(p.x.field(), {-p.x, FieldElement::one(p.x.field())});
    Poly num = norm_numerator(), den = w_;
    while (!num.is_zero() && num(p.x).is_zero() && den(p.x).is_zero()) {
      num = num / lin;
      den = den / lin;
    }
    const FieldElement d = den(p.x) * (u_(p.x) - v_(p.x) * p.y);
    if (d.is_zero()) throw PoleAtP("function has a pole at " + ndescent::to_string(p));
    return num(p.x) / d;
  }

  /// tau_S^* f : P -> f(P + S), for S on the curve over K.
  FunctionFieldElement translate(const Point& s) const {
    if (s.inf) return *this;
    const CurvePtr& e = e_;
    FunctionFieldElement X = x(e), Y = y(e);
    FunctionFieldElement xs = constant(e, s.x), ys = constant(e, s.y);
    FunctionFieldElement lam = (Y - ys) / (X - xs);
    FunctionFieldElement X3 = lam * lam - X - xs;
    FunctionFieldElement Y3 = lam * (X - X3) - Y;
    return substitute(X3, Y3);
  }

  /// f(X, Y) for function field elements X, Y (which must themselves satisfy the curve equation).
  FunctionFieldElement substitute(const FunctionFieldElement& X, const FunctionFieldElement& Y) const {
    auto horner = [&](const Poly& p) {
      FunctionFieldElement acc(e_);
      for (std::size_t i = p.size(); i-- > 0;) acc = acc * X + constant(e_, p.coeff(i));
      return acc;
    };
    return (horner(u_) + horner(v_) * Y) / horner(w_);
  }

  std::string to_string() const {
    return "((" + u_.to_string() + ") + (" + v_.to_string() + ")*y) / (" + w_.to_string() + ")";
  }

 private:
  static Poly one_poly(const CurvePtr& e) { return Poly::constant(FieldElement::one(e->field)); }

  void normalize() {
    const TowerPtr k = e_->field;
    u_ = u_.embed(common_tower(k, u_.field()));
    if (u_.is_zero() && v_.is_zero()) {
      w_ = Poly::constant(FieldElement::one(w_.field()));
      return;
    }
    Poly g = gcd(gcd(u_, v_), w_);
    if (g.degree() > 0) {
      u_ = u_ / g;
      v_ = v_ / g;
      w_ = w_ / g;
    }
    const FieldElement inv = w_.lc().inverse();
    if (!w_.lc().is_one()) {
      u_ *= inv;
      v_ *= inv;
      w_ *= inv;
    }
  }

  CurvePtr e_;
  Poly u_, v_, w_;
};

// ---------------------------------------------------------------------------
// Laurent series at O in the local parameter t = x / y.

/// sum_{k >= valuation} c_k t^k, with coefficients known for k < valuation + coeffs.size().
/// The leading coefficient is nonzero unless the series is zero to the known precision,
/// in which case coeffs is empty and `valuation` is the precision bound.
struct LaurentSeries {
  int valuation = 0;
  std::vector<FieldElement> coeffs;

  bool is_zero() const { return coeffs.empty(); }
  int absolute_precision() const { return valuation + static_cast<int>(coeffs.size()); }
  FieldElement coefficient(int k) const {
    if (k < valuation) return FieldElement();
    if (k >= absolute_precision()) throw std::out_of_range("Laurent coefficient beyond known precision");
    return coeffs[static_cast<std::size_t>(k - valuation)];
  }
  const FieldElement& leading() const { return coeffs.front(); }
};

namespace laurent {

// Valuation used for an exact zero.
inline constexpr int kExactZero = INT_MAX / 4;

inline LaurentSeries normalized(LaurentSeries s) {
  std::size_t lead = 0;
  while (lead < s.coeffs.size() && s.coeffs[lead].is_zero()) ++lead;
  if (lead == s.coeffs.size()) {
    s.valuation = s.absolute_precision();
    s.coeffs.clear();
    return s;
  }
  s.valuation += static_cast<int>(lead);
  s.coeffs.erase(s.coeffs.begin(), s.coeffs.begin() + static_cast<std::ptrdiff_t>(lead));
  return s;
}

inline LaurentSeries constant(const FieldElement& c, int prec) {
  LaurentSeries s;
  if (c.is_zero()) {
    s.valuation = kExactZero;
    return s;
  }
  s.coeffs.assign(static_cast<std::size_t>(prec), FieldElement::zero(c.field()));
  s.coeffs[0] = c;
  return s;
}

inline LaurentSeries add(const LaurentSeries& a, const LaurentSeries& b) {
  const int prec = std::min(a.absolute_precision(), b.absolute_precision());
  LaurentSeries r;
  r.valuation = std::min(a.valuation, b.valuation);
  if (prec <= r.valuation) {
    r.valuation = prec;
    return r;
  }
  r.coeffs.assign(static_cast<std::size_t>(prec - r.valuation), FieldElement());
  for (int k = r.valuation; k < prec; ++k) {
    FieldElement c;
    if (k >= a.valuation && !a.is_zero()) c += a.coeffs[static_cast<std::size_t>(k - a.valuation)];
    if (k >= b.valuation && !b.is_zero()) c += b.coeffs[static_cast<std::size_t>(k - b.valuation)];
    r.coeffs[static_cast<std::size_t>(k - r.valuation)] = c;
  }
  return normalized(r);
}

inline LaurentSeries neg(LaurentSeries a) {
  for (auto& c : a.coeffs) c = -c;
  return a;
}

inline LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b) {
  LaurentSeries r;
  if (a.is_zero() || b.is_zero()) {
    r.valuation = std::min(a.valuation + b.valuation, kExactZero);
    return r;
  }
  const std::size_t len = std::min(a.coeffs.size(), b.coeffs.size());
  r.valuation = a.valuation + b.valuation;
  r.coeffs.assign(len, FieldElement());
  for (std::size_t i = 0; i < len; ++i) {
    if (a.coeffs[i].is_zero()) continue;
    for (std::size_t j = 0; i + j < len; ++j) r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  }
  return r;
}

inline LaurentSeries inverse(const LaurentSeries& a) {
  if (a.is_zero()) throw std::domain_error("Laurent series is zero to the working precision");
  const std::size_t len = a.coeffs.size();
  LaurentSeries r;
  r.valuation = -a.valuation;
  r.coeffs.assign(len, FieldElement());
  const FieldElement inv0 = a.coeffs[0].inverse();
  r.coeffs[0] = inv0;
  for (std::size_t k = 1; k < len; ++k) {
    FieldElement acc;
    for (std::size_t i = 1; i <= k; ++i) acc += a.coeffs[i] * r.coeffs[k - i];
    r.coeffs[k] = -acc * inv0;
  }
  return r;
}

/// u = 1/y as a power series in t, from u = t^3 + a t u^2 + b u^3; valid to absolute precision `prec`.
inline std::vector<FieldElement> inverse_y(const Curve& e, int prec) {
  const std::size_t n = static_cast<std::size_t>(prec);
  std::vector<FieldElement> u(n, FieldElement::zero(e.field));
  if (n > 3) u[3] = FieldElement::one(e.field);
  auto mult = [&](const std::vector<FieldElement>& p, const std::vector<FieldElement>& q) {
    std::vector<FieldElement> r(n, FieldElement::zero(e.field));
    for (std::size_t i = 0; i < n; ++i) {
      if (p[i].is_zero()) continue;
      for (std::size_t j = 0; i + j < n; ++j)
        if (!q[j].is_zero()) r[i + j] += p[i] * q[j];
    }
    return r;
  };
  // each pass fixes at least one more coefficient; the error term starts at t^7
  for (std::size_t pass = 0; pass < n; ++pass) {
    std::vector<FieldElement> u2 = mult(u, u);
    std::vector<FieldElement> u3 = mult(u2, u);
    std::vector<FieldElement> next(n, FieldElement::zero(e.field));
    if (n > 3) next[3] = FieldElement::one(e.field);
    for (std::size_t k = 0; k + 1 < n; ++k) next[k + 1] += e.a * u2[k];
    for (std::size_t k = 0; k < n; ++k) next[k] += e.b * u3[k];
    if (next == u) break;
    u = std::move(next);
  }
  return u;
}

/// Series of x and y at O to relative precision `prec`.
inline std::pair<LaurentSeries, LaurentSeries> coordinates(const Curve& e, int prec) {
  LaurentSeries u;
  u.valuation = 0;
  u.coeffs = inverse_y(e, prec + 3);
  u = normalized(u);
  LaurentSeries y = inverse(u);
  LaurentSeries x = y;
  x.valuation += 1;
  return {x, y};
}

inline LaurentSeries eval_poly(const Poly& p, const LaurentSeries& x, int prec) {
  LaurentSeries acc = constant(FieldElement(), prec);
  for (std::size_t i = p.size(); i-- > 0;) acc = add(mul(acc, x), constant(p.coeff(i), prec));
  return acc;
}

}  // namespace laurent

/// Expansion of f at O in t = x / y, with at least `prec` known coefficients from the leading term.
inline LaurentSeries laurent_at_O(const FunctionFieldElement& f, int prec) {
  if (prec < 1) throw std::invalid_argument("precision must be positive");
  if (f.is_zero()) {
    LaurentSeries z;
    z.valuation = laurent::kExactZero;
    return z;
  }
  for (int work = prec + 8;; work *= 2) {
    auto [x, y] = laurent::coordinates(f.curve(), work);
    LaurentSeries num = laurent::add(laurent::eval_poly(f.u(), x, work), laurent::mul(laurent::eval_poly(f.v(), x, work), y));
    LaurentSeries den = laurent::eval_poly(f.w(), x, work);
    if (num.is_zero() || static_cast<int>(num.coeffs.size()) < prec) {
      if (work > 4096) throw std::runtime_error("Laurent expansion: precision loss");
      continue;
    }
    LaurentSeries r = laurent::mul(num, laurent::inverse(den));
    if (static_cast<int>(r.coeffs.size()) < prec) continue;
    r.coeffs.resize(static_cast<std::size_t>(prec));
    return r;
  }
}

}  // namespace ndescent
