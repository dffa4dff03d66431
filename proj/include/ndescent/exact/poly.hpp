#pragma once

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ndescent/exact/field.hpp"

namespace ndescent {

/// Dense univariate polynomial over a field tower, constant term first, no trailing zeros.
class Poly {
 public:
  Poly() : field_(Tower::rationals()) {}
  explicit Poly(TowerPtr field) : field_(std::move(field)) {}
  Poly(TowerPtr field, std::vector<FieldElement> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) {
    for (auto& x : c_) {
      if (x.field().get() != field_.get()) {
        if (!field_->contains(*x.field())) field_ = common_tower(field_, x.field());
      }
    }
    for (auto& x : c_) x = x.embed(field_);
    trim();
  }
  /// From rational coefficients, constant term first.
  static Poly from_rationals(const TowerPtr& field, const std::vector<Rational>& coeffs) {
    std::vector<FieldElement> c;
    for (const auto& q : coeffs) c.push_back(FieldElement::rational(field, q));
    return Poly(field, std::move(c));
  }
  static Poly constant(const FieldElement& c) { return Poly(c.field(), {c}); }
  static Poly monomial(const FieldElement& c, std::size_t k) {
    std::vector<FieldElement> v(k + 1, FieldElement::zero(c.field()));
    v[k] = c;
    return Poly(c.field(), std::move(v));
  }
  static Poly x(const TowerPtr& field) { return monomial(FieldElement::one(field), 1); }

  const TowerPtr& field() const { return field_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::size_t size() const { return c_.size(); }
  const std::vector<FieldElement>& coeffs() const { return c_; }
  FieldElement coeff(std::size_t i) const { return i < c_.size() ? c_[i] : FieldElement::zero(field_); }
  const FieldElement& lc() const { return c_.back(); }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

  Poly embed(const TowerPtr& target) const {
    Poly r(target);
    r.c_.reserve(c_.size());
    for (const auto& x : c_) r.c_.push_back(x.embed(target));
    return r;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  Poly& operator+=(const Poly& o) {
    unify(o.field_);
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), FieldElement::zero(field_));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    unify(o.field_);
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), FieldElement::zero(field_));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  Poly& operator*=(const FieldElement& s) {
    unify(s.field());
    if (s.is_zero()) {
      c_.clear();
      return *this;
    }
    for (auto& x : c_) x *= s;
    return *this;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    TowerPtr f = common_tower(a.field_, b.field_);
    if (a.is_zero() || b.is_zero()) return Poly(f);
    std::vector<FieldElement> r(a.c_.size() + b.c_.size() - 1, FieldElement::zero(f));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(f, std::move(r));
  }

  /// Quotient and remainder; the divisor must be nonzero.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    TowerPtr f = common_tower(a.field_, b.field_);
    Poly r = a.embed(f);
    Poly d = b.embed(f);
    Poly q(f);
    if (r.degree() < d.degree()) return {q, r};
    q.c_.assign(static_cast<std::size_t>(r.degree() - d.degree() + 1), FieldElement::zero(f));
    const FieldElement inv = d.lc().inverse();
    const bool monic = d.lc().is_one();
    while (!r.is_zero() && r.degree() >= d.degree()) {
      const std::size_t shift = static_cast<std::size_t>(r.degree() - d.degree());
      FieldElement c = monic ? r.lc() : r.lc() * inv;
      for (std::size_t i = 0; i + 1 < d.c_.size(); ++i) {
        if (!d.c_[i].is_zero()) r.c_[shift + i] -= c * d.c_[i];
      }
      r.c_.pop_back();
      r.trim();
      q.c_[shift] = std::move(c);
    }
    q.trim();
    return {q, r};
  }

  Poly monic() const {
    if (is_zero() || is_monic()) return *this;
    Poly r = *this;
    r *= lc().inverse();
    return r;
  }

  Poly derivative() const {
    Poly r(field_);
    for (std::size_t i = 1; i < c_.size(); ++i)
      r.c_.push_back(c_[i] * FieldElement::integer(field_, static_cast<long>(i)));
    r.trim();
    return r;
  }

  /// Horner evaluation; the point may live in an extension of the coefficient field.
  FieldElement operator()(const FieldElement& at) const {
    TowerPtr f = common_tower(field_, at.field());
    FieldElement acc = FieldElement::zero(f);
    for (std::size_t i = c_.size(); i-- > 0;) {
      acc *= at;
      acc += c_[i];
    }
    return acc;
  }

  /// p(q(x)).
  Poly compose(const Poly& q) const {
    Poly acc(common_tower(field_, q.field_));
    for (std::size_t i = c_.size(); i-- > 0;) {
      acc = acc * q;
      acc += Poly::constant(c_[i]);
    }
    return acc;
  }

  /// p(x + s).
  Poly shift(const FieldElement& s) const {
    TowerPtr f = common_tower(field_, s.field());
    return compose(Poly(f, {s, FieldElement::one(f)}));
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  std::string to_string(const std::string& var = "x") const {
    if (c_.empty()) return "0";
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + c_[i].to_string() + ")";
      if (i > 0) s += "*" + var + (i > 1 ? "^" + std::to_string(i) : "");
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  void unify(const TowerPtr& other) {
    if (other.get() == field_.get() || field_->contains(*other)) return;
    *this = embed(common_tower(field_, other));
  }

  TowerPtr field_;
  std::vector<FieldElement> c_;
};

inline Poly operator+(Poly a, const Poly& b) { return a += b; }
inline Poly operator-(Poly a, const Poly& b) { return a -= b; }
inline Poly operator*(Poly a, const FieldElement& s) { return a *= s; }
inline Poly operator*(const FieldElement& s, Poly a) { return a *= s; }

inline Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
inline Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

inline Poly pow(const Poly& p, unsigned e) {
  Poly r = Poly::constant(FieldElement::one(p.field()));
  Poly b = p;
  while (e) {
    if (e & 1u) r = r * b;
    e >>= 1u;
    if (e) b = b * b;
  }
  return r;
}

/// Monic greatest common divisor (zero if both inputs are zero).
inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Returns (g, s, t) with s*a + t*b = g and g monic.
inline std::tuple<Poly, Poly, Poly> xgcd(const Poly& a, const Poly& b) {
  TowerPtr f = common_tower(a.field(), b.field());
  Poly r0 = a.embed(f), r1 = b.embed(f);
  Poly s0 = Poly::constant(FieldElement::one(f)), s1(f);
  Poly t0(f), t1 = Poly::constant(FieldElement::one(f));
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    Poly s2 = s0 - q * s1;
    Poly t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  FieldElement inv = r0.lc().inverse();
  return {r0 * inv, s0 * inv, t0 * inv};
}

/// Square-free decomposition (Yun): returns (f_i, i) with p = lc * prod f_i^i, f_i monic square-free.
inline std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& p) {
  std::vector<std::pair<Poly, int>> out;
  if (p.degree() < 1) return out;
  Poly f = p.monic();
  Poly d = f.derivative();
  Poly a = gcd(f, d);
  Poly b = f / a;
  Poly c = d / a;
  Poly e = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    Poly g = gcd(b, e);
    if (g.degree() > 0) out.emplace_back(g, i);
    b = b / g;
    c = e / g;
    e = c - b.derivative();
    ++i;
  }
  return out;
}

inline Poly squarefree_part(const Poly& p) {
  if (p.degree() < 1) return p.monic();
  return (p / gcd(p, p.derivative())).monic();
}

}  // namespace ndescent
