#pragma once

// Exact arithmetic in towers of monogenic number fields
//   Q = F_0 ⊂ F_1 = F_0[a_1]/(m_1) ⊂ ... ⊂ F_k = F_{k-1}[a_k]/(m_k).
// An element of F_k is stored as its flat coordinate vector over Q in the
// monomial basis a_1^{e_1} ... a_k^{e_k}; the top generator is the outermost
// index, so an element of F_k is d_k consecutive blocks of F_{k-1} coordinates.
// Elements of a prefix tower embed by zero padding.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ndescent/exact/rational.hpp"

namespace ndescent {

class Tower;
using TowerPtr = std::shared_ptr<const Tower>;

/// Raised when two elements live in towers that do not share a common extension.
class FieldMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class FieldElement {
 public:
  /// Zero of Q. Q is a prefix of every tower, so this coerces anywhere.
  FieldElement();

  static FieldElement zero(const TowerPtr& field);
  static FieldElement one(const TowerPtr& field);
  static FieldElement rational(const TowerPtr& field, const Rational& q);
  static FieldElement integer(const TowerPtr& field, long v) { return rational(field, Rational(v)); }
  static FieldElement from_coords(const TowerPtr& field, std::vector<Rational> coords);
  /// The top-level generator of `field` (the rational 0 for Q itself is not allowed).
  static FieldElement generator(const TowerPtr& field);

  const TowerPtr& field() const { return field_; }
  const std::vector<Rational>& coords() const { return c_; }

  bool is_zero() const;
  bool is_one() const;
  /// True when every coordinate beyond the constant term vanishes.
  bool is_rational() const;
  Rational rational_value() const { return c_.front(); }

  /// Image of this element in an extension `target` of its own field.
  FieldElement embed(const TowerPtr& target) const;
  /// Restriction to the prefix tower `sub`; fails when the element is not in `sub`.
  bool lies_in(const Tower& sub) const;
  FieldElement restrict_to(const TowerPtr& sub) const;

  /// Coefficient i (an element of the base level) in the top-level power basis.
  FieldElement coefficient(std::size_t i) const;

  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o);

  FieldElement inverse() const;
  FieldElement pow(long e) const;

  /// Lexicographic order on coordinate vectors after coercion; used as a sort key.
  int compare(const FieldElement& o) const;

  std::string to_string() const;

 private:
  FieldElement(TowerPtr f, std::vector<Rational> c) : field_(std::move(f)), c_(std::move(c)) {}
  friend class Tower;
  friend std::pair<FieldElement, FieldElement> coerce(const FieldElement&, const FieldElement&);

  TowerPtr field_;
  std::vector<Rational> c_;
};

class Tower {
 public:
  static const TowerPtr& rationals();

  /// Appends a level without certifying irreducibility. Prefer tower_extend().
  static TowerPtr extend_unchecked(const TowerPtr& base, const std::vector<FieldElement>& monic_minpoly,
                                   std::string generator_name);

  int level() const { return level_; }
  std::size_t level_degree() const { return d_; }
  std::size_t degree() const { return total_; }
  const TowerPtr& base() const { return base_; }
  const std::string& generator_name() const { return name_; }
  /// Minimal polynomial of the top generator over base(), constant term first, monic.
  const std::vector<FieldElement>& minpoly() const { return minpoly_; }

  /// True if `sub` is this tower or one of its prefixes.
  bool contains(const Tower& sub) const;
  /// The prefix tower at the given level.
  TowerPtr at_level(int lvl) const;

  std::string describe() const;

  // Internal arithmetic kernel on raw coordinate arrays of length degree().
  void mul_raw(const Rational* a, const Rational* b, Rational* out) const;

 private:
  Tower() = default;

  TowerPtr base_;
  int level_ = 0;
  std::size_t d_ = 1;
  std::size_t total_ = 1;
  std::string name_;
  std::vector<FieldElement> minpoly_;
  std::vector<Rational> minpoly_flat_;  // (d_+1) blocks of base coordinates
  std::vector<bool> minpoly_nonzero_;
  std::weak_ptr<const Tower> weak_self_;

  friend class FieldElement;
};

// ---------------------------------------------------------------------------

inline const TowerPtr& Tower::rationals() {
  static const TowerPtr q = [] {
    auto t = std::shared_ptr<Tower>(new Tower());
    t->name_ = "Q";
    t->weak_self_ = t;
    return TowerPtr(t);
  }();
  return q;
}

namespace detail {

inline bool block_is_zero(const Rational* p, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (sgn(p[i]) != 0) return false;
  return true;
}

}  // namespace detail

inline void Tower::mul_raw(const Rational* a, const Rational* b, Rational* out) const {
  if (level_ == 0) {
    *out = (*a) * (*b);
    return;
  }
  const std::size_t s = base_->total_;
  const std::size_t d = d_;
  std::vector<Rational> acc((2 * d - 1) * s);
  std::vector<Rational> tmp(s);
  std::vector<bool> az(d), bz(d);
  for (std::size_t i = 0; i < d; ++i) {
    az[i] = detail::block_is_zero(a + i * s, s);
    bz[i] = detail::block_is_zero(b + i * s, s);
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (az[i]) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (bz[j]) continue;
      base_->mul_raw(a + i * s, b + j * s, tmp.data());
      Rational* dst = acc.data() + (i + j) * s;
      for (std::size_t k = 0; k < s; ++k) dst[k] += tmp[k];
    }
  }
  for (std::size_t i = 2 * d - 2; i >= d; --i) {
    const Rational* top = acc.data() + i * s;
    if (detail::block_is_zero(top, s)) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (!minpoly_nonzero_[j]) continue;
      base_->mul_raw(top, minpoly_flat_.data() + j * s, tmp.data());
      Rational* dst = acc.data() + (i - d + j) * s;
      for (std::size_t k = 0; k < s; ++k) dst[k] -= tmp[k];
    }
    if (i == d) break;
  }
  std::copy(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(d * s), out);
}

inline bool Tower::contains(const Tower& sub) const {
  const Tower* t = this;
  while (t != nullptr && t->level_ > sub.level_) t = t->base_.get();
  return t == &sub;
}

inline TowerPtr Tower::at_level(int lvl) const {
  if (lvl < 0 || lvl > level_) throw std::out_of_range("tower level out of range");
  TowerPtr t = weak_self_.lock();
  while (t->level_ > lvl) t = t->base_;
  return t;
}

inline std::string Tower::describe() const {
  if (level_ == 0) return "Q";
  std::ostringstream os;
  os << base_->describe() << "(" << name_ << ": ";
  for (std::size_t i = minpoly_.size(); i-- > 0;) {
    os << "[" << minpoly_[i].to_string() << "]";
    if (i > 0) os << "*" << name_ << "^" << i << " + ";
  }
  os << ")";
  return os.str();
}

inline TowerPtr Tower::extend_unchecked(const TowerPtr& base, const std::vector<FieldElement>& monic_minpoly,
                                        std::string generator_name) {
  if (monic_minpoly.size() < 2) throw std::invalid_argument("minimal polynomial must have degree >= 1");
  auto t = std::shared_ptr<Tower>(new Tower());
  t->base_ = base;
  t->level_ = base->level_ + 1;
  t->d_ = monic_minpoly.size() - 1;
  t->total_ = t->d_ * base->total_;
  t->name_ = std::move(generator_name);
  const std::size_t s = base->total_;
  t->minpoly_flat_.resize((t->d_ + 1) * s);
  t->minpoly_nonzero_.resize(t->d_ + 1);
  for (std::size_t j = 0; j <= t->d_; ++j) {
    FieldElement cj = monic_minpoly[j];
    if (!base->contains(*cj.field())) throw FieldMismatch("minimal polynomial coefficient outside base field");
    cj = cj.embed(base);
    t->minpoly_.push_back(cj);
    std::copy(cj.coords().begin(), cj.coords().end(), t->minpoly_flat_.begin() + static_cast<std::ptrdiff_t>(j * s));
    t->minpoly_nonzero_[j] = !cj.is_zero();
  }
  if (!t->minpoly_.back().is_one()) throw std::invalid_argument("minimal polynomial must be monic");
  t->weak_self_ = t;
  return t;
}

// ---------------------------------------------------------------------------

inline FieldElement::FieldElement() : field_(Tower::rationals()), c_(1) {}

inline FieldElement FieldElement::zero(const TowerPtr& field) {
  return FieldElement(field, std::vector<Rational>(field->degree()));
}

inline FieldElement FieldElement::one(const TowerPtr& field) { return rational(field, Rational(1)); }

inline FieldElement FieldElement::rational(const TowerPtr& field, const Rational& q) {
  std::vector<Rational> c(field->degree());
  c[0] = q;
  c[0].canonicalize();
  return FieldElement(field, std::move(c));
}

inline FieldElement FieldElement::from_coords(const TowerPtr& field, std::vector<Rational> coords) {
  if (coords.size() != field->degree()) throw std::invalid_argument("coordinate vector has wrong length");
  for (auto& q : coords) q.canonicalize();
  return FieldElement(field, std::move(coords));
}

inline FieldElement FieldElement::generator(const TowerPtr& field) {
  if (field->level() == 0) throw std::invalid_argument("Q has no generator");
  std::vector<Rational> c(field->degree());
  const std::size_t s = field->base()->degree();
  if (field->level_degree() == 1) {
    // a degree-one level: the generator is minus the constant term
    FieldElement r = -field->minpoly()[0];
    std::copy(r.c_.begin(), r.c_.end(), c.begin());
  } else {
    c[s] = 1;
  }
  return FieldElement(field, std::move(c));
}

inline bool FieldElement::is_zero() const {
  return detail::block_is_zero(c_.data(), c_.size());
}

inline bool FieldElement::is_one() const {
  if (c_[0] != 1) return false;
  return detail::block_is_zero(c_.data() + 1, c_.size() - 1);
}

inline bool FieldElement::is_rational() const { return detail::block_is_zero(c_.data() + 1, c_.size() - 1); }

inline FieldElement FieldElement::embed(const TowerPtr& target) const {
  if (target.get() == field_.get()) return *this;
  if (!target->contains(*field_)) throw FieldMismatch("cannot embed " + field_->describe() + " into " + target->describe());
  std::vector<Rational> c(target->degree());
  std::copy(c_.begin(), c_.end(), c.begin());
  return FieldElement(target, std::move(c));
}

inline bool FieldElement::lies_in(const Tower& sub) const {
  if (!field_->contains(sub)) return false;
  return detail::block_is_zero(c_.data() + sub.degree(), c_.size() - sub.degree());
}

inline FieldElement FieldElement::restrict_to(const TowerPtr& sub) const {
  if (!lies_in(*sub)) throw FieldMismatch("element does not lie in " + sub->describe());
  return FieldElement(sub, std::vector<Rational>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(sub->degree())));
}

inline FieldElement FieldElement::coefficient(std::size_t i) const {
  if (field_->level() == 0) {
    if (i == 0) return *this;
    return FieldElement();
  }
  const std::size_t s = field_->base()->degree();
  if (i >= field_->level_degree()) return zero(field_->base());
  auto first = c_.begin() + static_cast<std::ptrdiff_t>(i * s);
  return FieldElement(field_->base(), std::vector<Rational>(first, first + static_cast<std::ptrdiff_t>(s)));
}

/// Brings two elements into their common tower.
inline std::pair<FieldElement, FieldElement> coerce(const FieldElement& a, const FieldElement& b) {
  if (a.field_.get() == b.field_.get()) return {a, b};
  if (a.field_->contains(*b.field_)) return {a, b.embed(a.field_)};
  if (b.field_->contains(*a.field_)) return {a.embed(b.field_), b};
  throw FieldMismatch("elements of unrelated towers: " + a.field_->describe() + " vs " + b.field_->describe());
}

/// The larger of two nested towers.
inline TowerPtr common_tower(const TowerPtr& a, const TowerPtr& b) {
  if (a.get() == b.get() || a->contains(*b)) return a;
  if (b->contains(*a)) return b;
  throw FieldMismatch("unrelated towers: " + a->describe() + " vs " + b->describe());
}

inline FieldElement FieldElement::operator-() const {
  FieldElement r = *this;
  for (auto& q : r.c_) q = -q;
  return r;
}

inline FieldElement& FieldElement::operator+=(const FieldElement& o) {
  if (o.field_.get() != field_.get()) {
    if (field_->contains(*o.field_)) {
      for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
      return *this;
    }
    *this = embed(common_tower(field_, o.field_));
  }
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

inline FieldElement& FieldElement::operator-=(const FieldElement& o) {
  if (o.field_.get() != field_.get()) {
    if (field_->contains(*o.field_)) {
      for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
      return *this;
    }
    *this = embed(common_tower(field_, o.field_));
  }
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

inline FieldElement& FieldElement::operator*=(const FieldElement& o) {
  if (o.is_rational()) {
    const Rational q = o.c_[0];
    if (o.field_.get() != field_.get() && !field_->contains(*o.field_)) *this = embed(common_tower(field_, o.field_));
    for (auto& x : c_) x *= q;
    return *this;
  }
  if (is_rational()) {
    const Rational q = c_[0];
    FieldElement r = o;
    if (o.field_.get() != field_.get() && !o.field_->contains(*field_)) r = r.embed(common_tower(field_, o.field_));
    for (auto& x : r.c_) x *= q;
    *this = std::move(r);
    return *this;
  }
  auto [a, b] = coerce(*this, o);
  std::vector<Rational> out(a.c_.size());
  a.field_->mul_raw(a.c_.data(), b.c_.data(), out.data());
  field_ = a.field_;
  c_ = std::move(out);
  return *this;
}

inline FieldElement& FieldElement::operator/=(const FieldElement& o) { return *this *= o.inverse(); }

inline FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
inline FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
inline FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
inline FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }

inline bool operator==(const FieldElement& a, const FieldElement& b) {
  if (a.field().get() == b.field().get()) return a.coords() == b.coords();
  auto [x, y] = coerce(a, b);
  return x.coords() == y.coords();
}
inline bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

namespace detail {

using BasePoly = std::vector<FieldElement>;

inline void trim(BasePoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

// Remainder and quotient of a by b (b nonzero, coefficients in one field).
inline void divmod(BasePoly a, const BasePoly& b, BasePoly& q, BasePoly& r) {
  trim(a);
  const FieldElement inv_lc = b.back().inverse();
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, FieldElement::zero(b.back().field()));
  while (a.size() >= b.size() && !a.empty()) {
    const std::size_t shift = a.size() - b.size();
    FieldElement c = a.back() * inv_lc;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    q[shift] = c;
    a.pop_back();
    trim(a);
  }
  r = std::move(a);
}

}  // namespace detail

inline FieldElement FieldElement::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero in " + field_->describe());
  if (field_->level() == 0) return rational(field_, 1 / c_[0]);
  if (is_rational()) return rational(field_, 1 / c_[0]);
  // extended Euclid for a(t) modulo the minimal polynomial, over the base level
  const TowerPtr& base = field_->base();
  detail::BasePoly r0 = field_->minpoly();
  detail::BasePoly r1;
  for (std::size_t i = 0; i < field_->level_degree(); ++i) r1.push_back(coefficient(i));
  detail::trim(r1);
  detail::BasePoly s0{FieldElement::zero(base)}, s1{FieldElement::one(base)};
  while (!r1.empty()) {
    detail::BasePoly q, r;
    detail::divmod(r0, r1, q, r);
    // s2 = s0 - q*s1
    detail::BasePoly qs(q.size() + s1.size(), FieldElement::zero(base));
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = 0; j < s1.size(); ++j) qs[i + j] += q[i] * s1[j];
    detail::BasePoly s2 = s0;
    if (s2.size() < qs.size()) s2.resize(qs.size(), FieldElement::zero(base));
    for (std::size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
    detail::trim(s2);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.size() != 1) throw std::domain_error("non-invertible element: minimal polynomial is reducible");
  const FieldElement g_inv = r0[0].inverse();
  std::vector<Rational> c(field_->degree());
  const std::size_t s = base->degree();
  for (std::size_t i = 0; i < s0.size() && i < field_->level_degree(); ++i) {
    FieldElement ci = s0[i] * g_inv;
    std::copy(ci.c_.begin(), ci.c_.end(), c.begin() + static_cast<std::ptrdiff_t>(i * s));
  }
  return FieldElement(field_, std::move(c));
}

inline FieldElement FieldElement::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  FieldElement result = one(field_);
  FieldElement b = *this;
  while (e > 0) {
    if (e & 1) result *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return result;
}

inline int FieldElement::compare(const FieldElement& o) const {
  auto [a, b] = coerce(*this, o);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    int c = cmp(a.c_[i], b.c_[i]);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  return 0;
}

inline std::string FieldElement::to_string() const {
  if (field_->level() == 0) return c_[0].get_str();
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < field_->level_degree(); ++i) {
    FieldElement ci = coefficient(i);
    if (ci.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    const bool atomic = ci.field()->level() == 0 || ci.is_rational();
    if (i == 0) {
      os << (atomic ? ci.to_string() : "(" + ci.to_string() + ")");
    } else {
      if (!ci.is_one()) os << (atomic ? ci.to_string() : "(" + ci.to_string() + ")") << "*";
      os << field_->generator_name();
      if (i > 1) os << "^" << i;
    }
  }
  if (first) return "0";
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const FieldElement& e) { return os << e.to_string(); }

}  // namespace ndescent
