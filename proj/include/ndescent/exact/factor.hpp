#pragma once

// Factorisation over a tower by Trager's norm method: shift until the norm to
// the base level is square-free, factor the norm one level down, and pull the
// factors back with gcds.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ndescent/exact/factor_int.hpp"
#include "ndescent/exact/matrix.hpp"
#include "ndescent/exact/poly.hpp"

namespace ndescent {

/// Thrown by tower_extend when the proposed minimal polynomial factors; carries a factor of least degree.
class ReducibleExtension : public std::domain_error {
 public:
  explicit ReducibleExtension(Poly factor)
      : std::domain_error("polynomial is reducible; factor " + factor.to_string()), factor_(std::move(factor)) {}
  const Poly& factor() const { return factor_; }

 private:
  Poly factor_;
};

struct Factor {
  Poly poly;  // monic irreducible
  int multiplicity;
};

namespace detail {

/// Norm from a tower level to its base level of a field element.
inline FieldElement norm_to_base(const FieldElement& e) {
  const TowerPtr& f = e.field();
  const TowerPtr& base = f->base();
  const std::size_t d = f->level_degree();
  if (e.is_rational()) return FieldElement::rational(base, e.rational_value()).pow(static_cast<long>(d));
  ExactMatrix m(base, d, d);
  const FieldElement alpha = FieldElement::generator(f);
  FieldElement col = e;
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) m(i, j) = col.coefficient(i);
    col *= alpha;
  }
  return determinant(m);
}

/// Norm of q in F[x] down to base(F)[x], by evaluation at integers and interpolation.
inline Poly norm_poly(const Poly& q) {
  const TowerPtr& f = q.field();
  const TowerPtr& base = f->base();
  const std::size_t deg = static_cast<std::size_t>(q.degree()) * f->level_degree();
  std::vector<FieldElement> xs, ys;
  for (std::size_t k = 0; k <= deg; ++k) {
    FieldElement c = FieldElement::integer(f, static_cast<long>(k));
    xs.push_back(FieldElement::integer(base, static_cast<long>(k)));
    ys.push_back(norm_to_base(q(c)));
  }
  // Newton divided differences
  std::vector<FieldElement> dd = ys;
  for (std::size_t j = 1; j <= deg; ++j)
    for (std::size_t i = deg; i >= j; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
      if (i == j) break;
    }
  Poly result = Poly::constant(dd[deg]);
  for (std::size_t i = deg; i-- > 0;) {
    result = result * Poly(base, {-xs[i], FieldElement::one(base)});
    result += Poly::constant(dd[i]);
  }
  return result;
}

inline Poly from_zpoly(const TowerPtr& field, const ZPoly& z) {
  std::vector<FieldElement> c;
  for (const auto& v : z) c.push_back(FieldElement::rational(field, Rational(v)));
  return Poly(field, std::move(c)).monic();
}

/// Irreducible monic factors of a monic square-free polynomial over its own field.
inline std::vector<Poly> factor_squarefree(const Poly& p) {
  const TowerPtr& f = p.field();
  if (p.degree() <= 0) return {};
  if (p.degree() == 1) return {p.monic()};
  if (f->level() == 0) {
    std::vector<Rational> c;
    for (const auto& e : p.coeffs()) c.push_back(e.rational_value());
    std::vector<Poly> out;
    for (const auto& z : factor_squarefree_over_Q(c)) out.push_back(from_zpoly(f, z));
    return out;
  }
  const FieldElement alpha = FieldElement::generator(f);
  for (long k = 0;; ++k) {
    const long s = (k % 2 == 1) ? (k + 1) / 2 : -(k / 2);  // 0, 1, -1, 2, -2, ...
    const FieldElement shift = alpha * FieldElement::integer(f, s);
    Poly q = s == 0 ? p : p.shift(-shift);
    Poly n = norm_poly(q);
    if (gcd(n, n.derivative()).degree() > 0) {
      if (k > 64) throw std::runtime_error("no square-free norm found");
      continue;
    }
    std::vector<Poly> out;
    for (const Poly& g : factor_squarefree(n.monic())) {
      Poly h = gcd(q, g.embed(f));
      if (h.degree() <= 0) continue;
      out.push_back(s == 0 ? h : h.shift(shift).monic());
    }
    return out;
  }
}

}  // namespace detail

/// Complete factorisation over the coefficient field: monic irreducible factors with multiplicities,
/// sorted by degree, then by coefficients.
inline std::vector<Factor> factor(const Poly& p) {
  std::vector<Factor> out;
  for (const auto& [part, mult] : squarefree_decomposition(p))
    for (Poly& g : detail::factor_squarefree(part)) out.push_back({std::move(g), mult});
  std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) {
    if (a.poly.degree() != b.poly.degree()) return a.poly.degree() < b.poly.degree();
    for (std::size_t i = 0; i < a.poly.size(); ++i) {
      int c = a.poly.coeff(i).compare(b.poly.coeff(i));
      if (c != 0) return c < 0;
    }
    return a.multiplicity < b.multiplicity;
  });
  return out;
}

inline bool is_irreducible(const Poly& p) {
  if (p.degree() < 1) return false;
  auto f = factor(p);
  return f.size() == 1 && f[0].multiplicity == 1;
}

struct Root {
  FieldElement value;
  int multiplicity;
};

/// Roots lying in the coefficient field, sorted by coordinate vector.
inline std::vector<Root> roots_in_field(const Poly& p) {
  std::vector<Root> out;
  if (p.degree() < 1) return out;
  for (const auto& fac : factor(p))
    if (fac.poly.degree() == 1) out.push_back({-fac.poly.coeff(0), fac.multiplicity});
  std::sort(out.begin(), out.end(), [](const Root& a, const Root& b) { return a.value.compare(b.value) < 0; });
  return out;
}

/// base[name]/(minpoly); throws ReducibleExtension with a factor of least degree if minpoly factors.
inline TowerPtr tower_extend(const TowerPtr& base, const Poly& minpoly, const std::string& name) {
  if (minpoly.degree() < 1) throw std::invalid_argument("extension polynomial must have positive degree");
  if (!base->contains(*minpoly.field())) throw FieldMismatch("extension polynomial is not over the base field");
  Poly m = minpoly.embed(base).monic();
  auto facs = factor(m);
  if (facs.size() != 1 || facs[0].multiplicity != 1) throw ReducibleExtension(facs.front().poly);
  return Tower::extend_unchecked(base, m.coeffs(), name);
}

}  // namespace ndescent
