#pragma once

// G_T spans L([n]^*(O)) = psi_n^{-1} L(n^2 (O)). The G_T are the joint eigenvectors
// of translation by T1 and T2 on that space; each eigenvector is matched to its
// T through G_T^n = c F_T o [n], then scaled to residue 1/n at O.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndescent/curve/torsion.hpp"

namespace ndescent {

class EigenspaceDimensionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Monomials x^i (2i <= d) and x^i y (2i + 3 <= d) spanning L(d (O)), ordered by pole order at O.
struct MonomialBasis {
  std::vector<int> x_power;
  std::vector<bool> has_y;

  static MonomialBasis riemann_roch(int d) {
    MonomialBasis b;
    for (int pole = 0; pole <= d; ++pole) {
      if (pole == 1) continue;
      if (pole % 2 == 0) {
        b.x_power.push_back(pole / 2);
        b.has_y.push_back(false);
      } else {
        b.x_power.push_back((pole - 3) / 2);
        b.has_y.push_back(true);
      }
    }
    return b;
  }
  std::size_t size() const { return x_power.size(); }
  std::string name(std::size_t i) const {
    std::string s;
    if (x_power[i] == 1) s = "x";
    else if (x_power[i] > 1) s = "x^" + std::to_string(x_power[i]);
    if (has_y[i]) s += s.empty() ? "y" : "*y";
    return s.empty() ? "1" : s;
  }
  FunctionFieldElement function(const CurvePtr& e, std::size_t i) const {
    Poly m = Poly::monomial(FieldElement::one(e->field), static_cast<std::size_t>(x_power[i]));
    return has_y[i] ? FunctionFieldElement::from_poly(e, Poly(e->field), m) : FunctionFieldElement::from_poly(e, m);
  }
  FieldElement evaluate(std::size_t i, const Point& p) const {
    FieldElement v = p.x.pow(x_power[i]);
    return has_y[i] ? v * p.y : v;
  }
  /// Coordinates of a polynomial function u + v y in this basis; nullopt if outside the span.
  std::optional<Vector> coordinates(const FunctionFieldElement& f, const TowerPtr& k) const {
    if (!f.is_polynomial()) return std::nullopt;
    int max_u = -1, max_v = -1;
    for (std::size_t i = 0; i < size(); ++i) {
      int& m = has_y[i] ? max_v : max_u;
      m = std::max(m, x_power[i]);
    }
    if (f.u().degree() > max_u || f.v().degree() > max_v) return std::nullopt;
    Vector c(size(), FieldElement::zero(k));
    for (std::size_t i = 0; i < size(); ++i) c[i] = (has_y[i] ? f.v() : f.u()).coeff(static_cast<std::size_t>(x_power[i]));
    return c;
  }
};

struct GBasis {
  /// G_T in torsion-table order; G_O = 1.
  std::vector<FunctionFieldElement> G;
  /// Eigenvalues of translation by T1 and T2 on G_T, i.e. G_T(P + T_k) = chi_k[T] G_T(P).
  std::vector<FieldElement> chi1, chi2;
  /// Translation operators by T1, T2 on the coefficient space of the monomial basis of L(n^2 (O)).
  ExactMatrix A1, A2;

  /// The translation character S -> G_T(P + S) / G_T(P) for S = i T1 + j T2.
  FieldElement character(const TorsionTable& tab, std::size_t s, std::size_t t) const {
    return chi1[t].pow(tab.coord1(s)) * chi2[t].pow(tab.coord2(s));
  }
};

namespace detail {

/// Matrix of h -> h(P + S) psi(x) / psi(x(P + S)) on the monomial basis of L(n^2 (O)).
inline ExactMatrix translation_operator(const TorsionTable& tab, const MonomialBasis& mb, const Poly& psi, std::size_t s) {
  const CurvePtr& e = tab.curve_ptr();
  const Point& sp = tab.point(s);
  FunctionFieldElement X = FunctionFieldElement::x(e), Y = FunctionFieldElement::y(e);
  FunctionFieldElement xs = X.constant_like(sp.x), ys = X.constant_like(sp.y);
  FunctionFieldElement lam = (Y - ys) / (X - xs);
  FunctionFieldElement X3 = lam * lam - X - xs;
  FunctionFieldElement Y3 = lam * (X - X3) - Y;
  FunctionFieldElement psi_f = FunctionFieldElement::from_poly(e, psi);
  FunctionFieldElement ratio = psi_f / psi_f.substitute(X3, Y3);
  const std::size_t d = mb.size();
  ExactMatrix a(e->field, d, d);
  for (std::size_t i = 0; i < d; ++i) {
    FunctionFieldElement img = mb.function(e, i).substitute(X3, Y3) * ratio;
    auto c = mb.coordinates(img, e->field);
    if (!c) throw std::logic_error("translate of a Riemann-Roch basis element left the space");
    for (std::size_t j = 0; j < d; ++j) a(j, i) = (*c)[j];
  }
  return a;
}

inline FunctionFieldElement combination(const CurvePtr& e, const MonomialBasis& mb, const Vector& c) {
  Poly u(e->field), v(e->field);
  for (std::size_t i = 0; i < mb.size(); ++i) {
    Poly m = Poly::monomial(c[i], static_cast<std::size_t>(mb.x_power[i]));
    if (mb.has_y[i]) v += m;
    else u += m;
  }
  return FunctionFieldElement::from_poly(e, u, v);
}

}  // namespace detail

inline GBasis compute_G_basis(const TorsionTable& tab, std::uint64_t seed = 1) {
  const CurvePtr& e = tab.curve_ptr();
  const TowerPtr& k = e->field;
  const int n = tab.n();
  const std::size_t nn = tab.size();
  const Poly psi = division_polynomial(*e, n);
  const MonomialBasis mb = MonomialBasis::riemann_roch(n * n);
  if (mb.size() != nn) throw std::logic_error("Riemann-Roch basis has the wrong dimension");

  GBasis out;
  out.A1 = detail::translation_operator(tab, mb, psi, tab.basis1());
  out.A2 = detail::translation_operator(tab, mb, psi, tab.basis2());

  std::vector<FieldElement> roots;
  for (const auto& r : roots_in_field(Poly(k, [&] {
         std::vector<FieldElement> c(static_cast<std::size_t>(n) + 1, FieldElement::zero(k));
         c[0] = FieldElement::integer(k, -1);
         c[static_cast<std::size_t>(n)] = FieldElement::one(k);
         return c;
       }())))
    roots.push_back(r.value);
  if (static_cast<int>(roots.size()) != n) throw std::domain_error("the field does not contain the n-th roots of unity");

  // sample points for matching eigenvectors to torsion points: P and 2P in one extension
  PointSampler sampler(*e, seed);
  Point p1 = sampler.next_in_extension();
  Point p2 = point_mul(*e, 2, p1);

  out.G.assign(nn, FunctionFieldElement());
  out.chi1.assign(nn, FieldElement());
  out.chi2.assign(nn, FieldElement());
  std::vector<bool> taken(nn, false);
  const ExactMatrix id = ExactMatrix::identity(k, nn);
  for (const auto& w1 : roots)
    for (const auto& w2 : roots) {
      ExactMatrix stack(k, 2 * nn, nn);
      ExactMatrix b1 = out.A1 - id * w1, b2 = out.A2 - id * w2;
      for (std::size_t r = 0; r < nn; ++r)
        for (std::size_t c = 0; c < nn; ++c) {
          stack(r, c) = b1(r, c);
          stack(nn + r, c) = b2(r, c);
        }
      auto ker = kernel_basis(stack);
      if (ker.size() != 1)
        throw EigenspaceDimensionError("joint eigenspace of dimension " + std::to_string(ker.size()) + " for (" +
                                       w1.to_string() + ", " + w2.to_string() + ")");
      FunctionFieldElement g = detail::combination(e, mb, ker[0]) / FunctionFieldElement::from_poly(e, psi);
      // match: g^n / F_T([n]P) is constant
      std::size_t match = nn;
      for (std::size_t t = 0; t < nn; ++t) {
        const FieldElement c1 = g(p1).pow(n) / tab.F(t)(point_mul(*e, n, p1));
        const FieldElement c2 = g(p2).pow(n) / tab.F(t)(point_mul(*e, n, p2));
        if (c1 == c2) {
          if (match != nn) throw EigenspaceDimensionError("eigenfunction matches two torsion points");
          match = t;
        }
      }
      if (match == nn || taken[match]) throw EigenspaceDimensionError("eigenfunction matches no free torsion point");
      taken[match] = true;
      if (match == 0) {
        out.G[0] = g.constant_like(FieldElement::one(k));
      } else {
        const LaurentSeries s = laurent_at_O(g, 1);
        if (s.valuation != -1) throw std::logic_error("G_T must have a simple pole at O");
        out.G[match] = g * (FieldElement::integer(k, n).inverse() / s.leading());
      }
      out.chi1[match] = w1;
      out.chi2[match] = w2;
    }
  return out;
}

}  // namespace ndescent
