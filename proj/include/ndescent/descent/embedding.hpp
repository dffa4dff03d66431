#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ndescent/descent/epsilon.hpp"
#include "ndescent/descent/g_basis.hpp"

namespace ndescent {

class DegenerateSample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EmbeddingData {
  /// Basis of L(n (O)); f_E(P) is the column of its values.
  MonomialBasis basis;
  /// Osculating hyperplane at O as a row vector.
  Vector dual_O;
  /// M_T in torsion-table order, scaled so that F_T(P) = f^v(O) M_T^{-1} f(P) / f^v(O) f(P).
  std::vector<ExactMatrix> M;
  /// Seed of the sample that produced the M_T.
  std::uint64_t seed = 0;

  Vector f(const Point& p) const {
    Vector v;
    for (std::size_t i = 0; i < basis.size(); ++i) v.push_back(basis.evaluate(i, p));
    return v;
  }
};

/// Row vector of the tangent line at P in the coordinates (1, x, y); n = 3 only.
inline Vector f_dual(const Curve& e, const Point& p) {
  if (p.is_O()) {
    const TowerPtr& k = e.field;
    return {FieldElement::one(k), FieldElement::zero(k), FieldElement::zero(k)};
  }
  const FieldElement s = FieldElement::integer(p.x.field(), 3) * p.x * p.x + e.a;
  const FieldElement t = p.y + p.y;
  return {s * p.x - t * p.y, -s, t};
}

/// The unique row c with c . f_E vanishing to order n at O, from Laurent expansions in t = x/y.
inline Vector osculating_hyperplane_at_O(const CurvePtr& e, const MonomialBasis& mb, int n) {
  const TowerPtr& k = e->field;
  // in the coordinates t^n f_E the conditions are: coefficients of t^0 .. t^{n-1} vanish
  ExactMatrix sys(k, static_cast<std::size_t>(n), mb.size());
  for (std::size_t j = 0; j < mb.size(); ++j) {
    const LaurentSeries s = laurent_at_O(mb.function(e, j), n + 1);
    for (int p = -n; p < 0; ++p) sys(static_cast<std::size_t>(p + n), j) = s.coefficient(p);
  }
  auto ker = kernel_basis(sys);
  if (ker.size() != 1) throw std::logic_error("osculating hyperplane at O is not unique");
  Vector c = ker[0];
  for (const auto& v : c)
    if (!v.is_zero()) {
      const FieldElement inv = v.inverse();
      for (auto& w : c) w *= inv;
      break;
    }
  return c;
}

namespace detail {

/// M with M f(Q) proportional to f(Q + T) at the points Q of the sample, up to scalar, in K.
inline ExactMatrix translation_matrix(const TorsionTable& tab, const EmbeddingData& emb, std::size_t t,
                                      const std::vector<Point>& sample) {
  const Curve& e = tab.curve();
  const std::size_t d = emb.basis.size();
  const std::size_t unknowns = d * d + sample.size();
  const TowerPtr l = sample.front().x.field();
  ExactMatrix sys(l, d * sample.size(), unknowns);
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const Vector src = emb.f(sample[k]);
    const Vector dst = emb.f(point_add(e, sample[k], tab.point(t)));
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t r = k * d + i;
      for (std::size_t j = 0; j < d; ++j) sys.set(r, i * d + j, src[j]);
      sys.set(r, d * d + k, -dst[i]);
    }
  }
  auto ker = kernel_basis(sys);
  if (ker.size() != 1) throw DegenerateSample("translation kernel of dimension " + std::to_string(ker.size()));
  Vector v = ker[0];
  FieldElement lead;
  for (std::size_t i = 0; i < d * d; ++i)
    if (!v[i].is_zero()) {
      lead = v[i];
      break;
    }
  if (lead.is_zero()) throw DegenerateSample("translation kernel has zero matrix part");
  const TowerPtr& k = e.field;
  ExactMatrix m(k, d, d);
  const FieldElement inv = lead.inverse();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const FieldElement x = v[i * d + j] * inv;
      if (!x.lies_in(*k)) throw DegenerateSample("translation matrix not defined over the base field");
      m(i, j) = x.restrict_to(k);
    }
  return m;
}

/// f^v(O) M^{-1} f(P) / f^v(O) f(P).
inline FieldElement scaled_ratio(const EmbeddingData& emb, const ExactMatrix& m_inv, const Point& p) {
  const Vector fp = emb.f(p);
  return dot(emb.dual_O, m_inv * fp) / dot(emb.dual_O, fp);
}

}  // namespace detail

/// f_E, its osculating hyperplane at O and the scaled translation matrices M_T.
inline EmbeddingData compute_embedding(const TorsionTable& tab, std::uint64_t seed = 1) {
  const CurvePtr& e = tab.curve_ptr();
  const int n = tab.n();
  EmbeddingData emb;
  emb.basis = MonomialBasis::riemann_roch(n);
  emb.dual_O = osculating_hyperplane_at_O(e, emb.basis, n);
  const TowerPtr& k = e->field;
  for (std::uint64_t attempt = 0; attempt < 32; ++attempt) {
    const std::uint64_t s = seed + attempt;
    try {
      PointSampler sampler(*e, s);
      for (const auto& p : tab.points())
        if (!p.is_O()) sampler.exclude_x(p.x);
      const Point p0 = sampler.next_in_extension();
      std::vector<Point> sample;
      for (int j = 1; j <= n + 2; ++j) {
        Point q = point_mul(*e, j, p0);
        if (q.is_O()) throw DegenerateSample("sample point is torsion");
        sample.push_back(q);
      }
      const Point check1 = sampler.next_in_extension();
      const Point check2 = sampler.next_in_extension();
      std::vector<ExactMatrix> ms;
      ms.push_back(ExactMatrix::identity(k, emb.basis.size()));
      for (std::size_t t = 1; t < tab.size(); ++t) {
        ExactMatrix m = detail::translation_matrix(tab, emb, t, sample);
        const ExactMatrix m_inv = inverse(m);
        const FieldElement ft = tab.F(t)(check1);
        if (ft.is_zero()) throw DegenerateSample("F_T vanishes at the check point");
        const FieldElement mu = detail::scaled_ratio(emb, m_inv, check1) / ft;
        if (!mu.lies_in(*k) || mu.is_zero()) throw DegenerateSample("M_T scale not in the base field");
        m *= mu.restrict_to(k);
        if (detail::scaled_ratio(emb, inverse(m), check2) != tab.F(t)(check2))
          throw std::logic_error("scaled M_T fails the F_T identity at a second point");
        ms.push_back(std::move(m));
      }
      emb.M = std::move(ms);
      emb.seed = s;
      return emb;
    } catch (const DegenerateSample&) {
      continue;
    } catch (const PoleAtP&) {
      continue;
    }
  }
  throw DegenerateSample("no admissible sample found for the translation matrices");
}

/// tau_1(alpha) = sum_T alpha(T) M_T.
inline ExactMatrix tau_1(const EmbeddingData& emb, const Vector& alpha) {
  if (alpha.size() != emb.M.size()) throw DimensionMismatch("tau_1: element has the wrong length");
  ExactMatrix out(emb.M.front().field(), emb.M.front().rows(), emb.M.front().cols());
  for (std::size_t t = 0; t < alpha.size(); ++t) out += emb.M[t] * alpha[t];
  return out;
}

}  // namespace ndescent
