#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ndescent/descent/epsilon.hpp"
#include "ndescent/descent/g_basis.hpp"

using namespace ndescent;
using namespace fixtures;

namespace {

struct Reference {
  TorsionTable tab = torsion_table(reference_curve(), 3);
  GBasis gb = compute_G_basis(tab);
};

const Reference& ref() {
  static const Reference r;
  return r;
}

std::vector<Point> sample_points(const Curve& e, std::uint64_t seed, int count) {
  PointSampler s(e, seed);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) out.push_back(s.next_in_extension());
  return out;
}

}  // namespace

TEST(GBasis, UnitAndResidue) {
  const auto& r = ref();
  const TowerPtr k = eisenstein();
  EXPECT_EQ(r.gb.G[0], FunctionFieldElement::constant(r.tab.curve_ptr(), FieldElement::one(k)));
  for (std::size_t t = 1; t < r.tab.size(); ++t) {
    LaurentSeries s = laurent_at_O(r.gb.G[t], 2);
    EXPECT_EQ(s.valuation, -1) << t;
    EXPECT_EQ(s.leading(), FieldElement::rational(k, Rational(1, 3))) << t;
  }
}

TEST(GBasis, TranslationEigenproperty) {
  const auto& r = ref();
  const Curve& e = r.tab.curve();
  auto pts = sample_points(e, 11, 3);
  for (std::size_t s = 0; s < r.tab.size(); ++s)
    for (std::size_t t = 0; t < r.tab.size(); ++t)
      for (const auto& p : pts) {
        Point ps = point_add(e, p, r.tab.point(s));
        EXPECT_EQ(r.gb.G[t](ps), r.gb.character(r.tab, s, t) * r.gb.G[t](p)) << s << " " << t;
      }
}

TEST(GBasis, CharacterIsPairing) {
  // G_T(P + S) = e(S, T) G_T(P) with e = eps(S,T)/eps(T,S)
  const auto& r = ref();
  for (std::size_t s = 0; s < r.tab.size(); ++s)
    for (std::size_t t = 0; t < r.tab.size(); ++t)
      EXPECT_EQ(r.gb.character(r.tab, s, t), r.tab.weil_pairing(s, t)) << s << " " << t;
}

TEST(GBasis, MultiplicativityOfR) {
  const auto& r = ref();
  const Curve& e = r.tab.curve();
  auto pts = sample_points(e, 5, 3);
  std::mt19937_64 rng(7);
  for (int pair = 0; pair < 10; ++pair) {
    std::size_t t1 = rng() % 9, t2 = rng() % 9;
    std::size_t t12 = r.tab.add(t1, t2);
    for (const auto& p : pts) {
      FieldElement lhs = r_eval(r.tab, t1, t2, point_mul(e, 3, p));
      FieldElement rhs = r.gb.G[t1](p) * r.gb.G[t2](p) / r.gb.G[t12](p);
      EXPECT_EQ(lhs, rhs) << t1 << " " << t2;
    }
  }
}

TEST(GBasis, MillerFunctionsPullBackToCubes) {
  const auto& r = ref();
  const Curve& e = r.tab.curve();
  for (const auto& p : sample_points(e, 23, 3)) {
    Point p3 = point_mul(e, 3, p);
    for (std::size_t t = 0; t < r.tab.size(); ++t) EXPECT_EQ(r.tab.F(t)(p3), r.gb.G[t](p).pow(3)) << t;
  }
}

TEST(Epsilon, TableIdentities) {
  const auto& r = ref();
  EpsilonTable eps = compute_epsilon(r.tab);
  const FieldElement one = FieldElement::one(eisenstein());
  for (std::size_t a = 0; a < 9; ++a) {
    EXPECT_EQ(eps(0, a), one);
    EXPECT_EQ(eps(a, 0), one);
    for (std::size_t b = 0; b < 9; ++b) {
      EXPECT_EQ(eps(a, b) / eps(b, a), r.tab.weil_pairing(a, b));
      for (std::size_t c = 0; c < 9; ++c)
        EXPECT_EQ(eps(a, b) * eps(r.tab.add(a, b), c), eps(a, r.tab.add(b, c)) * eps(b, c));
    }
  }
}

TEST(Epsilon, IndependentOfEvaluationPoint) {
  const auto& r = ref();
  const Curve& e = r.tab.curve();
  auto pts = sample_points(e, 31, 2);
  for (std::size_t a = 1; a < 9; ++a)
    for (std::size_t b = 1; b < 9; ++b)
      for (const auto& p : pts) EXPECT_EQ(r.tab.epsilon_at(a, b, p), r.tab.epsilon(a, b));
}

#include "ndescent/descent/embedding.hpp"

namespace {

const EmbeddingData& ref_embedding() {
  static const EmbeddingData emb = compute_embedding(ref().tab);
  return emb;
}

}  // namespace

TEST(Embedding, OsculatingHyperplaneAtO) {
  // f_E = (1, x, y): t^3 f_E = (t^3, t + O(t^5), 1 + O(t^4)), so order-3 contact forces the row (1, 0, 0)
  const auto& emb = ref_embedding();
  const TowerPtr k = eisenstein();
  EXPECT_EQ(emb.basis.name(0), "1");
  EXPECT_EQ(emb.basis.name(1), "x");
  EXPECT_EQ(emb.basis.name(2), "y");
  EXPECT_EQ(emb.dual_O, (Vector{FieldElement::one(k), FieldElement::zero(k), FieldElement::zero(k)}));
}

TEST(Embedding, TranslationMatrices) {
  const auto& r = ref();
  const auto& emb = ref_embedding();
  const TowerPtr k = eisenstein();
  ASSERT_EQ(emb.M.size(), 9u);
  EXPECT_EQ(emb.M[0], ExactMatrix::identity(k, 3));
  for (std::size_t t = 1; t < 9; ++t) EXPECT_TRUE(emb.M[t].trace().is_zero()) << t;
  ExactMatrix stack(k, 9, 9);
  for (std::size_t t = 0; t < 9; ++t)
    for (std::size_t i = 0; i < 9; ++i) stack(t, i) = emb.M[t](i / 3, i % 3);
  EXPECT_EQ(rank(stack), 9u);
  EpsilonTable eps = compute_epsilon(r.tab);
  for (std::size_t a = 0; a < 9; ++a)
    for (std::size_t b = 0; b < 9; ++b) EXPECT_EQ(emb.M[a] * emb.M[b], emb.M[r.tab.add(a, b)] * eps(a, b)) << a << " " << b;
}

TEST(Embedding, TranslationAndScaling) {
  const auto& r = ref();
  const auto& emb = ref_embedding();
  const Curve& e = r.tab.curve();
  for (const auto& p : sample_points(e, 41, 3))
    for (std::size_t t = 0; t < 9; ++t) {
      EXPECT_TRUE(projectively_equal(emb.M[t] * emb.f(p), emb.f(point_add(e, p, r.tab.point(t)))));
      FieldElement rhs = dot(emb.dual_O, inverse(emb.M[t]) * emb.f(p)) / dot(emb.dual_O, emb.f(p));
      EXPECT_EQ(r.tab.F(t)(p), rhs);
    }
}

TEST(Embedding, TangentRowIsIncident) {
  const auto& r = ref();
  const Curve& e = r.tab.curve();
  for (const auto& p : sample_points(e, 43, 3)) {
    const Vector row = f_dual(e, p);
    EXPECT_TRUE(dot(row, ref_embedding().f(p)).is_zero());
    EXPECT_TRUE(dot(row, ref_embedding().f(point_mul(e, -2, p))).is_zero());
  }
}

TEST(Tau1, BasisImagesAndProducts) {
  const auto& r = ref();
  const auto& emb = ref_embedding();
  const TowerPtr k = eisenstein();
  EpsilonTable eps = compute_epsilon(r.tab);
  auto delta = [&](std::size_t t) {
    Vector v(9, FieldElement::zero(k));
    v[t] = FieldElement::one(k);
    return v;
  };
  EXPECT_EQ(tau_1(emb, delta(0)), ExactMatrix::identity(k, 3));
  for (std::size_t a = 0; a < 9; ++a) {
    EXPECT_EQ(tau_1(emb, delta(a)), emb.M[a]);
    for (std::size_t b = 0; b < 9; ++b) {
      Vector prod(9, FieldElement::zero(k));
      prod[r.tab.add(a, b)] = eps(a, b);
      EXPECT_EQ(tau_1(emb, prod), emb.M[a] * emb.M[b]);
    }
  }
}
