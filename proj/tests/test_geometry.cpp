#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "ndescent/geometry/geometry.hpp"

using namespace ndescent;
using namespace fixtures;

namespace {

struct Reference {
  TorsionTable tab = torsion_table(reference_curve(), 3);
  GBasis gb = compute_G_basis(tab);
  EpsilonTable eps = compute_epsilon(tab);
  EmbeddingData emb = compute_embedding(tab);
};

const Reference& ref() {
  static const Reference r;
  return r;
}

FieldElement one() { return FieldElement::one(eisenstein()); }
RhoTable unit_rho() { return constant_rho(ref().tab, one()); }

RElement random_z(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RElement z{one()};
  while (z.size() < 9) {
    FieldElement v = num(eisenstein(), static_cast<long>(rng() % 7) - 3) + num(eisenstein(), static_cast<long>(rng() % 7) - 3) * zeta();
    if (!v.is_zero()) z.push_back(v);
  }
  return z;
}

std::vector<Point> sample_points(const Curve& e, std::uint64_t seed, int count) {
  PointSampler s(e, seed);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) out.push_back(s.next_in_extension());
  return out;
}

Trivialisation standard() {
  const auto& r = ref();
  CSA a = build_csa(r.tab, r.eps, unit_rho());
  return trivialize(r.tab, a, unit_rho(), TrivialisationMode::standard, &r.emb);
}

}  // namespace

TEST(Quadrics, CountRankAndVanishing) {
  const auto& r = ref();
  QuadricSystem qs = quadrics_for_E(r.tab);
  EXPECT_EQ(qs.forms.size(), 27u);
  EXPECT_EQ(qs.group1, 3u);
  EXPECT_EQ(rank(qs.coefficient_matrix(eisenstein())), 27u);
  for (const auto& q : qs.forms)
    for (const auto& t : q.terms) EXPECT_EQ(t.coeff.field().get(), eisenstein().get());
  for (const auto& p : sample_points(r.tab.curve(), 3, 3)) {
    Vector z = g_eval(r.tab, r.gb, nullptr, p);
    for (const auto& q : qs.forms) EXPECT_TRUE(q(z).is_zero());
  }
  EXPECT_EQ(quadrics_for_C(r.tab, unit_rho()).coefficient_matrix(eisenstein()), qs.coefficient_matrix(eisenstein()));
}

TEST(Quadrics, TwistedSystemVanishesAtScaledPoints) {
  const auto& r = ref();
  RElement z = random_z(5);
  RhoTable rho = partial(r.tab, z);
  QuadricSystem qs = quadrics_for_C(r.tab, rho);
  GammaWitness gam = solve_gamma(r.tab, rho);
  for (const auto& p : sample_points(r.tab.curve(), 9, 3)) {
    Vector g = g_eval(r.tab, r.gb, nullptr, p);
    Vector gz;
    for (std::size_t t = 0; t < 9; ++t) gz.push_back(g[t] / z[t]);
    Vector gg = g_eval(r.tab, r.gb, &gam, p);
    for (const auto& q : qs.forms) {
      EXPECT_TRUE(q(gz).is_zero());
      EXPECT_TRUE(q(gg).is_zero());
    }
  }
}

TEST(GEval, PartialEqualsR) {
  const auto& r = ref();
  const Curve& e = r.tab.curve();
  RElement z = random_z(6);
  RhoTable rho = partial(r.tab, z);
  GammaWitness gam = solve_gamma(r.tab, rho);
  for (const auto& p : sample_points(e, 13, 3)) {
    Vector g = g_eval(r.tab, r.gb, nullptr, p);
    EXPECT_TRUE(g[0].is_one());
    RhoTable d = partial(r.tab, g);
    Vector gg = g_eval(r.tab, r.gb, &gam, p);
    RhoTable dg = partial(r.tab, gg);
    const Point p3 = point_mul(e, 3, p);
    for (std::size_t a = 0; a < 9; ++a)
      for (std::size_t b = 0; b < 9; ++b) {
        const FieldElement rv = r_eval(r.tab, a, b, p3);
        EXPECT_EQ(d(a, b), rv);
        EXPECT_EQ(dg(a, b) * rho(a, b), rv);
      }
  }
  EXPECT_THROW(g_eval(r.tab, r.gb, nullptr, r.tab.point(4)), BadBasePoint);
}

TEST(Lambda, SegreFactorisationForE) {
  const auto& r = ref();
  const Curve& e = r.tab.curve();
  Trivialisation t = standard();
  for (const auto& p : sample_points(e, 17, 3)) {
    Vector g = g_eval(r.tab, r.gb, nullptr, p);
    ExactMatrix direct = r.emb.M[1] * g[1];
    for (std::size_t s = 2; s < 9; ++s) direct += r.emb.M[s] * g[s];
    ExactMatrix lam = lambda_eval(t, g);
    EXPECT_EQ(lam, direct);
    EXPECT_TRUE(lam.trace().is_zero());
    EXPECT_EQ(rank(lam), 1u);
    ExactMatrix segre = ExactMatrix::column(r.emb.f(p)) * ExactMatrix::row(f_dual(e, p));
    EXPECT_TRUE(projectively_equal(lam, segre));
    RankOneFactor f = extract_point(lam);
    EXPECT_TRUE(projectively_equal(f.column, r.emb.f(p)));
    EXPECT_TRUE(dot(f.row, f.column).is_zero());
    EXPECT_EQ(ExactMatrix::column(f.column) * ExactMatrix::row(f.row), lam);
  }
}

TEST(Lambda, TamperedTrivialisationIsNotRankOne) {
  const auto& r = ref();
  Trivialisation t = standard();
  t.images[4] *= num(eisenstein(), 2);
  Vector g = g_eval(r.tab, r.gb, nullptr, sample_points(r.tab.curve(), 19, 1).front());
  EXPECT_THROW(lambda_eval(t, g), RankNotOne);
}

TEST(Interpolation, MonomialsAndKernelFailures) {
  EXPECT_EQ(cubic_monomials().size(), 10u);
  EXPECT_EQ(cubic_monomials().front(), (std::array<int, 3>{3, 0, 0}));
  const TowerPtr k = eisenstein();
  std::vector<Vector> few;
  for (const auto& p : sample_points(reference_curve(), 29, 2)) few.push_back({FieldElement::one(k), p.x, p.y});
  EXPECT_THROW(interpolate_plane_curve(few, k), KernelTooBig);
  // points (1, i, 2^i) lie on no common cubic
  std::vector<Vector> generic;
  for (long i = 0; i < 12; ++i) generic.push_back({num(k, 1), num(k, i), num(k, 1L << i)});
  EXPECT_THROW(interpolate_plane_curve(generic, k), KernelEmpty);
}

TEST(Descend, UnitRhoRecoversTheCurve) {
  const auto& r = ref();
  DescentInputs in;
  in.tab = &r.tab;
  in.gb = &r.gb;
  in.eps = &r.eps;
  in.rho = unit_rho();
  in.trivialisation = standard();
  DescentResult res = descend(in);
  EXPECT_TRUE(res.all_passed());
  EXPECT_EQ(res.plane_curve.rank, 9u);
  bool nonzero = false;
  for (const auto& c : res.plane_curve.coeffs) {
    nonzero = nonzero || !c.is_zero();
    EXPECT_EQ(c.field().get(), eisenstein().get());
  }
  EXPECT_TRUE(nonzero);
  for (const auto& p : sample_points(r.tab.curve(), 101, 5))
    EXPECT_TRUE(res.plane_curve({FieldElement::one(p.x.field()), p.x, p.y}).is_zero());
}

TEST(Descend, TwistedRhoWithZTwist) {
  const auto& r = ref();
  RElement z = random_z(77);
  DescentInputs in;
  in.tab = &r.tab;
  in.gb = &r.gb;
  in.eps = &r.eps;
  in.rho = partial(r.tab, z);
  CSA a = build_csa(r.tab, r.eps, in.rho);
  in.trivialisation = trivialize(r.tab, a, in.rho, TrivialisationMode::z_twist, &r.emb, &z);
  DescentResult res = descend(in);
  for (const auto& c : res.report) EXPECT_TRUE(c.passed) << c.name;
  EXPECT_EQ(res.held_out.size(), 5u);
  for (const auto& p : res.held_out) EXPECT_TRUE(res.plane_curve(p).is_zero());
}

TEST(Descend, TamperedTrivialisationFails) {
  const auto& r = ref();
  DescentInputs in;
  in.tab = &r.tab;
  in.gb = &r.gb;
  in.eps = &r.eps;
  in.rho = unit_rho();
  in.trivialisation = standard();
  in.trivialisation.images[2] *= num(eisenstein(), 3);
  EXPECT_THROW(descend(in), CertificationFailed);
}
