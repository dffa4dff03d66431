#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "ndescent/algebra/obstruction.hpp"

using namespace ndescent;
using namespace fixtures;

namespace {

struct Reference {
  TorsionTable tab = torsion_table(reference_curve(), 3);
  EpsilonTable eps = compute_epsilon(tab);
  EmbeddingData emb = compute_embedding(tab);
};

const Reference& ref() {
  static const Reference r;
  return r;
}

FieldElement one() { return FieldElement::one(eisenstein()); }

RElement random_z(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RElement z;
  for (int i = 0; i < 9; ++i) {
    FieldElement v;
    do {
      v = num(eisenstein(), static_cast<long>(rng() % 7) - 3) + num(eisenstein(), static_cast<long>(rng() % 7) - 3) * zeta();
    } while (v.is_zero());
    z.push_back(v);
  }
  return z;
}

RhoTable unit_rho() { return constant_rho(ref().tab, one()); }

}  // namespace

TEST(Partial, BasicIdentities) {
  const auto& t = ref().tab;
  EXPECT_EQ(partial(t, constant_element(t, one())), unit_rho());
  RElement z = random_z(1), w = random_z(2), zw;
  for (std::size_t i = 0; i < 9; ++i) zw.push_back(z[i] * w[i]);
  EXPECT_EQ(partial(t, z)(0, 0), z[0]);
  EXPECT_EQ(partial(t, zw), pointwise_product(partial(t, z), partial(t, w)));
  RElement bad = z;
  bad[4] = FieldElement::zero(eisenstein());
  EXPECT_THROW(partial(t, bad), std::domain_error);
}

TEST(ValidateRho, AcceptsCoboundariesAndRejectsTampering) {
  const auto& t = ref().tab;
  EXPECT_TRUE(validate_rho(t, unit_rho()).accepted);
  RhoTable dz = partial(t, random_z(3));
  RhoReport rep = validate_rho(t, dz);
  EXPECT_TRUE(rep.accepted);
  EXPECT_EQ(rep.criterion, "split-torsion criterion");
  EXPECT_EQ(rep.normalized(0, 0), one());
  RhoTable bad = rep.normalized;
  bad(4, 5) *= num(eisenstein(), 2);
  bad(5, 4) *= num(eisenstein(), 2);
  RhoReport r2 = validate_rho(t, bad);
  EXPECT_FALSE(r2.accepted);
  EXPECT_EQ(r2.failure, "cocycle");
  ASSERT_EQ(r2.witness.size(), 3u);
  const auto& w = r2.witness;
  EXPECT_NE(bad(w[0], w[1]) * bad(t.add(w[0], w[1]), w[2]), bad(w[0], t.add(w[1], w[2])) * bad(w[1], w[2]));
  RhoTable asym = rep.normalized;
  asym(4, 5) *= num(eisenstein(), 2);
  EXPECT_EQ(validate_rho(t, asym).failure, "symmetry");
}

TEST(Csa, UnitAlgebraCertified) {
  const auto& r = ref();
  CSA a = build_csa(r.tab, r.eps, unit_rho());
  EXPECT_TRUE(a.certificate.associative);
  ASSERT_TRUE(a.certificate.unit.has_value());
  EXPECT_EQ(*a.certificate.unit, 0u);
  EXPECT_EQ(a.certificate.center_dimension, 1u);
  EXPECT_EQ(a.certificate.trace_form_rank, 9u);
  for (std::size_t x = 0; x < 9; ++x)
    for (std::size_t y = 0; y < 9; ++y) {
      Vector dx(9, FieldElement::zero(eisenstein())), dy = dx, expect = dx;
      dx[x] = one();
      dy[y] = one();
      expect[r.tab.add(x, y)] = r.eps(x, y);
      EXPECT_EQ(a.multiply(dx, dy), expect);
    }
}

TEST(Csa, ReducedTraceMatchesMatrixTrace) {
  const auto& r = ref();
  CSA a = build_csa(r.tab, r.eps, unit_rho());
  for (std::size_t t = 0; t < 9; ++t) {
    Vector d(9, FieldElement::zero(eisenstein()));
    d[t] = one();
    EXPECT_EQ(a.reduced_trace(d), r.emb.M[t].trace());
  }
}

TEST(Csa, TwistsAreIsomorphic) {
  const auto& r = ref();
  CSA a1 = build_csa(r.tab, r.eps, unit_rho());
  for (std::uint64_t s = 10; s < 13; ++s) {
    RElement z = random_z(s);
    const FieldElement inv = z[0].inverse();
    for (auto& v : z) v *= inv;
    CSA az = build_csa(r.tab, r.eps, partial(r.tab, z));
    EXPECT_TRUE(az.certificate.ok());
    EXPECT_FALSE(intertwining_failure(az, a1, z).has_value());
    RElement wrong = z;
    wrong[3] *= num(eisenstein(), 2);
    EXPECT_TRUE(intertwining_failure(az, a1, wrong).has_value());
  }
}

TEST(Csa, NonAssociativeTableRejected) {
  const auto& r = ref();
  RhoTable bad = unit_rho();
  bad(4, 5) = num(eisenstein(), 2);
  bad(5, 4) = num(eisenstein(), 2);
  EXPECT_THROW(build_csa(r.tab, r.eps, bad), CertificationFailed);
}

TEST(Gamma, SolvesCoboundariesAndUnit) {
  const auto& r = ref();
  GammaWitness g1 = solve_gamma(r.tab, unit_rho());
  EXPECT_EQ(g1.field.get(), eisenstein().get());
  for (const auto& v : g1.gamma) EXPECT_TRUE(v.is_one());
  RElement z = random_z(21);
  const FieldElement inv = z[0].inverse();
  for (auto& v : z) v *= inv;
  RhoTable rho = partial(r.tab, z);
  GammaWitness g = solve_gamma(r.tab, rho);
  EXPECT_TRUE(g.gamma[0].is_one());
  for (std::size_t a = 0; a < 9; ++a)
    for (std::size_t b = 0; b < 9; ++b) EXPECT_EQ(g.gamma[a] * g.gamma[b] / g.gamma[r.tab.add(a, b)], rho(a, b));
}

TEST(Trivialise, StandardTwistAndUser) {
  const auto& r = ref();
  const TowerPtr k = eisenstein();
  CSA a1 = build_csa(r.tab, r.eps, unit_rho());
  Trivialisation std1 = trivialize(r.tab, a1, unit_rho(), TrivialisationMode::standard, &r.emb);
  EXPECT_EQ(std1.provenance, "standard-tau1");
  EXPECT_TRUE(certify(a1, std1).ok());
  for (std::size_t t = 1; t < 9; ++t) EXPECT_TRUE(std1.images[t].trace().is_zero());

  RElement ones = constant_element(r.tab, one());
  Trivialisation tw1 = trivialize(r.tab, a1, unit_rho(), TrivialisationMode::z_twist, &r.emb, &ones);
  EXPECT_EQ(tw1.images, std1.images);

  RElement z = random_z(30);
  RhoTable rho = validate_rho(r.tab, partial(r.tab, z)).normalized;
  CSA az = build_csa(r.tab, r.eps, rho);
  Trivialisation tz = trivialize(r.tab, az, rho, TrivialisationMode::z_twist, &r.emb, &z);
  EXPECT_TRUE(certify(az, tz).ok());

  // conjugation by diag(1, 1, 2) preserves the ring structure
  ExactMatrix d = ExactMatrix::identity(k, 3);
  d(2, 2) = num(k, 2);
  const ExactMatrix di = inverse(d);
  std::vector<ExactMatrix> conj;
  for (const auto& m : std1.images) conj.push_back(d * m * di);
  Trivialisation user = trivialize(r.tab, a1, unit_rho(), TrivialisationMode::user, nullptr, nullptr, &conj);
  EXPECT_EQ(user.provenance, "user-supplied");

  // a scaled image breaks multiplicativity
  conj[4] *= num(k, 2);
  try {
    trivialize(r.tab, a1, unit_rho(), TrivialisationMode::user, nullptr, nullptr, &conj);
    FAIL() << "tampered trivialisation accepted";
  } catch (const CertificationFailed& e) {
    ASSERT_EQ(e.witness().size(), 2u);
    const std::size_t x = e.witness()[0], y = e.witness()[1];
    EXPECT_TRUE(x == 4 || y == 4 || r.tab.add(x, y) == 4);
    EXPECT_NE(conj[x] * conj[y], conj[r.tab.add(x, y)] * a1.c(x, y));
  }
}

TEST(RhoFromPoint, AuxiliaryCurve) {
  const Curve e = auxiliary_curve();
  TorsionTable tab = torsion_table(e, 3);
  const Point q = auxiliary_point();
  RhoTable rho = rho_from_point(tab, q);
  for (std::size_t t = 0; t < 9; ++t) EXPECT_TRUE(rho(0, t).is_one());
  RhoReport rep = validate_rho(tab, rho);
  EXPECT_TRUE(rep.accepted) << rep.failure;
  EpsilonTable eps = compute_epsilon(tab);
  CSA a = build_csa(tab, eps, rep.normalized);
  EXPECT_TRUE(a.certificate.ok());
  GammaWitness g = solve_gamma(tab, rep.normalized);
  for (std::size_t x = 0; x < 9; ++x)
    for (std::size_t y = 0; y < 9; ++y) EXPECT_EQ(g.gamma[x] * g.gamma[y] / g.gamma[tab.add(x, y)], rep.normalized(x, y));
  EXPECT_THROW(rho_from_point(tab, tab.point(3)), std::domain_error);
}
