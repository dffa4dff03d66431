#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ndescent/io/json_io.hpp"

using namespace ndescent;
using namespace fixtures;
using io::json;

namespace {

struct Reference {
  TorsionTable tab = torsion_table(reference_curve(), 3);
  EpsilonTable eps = compute_epsilon(tab);
  EmbeddingData emb = compute_embedding(tab);
  std::string hash = io::curve_hash(tab.curve(), 3);
};

const Reference& ref() {
  static const Reference r;
  return r;
}

}  // namespace

TEST(Io, ElementsAndTowers) {
  TowerPtr k = eisenstein();
  TowerPtr l = tower_extend(k, Poly(k, {-zeta() - num(k, 2), FieldElement::zero(k), FieldElement::one(k)}), "s");
  FieldElement v = FieldElement::generator(l) * zeta() + FieldElement::rational(l, Rational(3, 7));
  json tj = io::to_json(l);
  TowerPtr l2 = io::tower_from_json(tj);
  EXPECT_EQ(io::to_json(l2), tj);
  EXPECT_EQ(io::to_json(io::element_from_json(io::to_json(v), l2)), io::to_json(v));
  EXPECT_EQ(io::element_from_json("-5/10", k), FieldElement::rational(k, Rational(-1, 2)));
  EXPECT_THROW(io::element_from_json("1/x", k), io::ParseError);
  EXPECT_THROW(io::tower_from_json(json::parse(R"([{"gen":"w","minpoly":["-1","0","1"]}])")), ReducibleExtension);
}

TEST(Io, CurveHashIsStable) {
  io::CurveFile a = io::curve_from_json(io::curve_json(reference_curve(), 3));
  EXPECT_EQ(a.hash, ref().hash);
  EXPECT_NE(io::curve_hash(auxiliary_curve(), 3), ref().hash);
  EXPECT_EQ(io::fnv1a_hex(""), "cbf29ce484222325");
}

TEST(Io, ArtifactRoundTrips) {
  const auto& r = ref();
  io::CurveFile cf{r.tab.curve(), 3, r.hash};
  json tj = io::torsion_json(r.tab, r.hash);
  EXPECT_EQ(io::torsion_from_json(json::parse(tj.dump()), cf).points(), r.tab.points());

  RElement z;
  for (long i = 1; i <= 9; ++i) z.push_back(num(eisenstein(), i) + zeta());
  RhoTable rho = validate_rho(r.tab, partial(r.tab, z)).normalized;
  json rj = io::rho_json(r.tab, rho, r.hash);
  EXPECT_EQ(io::rho_from_json(json::parse(rj.dump()), r.tab, r.hash), rho);

  CSA a = build_csa(r.tab, r.eps, rho);
  json aj = io::csa_json(a, rho, r.hash);
  CSA a2 = io::csa_from_json(json::parse(aj.dump()), r.tab, r.hash);
  EXPECT_EQ(a2.c, a.c);
  EXPECT_EQ(a2.sum, a.sum);
  EXPECT_EQ(io::csa_json(a2, rho, r.hash), aj);

  Trivialisation t = trivialize(r.tab, a, rho, TrivialisationMode::z_twist, &r.emb, &z);
  json trj = io::trivialisation_json(t, rho, r.hash);
  Trivialisation t2 = io::trivialisation_from_json(json::parse(trj.dump()), eisenstein(), r.hash);
  EXPECT_EQ(t2.images, t.images);
  EXPECT_EQ(t2.provenance, "z-twist");

  QuadricSystem qs = quadrics_for_C(r.tab, rho);
  json qj = io::quadrics_json(qs, rho, r.hash);
  QuadricSystem qs2 = io::quadrics_from_json(json::parse(qj.dump()), eisenstein(), r.hash);
  EXPECT_EQ(qs2.coefficient_matrix(eisenstein()), qs.coefficient_matrix(eisenstein()));
  EXPECT_EQ(io::quadrics_json(qs2, rho, r.hash), qj);

  EXPECT_THROW(io::rho_from_json(rj, r.tab, "0000000000000000"), io::HashMismatch);
}
