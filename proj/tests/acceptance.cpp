// One line per acceptance criterion on y^2 = x^3 - 432 over Q(zeta_3), n = 3.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "fixtures.hpp"
#include "ndescent/io/json_io.hpp"

using namespace ndescent;
using namespace fixtures;

namespace {

int failures = 0;

void report(int id, const std::string& name, const std::function<std::string()>& body) {
  std::string detail;
  bool ok = false;
  try {
    detail = body();
    ok = true;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << " " << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Point> sample_points(const Curve& e, std::uint64_t seed, int count) {
  PointSampler s(e, seed);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) out.push_back(s.next_in_extension());
  return out;
}

RElement random_z(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RElement z{FieldElement::one(eisenstein())};
  while (z.size() < 9) {
    FieldElement v = num(eisenstein(), static_cast<long>(rng() % 9) - 4) + num(eisenstein(), static_cast<long>(rng() % 9) - 4) * zeta();
    if (!v.is_zero()) z.push_back(v);
  }
  return z;
}

// Pointwise Miller function value f_{n,P}(Q), div f = n(P) - n(O), from line values only.
FieldElement miller_value(const Curve& e, const Point& p, int n, const Point& q) {
  auto line = [&](const Point& a, const Point& b) -> FieldElement {
    if (point_add(e, a, b).inf) return q.x - a.x;
    FieldElement l = slope(e, a, b);
    return q.y - a.y - l * (q.x - a.x);
  };
  auto vert = [&](const Point& r) -> FieldElement { return r.inf ? FieldElement::one(q.x.field()) : q.x - r.x; };
  FieldElement f = FieldElement::one(q.x.field());
  Point r = p;
  int top = 0;
  while ((n >> (top + 1)) > 0) ++top;
  for (int bit = top - 1; bit >= 0; --bit) {
    Point r2 = point_add(e, r, r);
    f = f * f * line(r, r) / vert(r2);
    r = r2;
    if ((n >> bit) & 1) {
      Point rp = point_add(e, r, p);
      f = f * line(r, p) / vert(rp);
      r = rp;
    }
  }
  return f;
}

// [f_P(Q + S) / f_P(S)] / [f_Q(P - S) / f_Q(-S)].
FieldElement miller_pairing(const Curve& e, const Point& p, const Point& q, int n, const Point& s) {
  FieldElement a = miller_value(e, p, n, point_add(e, q, s)) / miller_value(e, p, n, s);
  FieldElement b = miller_value(e, q, n, point_sub(e, p, s)) / miller_value(e, q, n, point_neg(e, s));
  return a / b;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(NDESCENT_CLI) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

int main() {
  const TowerPtr k = eisenstein();
  const FieldElement one = FieldElement::one(k);
  const Curve e = reference_curve();

  auto t0 = std::chrono::steady_clock::now();
  const TorsionTable tab = torsion_table(e, 3);
  const double torsion_time = seconds_since(t0);
  const GBasis gb = compute_G_basis(tab);
  const EpsilonTable eps = compute_epsilon(tab);
  const EmbeddingData emb = compute_embedding(tab);
  const RhoTable unit = constant_rho(tab, one);

  report(1, "torsion", [&] {
    require(tab.size() == 9, "table size");
    // oracle: x in {0, 12, 12 zeta, 12 zeta^2} from 3x(x^3 - 1728), y^2 = x^3 - 432
    const FieldElement w = num(k, 12) * (num(k, 2) * zeta() + one);
    std::vector<Point> expect = {Point::O(), Point::affine(num(k, 0), w), Point::affine(num(k, 0), -w)};
    for (const auto& x : {num(k, 12), num(k, 12) * zeta(), num(k, 12) * zeta() * zeta()}) {
      require((x.pow(3) - num(k, 1728)).is_zero(), "x^3 = 1728");
      expect.push_back(Point::affine(x, num(k, 36)));
      expect.push_back(Point::affine(x, num(k, -36)));
    }
    for (const auto& p : expect) require(tab.find(p).has_value(), "missing " + to_string(p));
    const FieldElement e12 = tab.weil_pairing(tab.basis1(), tab.basis2());
    require(!e12.is_one() && e12.pow(3).is_one(), "basis pairing order");
    require(e12 == zeta() || e12 == zeta() * zeta(), "basis pairing in {zeta, zeta^2}");
    require(torsion_time < 5.0, "time");
    bool closed = true;
    for (std::size_t a = 0; a < 9; ++a)
      for (std::size_t b = 0; b < 9; ++b) closed = closed && point_add(e, tab.point(a), tab.point(b)) == tab.point(tab.add(a, b));
    require(closed, "closure");
    return "9 points, e3(T1,T2) = " + e12.to_string() + ", " + std::to_string(torsion_time) + " s";
  });

  report(2, "G-basis", [&] {
    require(gb.G[0] == FunctionFieldElement::constant(tab.curve_ptr(), one), "G_O = 1");
    for (std::size_t t = 1; t < 9; ++t) {
      LaurentSeries s = laurent_at_O(gb.G[t], 1);
      require(s.valuation == -1 && s.leading() == FieldElement::rational(k, Rational(1, 3)), "residue 1/3");
    }
    std::mt19937_64 rng(2024);
    const auto pts = sample_points(e, 202, 3);
    int checks = 0;
    for (int pair = 0; pair < 10; ++pair) {
      const std::size_t a = rng() % 9, b = rng() % 9;
      for (const auto& p : pts) {
        require(r_eval(tab, a, b, point_mul(e, 3, p)) == gb.G[a](p) * gb.G[b](p) / gb.G[tab.add(a, b)](p), "r(3P)");
        ++checks;
      }
    }
    return "G_O = 1, 8 residues 1/3, " + std::to_string(checks) + " r(3P) identities";
  });

  report(3, "quadrics", [&] {
    const QuadricSystem qs = quadrics_for_E(tab);
    require(qs.forms.size() == 27, "count");
    require(rank(qs.coefficient_matrix(k)) == 27, "rank");
    for (const auto& p : sample_points(e, 303, 3)) {
      const Vector z = g_eval(tab, gb, nullptr, p);
      for (const auto& q : qs.forms) require(q(z).is_zero(), "vanishing at g_E(P)");
    }
    const RhoTable rho = partial(tab, random_z(31));
    const QuadricSystem qt = quadrics_for_C(tab, rho);
    const GammaWitness g = solve_gamma(tab, rho);
    for (const auto& p : sample_points(e, 304, 3)) {
      const Vector z = g_eval(tab, gb, &g, p);
      for (const auto& q : qt.forms) require(q(z).is_zero(), "vanishing at gamma-twisted images");
    }
    return "27 forms (3 + 24), rank 27, vanish at 3 g_E images and 3 twisted images";
  });

  report(4, "epsilon and M_T", [&] {
    const Point s = sample_points(e, 404, 1).front();
    for (std::size_t a = 0; a < 9; ++a)
      for (std::size_t b = 0; b < 9; ++b) {
        const FieldElement ratio = eps(a, b) / eps(b, a);
        require(ratio == tab.weil_pairing(a, b), "ratio");
        require(ratio == gb.character(tab, a, b), "translation character of G_T");
        if (a == 0 || b == 0 || a == b) {
          require(ratio.is_one(), "trivial pairs");
          continue;
        }
        // orientation: the Miller quotient above is the inverse of e(S, T) = G_T(P + S) / G_T(P)
        require(ratio * miller_pairing(e, tab.point(a), tab.point(b), 3, s) == one, "Miller oracle");
      }
    require(emb.M[0] == ExactMatrix::identity(k, 3), "M_O = I");
    for (std::size_t t = 1; t < 9; ++t) require(emb.M[t].trace().is_zero(), "trace");
    for (std::size_t a = 0; a < 9; ++a)
      for (std::size_t b = 0; b < 9; ++b) require(emb.M[a] * emb.M[b] == emb.M[tab.add(a, b)] * eps(a, b), "M product");
    ExactMatrix stack(k, 9, 9);
    for (std::size_t t = 0; t < 9; ++t)
      for (std::size_t i = 0; i < 9; ++i) stack(t, i) = emb.M[t](i / 3, i % 3);
    require(rank(stack) == 9, "rank");
    return "81 ratios = e3 (Miller oracle on 56 pairs), M_O = I, 8 traces 0, 81 products, rank 9";
  });

  report(5, "tau_1 certification", [&] {
    const CSA a1 = build_csa(tab, eps, unit);
    const Trivialisation t = trivialize(tab, a1, unit, TrivialisationMode::standard, &emb);
    const TrivialisationCertificate tc = certify(a1, t);
    require(tc.multiplicative && tc.unital && tc.span_rank == 9, "tau_1");
    const CSACertificate& c = a1.certificate;
    require(c.associative && c.unit == std::optional<std::size_t>(0) && c.center_dimension == 1 && c.trace_form_rank == 9,
            "A_1");
    return "81 products, associative on 729 triples, unit delta_O, center dim 1, trace form rank 9";
  });

  report(6, "Segre factorisation of lambda_E", [&] {
    for (const auto& p : sample_points(e, 606, 3)) {
      const Vector g = g_eval(tab, gb, nullptr, p);
      ExactMatrix lam = emb.M[1] * g[1];
      for (std::size_t t = 2; t < 9; ++t) lam += emb.M[t] * g[t];
      require(lam.trace().is_zero(), "trace 0");
      require(rank(lam) == 1, "rank 1");
      const ExactMatrix segre = ExactMatrix::column(emb.f(p)) * ExactMatrix::row(f_dual(e, p));
      require(projectively_equal(lam, segre), "f_E(P) f_E^v(P)");
    }
    return "3 points: rank 1, trace 0, equal to f_E(P) f_E^v(P)";
  });

  report(7, "g_E and F_T compatibility", [&] {
    for (const auto& p : sample_points(e, 707, 3)) {
      const RhoTable d = partial(tab, g_eval(tab, gb, nullptr, p));
      const Point p3 = point_mul(e, 3, p);
      for (std::size_t a = 0; a < 9; ++a)
        for (std::size_t b = 0; b < 9; ++b) require(d(a, b) == r_eval(tab, a, b, p3), "d g = r(3P)");
      for (std::size_t t = 0; t < 9; ++t) require(tab.F(t)(p3) == gb.G[t](p).pow(3), "F_T o [3] = G_T^3");
    }
    return "3 points x 81 components, F_T o [3] = G_T^3 for 9 T at 3 points";
  });

  report(8, "z-twist coherence", [&] {
    const CSA a1 = build_csa(tab, eps, unit);
    for (std::uint64_t s = 801; s < 804; ++s) {
      const RElement z = random_z(s);
      const CSA az = build_csa(tab, eps, partial(tab, z));
      require(az.certificate.ok(), "A_dz certified");
      require(!intertwining_failure(az, a1, z).has_value(), "alpha -> z alpha intertwines");
    }
    return "3 random z: A_dz certified, intertwined with A_1 on 81 pairs";
  });

  report(9, "end-to-end descent", [&] {
    const auto t9 = std::chrono::steady_clock::now();
    const RElement z = random_z(901);
    DescentInputs in;
    in.tab = &tab;
    in.gb = &gb;
    in.eps = &eps;
    in.rho = partial(tab, z);
    const CSA az = build_csa(tab, eps, in.rho);
    in.trivialisation = trivialize(tab, az, in.rho, TrivialisationMode::z_twist, &emb, &z);
    in.seed = 9;
    const DescentResult res = descend(in);
    require(res.all_passed(), "report");
    require(res.plane_curve.rank == 9, "kernel dimension 1");
    bool nonzero = false;
    for (const auto& c : res.plane_curve.coeffs) {
      nonzero = nonzero || !c.is_zero();
      require(c.field().get() == k.get(), "coefficients in Q(zeta)");
    }
    require(nonzero, "nonzero cubic");
    require(res.held_out.size() == 5, "held-out count");
    for (const auto& p : res.held_out) require(res.plane_curve(p).is_zero(), "held-out");

    in.rho = unit;
    in.trivialisation = trivialize(tab, build_csa(tab, eps, unit), unit, TrivialisationMode::standard, &emb);
    const DescentResult r1 = descend(in);
    require(r1.all_passed(), "report rho = 1");
    for (const auto& p : sample_points(e, 909, 5)) require(r1.plane_curve({FieldElement::one(p.x.field()), p.x, p.y}).is_zero(), "(1 : x : y)");
    const double secs = seconds_since(t9);
    require(secs < 300.0, "time");
    return "rank 9, 5 held-out points, rho = 1 cubic vanishes on 5 points (1 : x : y), " + std::to_string(secs) + " s";
  });

  report(10, "rho = r(Q) on the auxiliary curve", [&] {
    const Curve ea = auxiliary_curve();
    const TorsionTable ta = torsion_table(ea, 3);
    const Point q = auxiliary_point();
    require(!point_mul(ea, 3, q).is_O(), "Q non-torsion");
    const RhoTable rho = rho_from_point(ta, q);
    const RhoReport rep = validate_rho(ta, rho);
    require(rep.accepted, "validate_rho");
    const CSA a = build_csa(ta, compute_epsilon(ta), rep.normalized);
    require(a.certificate.ok(), "certified");
    const GammaWitness g = solve_gamma(ta, rep.normalized);
    for (std::size_t x = 0; x < 9; ++x)
      for (std::size_t y = 0; y < 9; ++y)
        require(g.gamma[x] * g.gamma[y] / g.gamma[ta.add(x, y)] == rep.normalized(x, y), "d gamma = rho");
    return "accepted, certified, d gamma = rho on 81 pairs over a degree-" + std::to_string(g.field->degree()) + " field";
  });

  report(11, "negative tests", [&] {
    RhoTable bad = partial(tab, random_z(1101));
    bad(4, 5) *= num(k, 2);
    bad(5, 4) *= num(k, 2);
    const RhoReport rep = validate_rho(tab, bad);
    require(!rep.accepted && rep.witness.size() == 3, "tampered rho rejected with witness");

    const CSA a1 = build_csa(tab, eps, unit);
    std::vector<ExactMatrix> imgs = emb.M;
    imgs[4] *= num(k, 2);
    bool rejected = false;
    try {
      trivialize(tab, a1, unit, TrivialisationMode::user, nullptr, nullptr, &imgs);
    } catch (const CertificationFailed&) {
      rejected = true;
    }
    require(rejected, "tampered trivialisation certified");
    Trivialisation tt{imgs, "user-supplied"};
    bool rank_fail = false;
    try {
      lambda_eval(tt, g_eval(tab, gb, nullptr, sample_points(e, 1111, 1).front()));
    } catch (const RankNotOne&) {
      rank_fail = true;
    }
    require(rank_fail, "RankNotOne");

    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("ndescent_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string curve = std::string(NDESCENT_DATA) + "/eisenstein_432.json";
    const std::string triv = (dir / "triv.json").string();
    require(run_cli("trivialize --curve " + curve + " --mode standard --out " + triv) == 0, "cli trivialize");
    require(run_cli("verify --curve " + curve + " " + triv) == 0, "cli verify untampered");
    io::json j = io::read_json(triv);
    j["images"][3][0][1] = io::json::array({"99", "0"});
    const std::string tampered = (dir / "triv_bad.json").string();
    io::write_json(tampered, j);
    const int rc = run_cli("verify --curve " + curve + " " + tampered);
    fs::remove_all(dir);
    require(rc == 3, "cli verify exit " + std::to_string(rc));
    return "rho witness (" + rep.failure + "), CertificationFailed, RankNotOne, verify exit 3";
  });

  std::cout << (failures == 0 ? "all 11 criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
  return failures == 0 ? 0 : 1;
}
