#include <CLI11.hpp>

#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ndescent/io/json_io.hpp"

using namespace ndescent;
using io::json;

namespace {

class VerifyFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string curve, rho, triv, mode = "standard", point, z, out;
  std::uint64_t seed = 1;
  int n = 0;
  std::vector<std::string> files;
};

/// Curve, torsion table and the derived objects, computed on first use.
class Context {
 public:
  explicit Context(const Options& o) {
    if (o.curve.empty()) throw io::ParseError("--curve is required");
    cf_ = io::curve_from_json(io::read_json(o.curve));
    if (o.n > 0 && o.n != cf_.n) {
      cf_.n = o.n;
      cf_.hash = io::curve_hash(cf_.curve, cf_.n);
    }
    tab_ = std::make_unique<TorsionTable>(torsion_table(cf_.curve, cf_.n));
  }
  const Curve& curve() const { return cf_.curve; }
  const io::CurveFile& file() const { return cf_; }
  const std::string& hash() const { return cf_.hash; }
  const TorsionTable& tab() const { return *tab_; }
  const TowerPtr& field() const { return cf_.curve.field; }
  const EpsilonTable& eps() {
    if (!eps_) eps_ = compute_epsilon(*tab_);
    return *eps_;
  }
  const GBasis& gb() {
    if (!gb_) gb_ = compute_G_basis(*tab_);
    return *gb_;
  }
  const EmbeddingData& emb(std::uint64_t seed) {
    if (!emb_) emb_ = compute_embedding(*tab_, seed);
    return *emb_;
  }
  RhoTable rho_or_unit(const std::string& path) {
    if (path.empty()) return constant_rho(*tab_, FieldElement::one(field()));
    return io::rho_from_json(io::read_json(path), *tab_, hash());
  }

 private:
  io::CurveFile cf_;
  std::unique_ptr<TorsionTable> tab_;
  std::optional<EpsilonTable> eps_;
  std::optional<GBasis> gb_;
  std::optional<EmbeddingData> emb_;
};

RhoTable validated(const TorsionTable& tab, const RhoTable& rho) {
  RhoReport rep = validate_rho(tab, rho);
  if (!rep.accepted) {
    std::string w;
    for (auto i : rep.witness) w += (w.empty() ? "" : ",") + std::to_string(i);
    throw std::domain_error("rho rejected by the " + rep.criterion + ": " + rep.failure + " fails at (" + w + ")");
  }
  return rep.normalized;
}

json inline_or_file(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '[' || arg.front() == '{')) {
    try {
      return json::parse(arg);
    } catch (const json::parse_error& e) {
      throw io::ParseError(e.what());
    }
  }
  return io::read_json(arg);
}

int cmd_torsion(const Options& o) {
  Context c(o);
  io::write_json(o.out, io::torsion_json(c.tab(), c.hash()));
  return 0;
}

int cmd_quadrics(const Options& o) {
  Context c(o);
  const RhoTable rho = validated(c.tab(), c.rho_or_unit(o.rho));
  io::write_json(o.out, io::quadrics_json(quadrics_for_C(c.tab(), rho), rho, c.hash()));
  return 0;
}

int cmd_algebra(const Options& o) {
  Context c(o);
  const RhoTable rho = validated(c.tab(), c.rho_or_unit(o.rho));
  io::write_json(o.out, io::csa_json(build_csa(c.tab(), c.eps(), rho), rho, c.hash()));
  return 0;
}

int cmd_rho_from_point(const Options& o) {
  Context c(o);
  if (o.point.empty()) throw io::ParseError("--point is required");
  json pj = inline_or_file(o.point);
  if (pj.is_object()) pj = pj.at("point");
  const Point q = io::point_from_json(pj, c.field());
  const RhoTable rho = rho_from_point(c.tab(), q);
  validated(c.tab(), rho);
  io::write_json(o.out, io::rho_json(c.tab(), rho, c.hash()));
  return 0;
}

RElement load_z(Context& c, const std::string& arg) {
  json zj = inline_or_file(arg);
  if (zj.is_object()) {
    if (zj.contains("curve_hash")) io::require_hash(zj, c.hash(), "z file");
    zj = zj.at("z");
  }
  const RElement z = io::vector_from_json(zj, c.field());
  if (z.size() != c.tab().size()) throw io::ParseError("z has the wrong length");
  return z;
}

int cmd_coboundary(const Options& o) {
  Context c(o);
  io::write_json(o.out, io::rho_json(c.tab(), validated(c.tab(), partial(c.tab(), load_z(c, o.z))), c.hash()));
  return 0;
}

int cmd_trivialize(const Options& o) {
  Context c(o);
  const RhoTable rho = validated(c.tab(), c.rho_or_unit(o.rho));
  const CSA a = build_csa(c.tab(), c.eps(), rho);
  Trivialisation t;
  if (o.mode == "standard") {
    t = trivialize(c.tab(), a, rho, TrivialisationMode::standard, &c.emb(o.seed));
  } else if (o.mode == "z-twist") {
    if (o.z.empty()) throw io::ParseError("--z is required for mode z-twist");
    const RElement z = load_z(c, o.z);
    t = trivialize(c.tab(), a, rho, TrivialisationMode::z_twist, &c.emb(o.seed), &z);
  } else if (o.mode == "user") {
    if (o.triv.empty()) throw io::ParseError("--triv is required for mode user");
    const Trivialisation given = io::trivialisation_from_json(io::read_json(o.triv), c.field(), c.hash());
    t = trivialize(c.tab(), a, rho, TrivialisationMode::user, nullptr, nullptr, &given.images);
  } else {
    throw io::ParseError("unknown mode " + o.mode);
  }
  io::write_json(o.out, io::trivialisation_json(t, rho, c.hash()));
  return 0;
}

int cmd_descend(const Options& o) {
  Context c(o);
  if (o.triv.empty()) throw io::ParseError("--triv is required");
  DescentInputs in;
  in.tab = &c.tab();
  in.gb = &c.gb();
  in.eps = &c.eps();
  in.rho = validated(c.tab(), c.rho_or_unit(o.rho));
  in.trivialisation = io::trivialisation_from_json(io::read_json(o.triv), c.field(), c.hash());
  in.seed = o.seed;
  const DescentResult res = descend(in);
  io::write_json(o.out, io::descent_json(res, in.rho, c.hash()));
  return res.all_passed() ? 0 : 3;
}

// ---------------------------------------------------------------------------
// verify

struct Verifier {
  Context& c;
  std::uint64_t seed;
  json checks = json::array();
  bool ok = true;

  void check(const std::string& file, const std::string& name, bool passed, const json& witness = nullptr) {
    json j = {{"file", file}, {"check", name}, {"passed", passed}};
    if (!witness.is_null()) j["witness"] = witness;
    checks.push_back(j);
    ok = ok && passed;
  }

  RhoTable file_rho(const json& j) { return io::grid_from_json(j.at("rho"), c.tab().size(), c.field()); }

  void torsion(const std::string& f, const json& j) {
    TorsionTable t = io::torsion_from_json(j, c.file());
    check(f, "torsion table matches recomputation", t.points() == c.tab().points());
  }

  void rho(const std::string& f, const json& j) {
    RhoReport rep = validate_rho(c.tab(), io::rho_from_json(j, c.tab(), c.hash()));
    check(f, "rho accepted by the " + rep.criterion, rep.accepted,
          rep.accepted ? json(nullptr) : json({{"identity", rep.failure}, {"indices", rep.witness}}));
  }

  void quadrics(const std::string& f, const json& j) {
    const QuadricSystem qs = io::quadrics_from_json(j, c.field(), c.hash());
    const RhoTable r = file_rho(j);
    const std::size_t nn = c.tab().size();
    const std::size_t expected = nn * (nn - 3) / 2;
    check(f, "quadric count", qs.forms.size() == expected, json(qs.forms.size()));
    check(f, "quadric rank", rank(qs.coefficient_matrix(c.field())) == expected);
    RhoReport rep = validate_rho(c.tab(), r);
    check(f, "rho accepted", rep.accepted);
    if (!rep.accepted) return;
    GammaWitness g = solve_gamma(c.tab(), rep.normalized);
    PointSampler s(Curve(g.field, c.curve().a, c.curve().b), seed + 101);
    bool vanish = true;
    for (int i = 0; i < 3; ++i) {
      Vector z = g_eval(c.tab(), c.gb(), &g, s.next_in_extension());
      for (const auto& q : qs.forms) vanish = vanish && q(z).is_zero();
    }
    check(f, "quadrics vanish at 3 sampled points of C", vanish);
  }

  std::optional<CSA> csa(const std::string& f, const json& j) {
    const CSA a = io::csa_from_json(j, c.tab(), c.hash());
    check(f, "algebra associative", a.certificate.associative,
          a.certificate.associative ? json(nullptr) : json(a.certificate.associativity_witness));
    check(f, "unit is delta_O", a.certificate.unit == std::optional<std::size_t>(0));
    check(f, "center dimension 1", a.certificate.center_dimension == 1, json(a.certificate.center_dimension));
    check(f, "trace form nondegenerate", a.certificate.trace_form_rank == a.dim, json(a.certificate.trace_form_rank));
    const RhoTable r = file_rho(j);
    const PairTable expect = pointwise_product(c.eps(), r);
    std::optional<std::array<std::size_t, 2>> bad;
    for (std::size_t x = 0; x < a.dim && !bad; ++x)
      for (std::size_t y = 0; y < a.dim && !bad; ++y)
        if (a.c(x, y) != expect(x, y) || a.add(x, y) != c.tab().add(x, y)) bad = std::array<std::size_t, 2>{x, y};
    check(f, "structure constants equal eps * rho", !bad, bad ? json(*bad) : json(nullptr));
    return a;
  }

  void trivialisation(const std::string& f, const json& j) {
    const Trivialisation t = io::trivialisation_from_json(j, c.field(), c.hash());
    RhoReport rep = validate_rho(c.tab(), file_rho(j));
    check(f, "rho accepted", rep.accepted);
    if (!rep.accepted) return;
    const CSA a = build_csa(c.tab(), c.eps(), rep.normalized);
    if (t.images.size() != a.dim) {
      check(f, "trivialisation image count", false, json(t.images.size()));
      return;
    }
    const TrivialisationCertificate cert = certify(a, t);
    check(f, "trivialisation multiplicative", cert.multiplicative,
          cert.multiplicative ? json(nullptr) : json(cert.witness));
    check(f, "trivialisation unital", cert.unital);
    check(f, "trivialisation spans Mat_n", cert.span_rank == cert.dimension, json(cert.span_rank));
  }

  void descent(const std::string& f, const json& j) {
    io::require_hash(j, c.hash(), "descent file");
    quadrics(f + "#quadrics", j.at("quadrics"));
    csa(f + "#csa", j.at("csa"));
    trivialisation(f + "#trivialisation", j.at("trivialisation"));
    const PlaneCurveEquation eq = io::plane_curve_from_json(j.at("plane_curve"), c.field());
    bool nonzero = false;
    for (const auto& v : eq.coeffs) nonzero = nonzero || !v.is_zero();
    check(f, "plane cubic nonzero", nonzero);
    const Trivialisation t = io::trivialisation_from_json(j.at("trivialisation"), c.field(), c.hash());
    RhoReport rep = validate_rho(c.tab(), file_rho(j));
    if (!rep.accepted || !nonzero) return;
    try {
      GammaWitness g = solve_gamma(c.tab(), rep.normalized);
      CoveringSampler cs(c.tab(), c.gb(), g, t, seed + 7919);
      bool on = true;
      for (int i = 0; i < 5; ++i) on = on && eq(cs.next().factor.column).is_zero();
      check(f, "5 fresh points of C lie on the plane cubic", on);
    } catch (const RankNotOne& e) {
      check(f, "lambda(P) rank 1", false, json(e.what()));
    }
  }

  void run(const std::string& f) {
    const json j = io::read_json(f);
    const std::string kind = j.value("kind", "");
    if (kind == "torsion") torsion(f, j);
    else if (kind == "rho") rho(f, j);
    else if (kind == "quadrics") quadrics(f, j);
    else if (kind == "csa") csa(f, j);
    else if (kind == "trivialisation") trivialisation(f, j);
    else if (kind == "descent") descent(f, j);
    else throw io::ParseError(f + ": unknown artifact kind \"" + kind + "\"");
  }
};

int cmd_verify(const Options& o) {
  Context c(o);
  if (o.files.empty()) throw io::ParseError("verify needs at least one artifact file");
  Verifier v{c, o.seed};
  for (const auto& f : o.files) v.run(f);
  io::write_json(o.out, {{"checks", v.checks}, {"status", v.ok ? "all checks pass" : "verification failed"}});
  if (!v.ok) {
    for (const auto& ch : v.checks)
      if (!ch["passed"].get<bool>()) std::cerr << "verification failed: " << ch.dump() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit n-descent on elliptic curves with split n-torsion"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* s) {
    s->add_option("--curve", o.curve, "curve file")->required();
    s->add_option("--out", o.out, "output file (default stdout)");
    s->add_option("--seed", o.seed, "sampling seed");
    s->add_option("--n", o.n, "override n from the curve file");
  };
  auto* torsion = app.add_subcommand("torsion", "torsion table");
  common(torsion);
  auto* quadrics = app.add_subcommand("quadrics", "quadrics for C in P(R)");
  common(quadrics);
  quadrics->add_option("--rho", o.rho, "rho file (default rho = 1)");
  auto* algebra = app.add_subcommand("algebra", "obstruction algebra A_rho");
  common(algebra);
  algebra->add_option("--rho", o.rho, "rho file (default rho = 1)");
  auto* rfp = app.add_subcommand("rho-from-point", "rho = r(Q) for a rational point Q");
  common(rfp);
  rfp->add_option("--point", o.point, "point file or inline [x, y]")->required();
  auto* cob = app.add_subcommand("coboundary", "rho = dz for a given z");
  common(cob);
  cob->add_option("--z", o.z, "z (file or inline list)")->required();
  auto* triv = app.add_subcommand("trivialize", "trivialisation of A_rho");
  common(triv);
  triv->add_option("--rho", o.rho, "rho file (default rho = 1)");
  triv->add_option("--mode", o.mode, "standard | z-twist | user")->check(CLI::IsMember({"standard", "z-twist", "user"}));
  triv->add_option("--z", o.z, "z for mode z-twist (file or inline list)");
  triv->add_option("--triv", o.triv, "basis images for mode user");
  auto* desc = app.add_subcommand("descend", "plane cubic model of C");
  common(desc);
  desc->add_option("--rho", o.rho, "rho file (default rho = 1)");
  desc->add_option("--triv", o.triv, "trivialisation file")->required();
  auto* ver = app.add_subcommand("verify", "re-check stored artifacts");
  common(ver);
  ver->add_option("files", o.files, "artifact files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    if (*torsion) return cmd_torsion(o);
    if (*quadrics) return cmd_quadrics(o);
    if (*algebra) return cmd_algebra(o);
    if (*rfp) return cmd_rho_from_point(o);
    if (*cob) return cmd_coboundary(o);
    if (*triv) return cmd_trivialize(o);
    if (*desc) return cmd_descend(o);
    if (*ver) return cmd_verify(o);
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return 1;
  } catch (const TorsionNotRational& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CertificationFailed& e) {
    std::cerr << "certification failed: " << e.what();
    if (!e.witness().empty()) {
      std::cerr << " witness";
      for (auto w : e.witness()) std::cerr << " " << w;
    }
    std::cerr << "\n";
    return 3;
  } catch (const RankNotOne& e) {
    std::cerr << "certification failed: " << e.what() << "\n";
    return 3;
  } catch (const KernelEmpty& e) {
    std::cerr << "certification failed: " << e.what() << "\n";
    return 3;
  } catch (const VerifyFailed& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
