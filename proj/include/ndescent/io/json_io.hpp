#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ndescent/geometry/geometry.hpp"

namespace ndescent::io {

using nlohmann::json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HashMismatch : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------
// Exact elements and towers.

inline json to_json(const FieldElement& e) {
  json a = json::array();
  for (const auto& c : e.coords()) a.push_back(format_rational(c));
  return a;
}

inline Rational rational_from_string(const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

inline FieldElement element_from_json(const json& j, const TowerPtr& k) {
  if (j.is_string()) return FieldElement::rational(k, rational_from_string(j.get<std::string>()));
  if (j.is_number_integer()) return FieldElement::integer(k, j.get<long>());
  if (!j.is_array()) throw ParseError("element must be a coordinate array");
  if (j.size() > k->degree()) throw ParseError("element has more coordinates than the field degree");
  std::vector<Rational> c(k->degree());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string() && !j[i].is_number_integer()) throw ParseError("coordinate must be a rational string");
    c[i] = j[i].is_string() ? rational_from_string(j[i].get<std::string>()) : Rational(j[i].get<long>());
  }
  return FieldElement::from_coords(k, std::move(c));
}

inline json to_json(const TowerPtr& k) {
  std::vector<TowerPtr> levels;
  for (TowerPtr t = k; t->level() > 0; t = t->base()) levels.insert(levels.begin(), t);
  json out = json::array();
  for (const auto& t : levels) {
    json mp = json::array();
    for (const auto& c : t->minpoly())
      if (t->base()->level() == 0) mp.push_back(format_rational(c.rational_value()));
      else mp.push_back(to_json(c));
    out.push_back({{"gen", t->generator_name()}, {"minpoly", mp}});
  }
  return out;
}

inline TowerPtr tower_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("field must be a list of levels");
  TowerPtr k = Tower::rationals();
  for (const auto& lvl : j) {
    if (!lvl.is_object() || !lvl.contains("gen") || !lvl.contains("minpoly") || !lvl["minpoly"].is_array())
      throw ParseError("field level needs \"gen\" and \"minpoly\"");
    std::vector<FieldElement> c;
    for (const auto& x : lvl["minpoly"]) c.push_back(element_from_json(x, k));
    if (c.size() < 2) throw ParseError("minimal polynomial must have positive degree");
    if (!c.back().is_one()) throw ParseError("minimal polynomial must be monic");
    k = tower_extend(k, Poly(k, c), lvl["gen"].get<std::string>());
  }
  return k;
}

// ---------------------------------------------------------------------------
// Curves.

struct CurveFile {
  Curve curve;
  int n = 3;
  std::string hash;
};

inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline json curve_json(const Curve& e, int n) {
  return {{"field", to_json(e.field)}, {"a", to_json(e.a)}, {"b", to_json(e.b)}, {"n", n}};
}

inline std::string curve_hash(const Curve& e, int n) { return fnv1a_hex(curve_json(e, n).dump()); }

inline CurveFile curve_from_json(const json& j) {
  if (!j.is_object() || !j.contains("field") || !j.contains("a") || !j.contains("b"))
    throw ParseError("curve file needs \"field\", \"a\", \"b\"");
  CurveFile cf;
  TowerPtr k = tower_from_json(j["field"]);
  cf.curve = Curve(k, element_from_json(j["a"], k), element_from_json(j["b"], k));
  cf.n = j.value("n", 3);
  cf.hash = curve_hash(cf.curve, cf.n);
  return cf;
}

inline void require_hash(const json& j, const std::string& hash, const std::string& what) {
  if (!j.contains("curve_hash")) throw ParseError(what + " has no curve_hash");
  if (j["curve_hash"].get<std::string>() != hash)
    throw HashMismatch(what + " belongs to a different curve (hash " + j["curve_hash"].get<std::string>() + ", expected " +
                       hash + ")");
}

// ---------------------------------------------------------------------------
// Points, tables, grids, matrices.

inline json to_json(const Point& p) {
  if (p.is_O()) return "O";
  return json::array({to_json(p.x), to_json(p.y)});
}

inline Point point_from_json(const json& j, const TowerPtr& k) {
  if (j.is_string() && j.get<std::string>() == "O") return Point::O();
  if (!j.is_array() || j.size() != 2) throw ParseError("point must be \"O\" or [x, y]");
  return Point::affine(element_from_json(j[0], k), element_from_json(j[1], k));
}

inline json torsion_json(const TorsionTable& tab, const std::string& hash) {
  json pts = json::array();
  for (const auto& p : tab.points()) pts.push_back(to_json(p));
  return {{"kind", "torsion"}, {"curve_hash", hash}, {"n", tab.n()}, {"basis", {tab.basis1(), tab.basis2()}},
          {"points", pts}};
}

inline TorsionTable torsion_from_json(const json& j, const CurveFile& cf) {
  require_hash(j, cf.hash, "torsion table");
  std::vector<Point> pts;
  for (const auto& p : j.at("points")) pts.push_back(point_from_json(p, cf.curve.field));
  return TorsionTable::from_points(cf.curve, j.at("n").get<int>(), std::move(pts));
}

inline json grid_json(const PairTable& t) {
  json g = json::array();
  for (std::size_t a = 0; a < t.size; ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < t.size; ++b) row.push_back(to_json(t(a, b)));
    g.push_back(row);
  }
  return g;
}

inline PairTable grid_from_json(const json& g, std::size_t size, const TowerPtr& k) {
  if (!g.is_array() || g.size() != size) throw ParseError("grid must have " + std::to_string(size) + " rows");
  PairTable t(size, FieldElement::one(k));
  for (std::size_t a = 0; a < size; ++a) {
    if (!g[a].is_array() || g[a].size() != size) throw ParseError("grid row of the wrong length");
    for (std::size_t b = 0; b < size; ++b) t(a, b) = element_from_json(g[a][b], k);
  }
  return t;
}

inline json vector_json(const Vector& v) {
  json a = json::array();
  for (const auto& e : v) a.push_back(to_json(e));
  return a;
}

inline Vector vector_from_json(const json& j, const TowerPtr& k) {
  if (!j.is_array()) throw ParseError("expected a list of elements");
  Vector v;
  for (const auto& e : j) v.push_back(element_from_json(e, k));
  return v;
}

inline json matrix_json(const ExactMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row_vector(i)));
  return rows;
}

inline ExactMatrix matrix_from_json(const json& j, const TowerPtr& k) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty list of rows");
  ExactMatrix m(k, j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != m.cols()) throw ParseError("ragged matrix");
    for (std::size_t c = 0; c < m.cols(); ++c) m(i, c) = element_from_json(j[i][c], k);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Artifacts.

inline json rho_json(const TorsionTable& tab, const RhoTable& rho, const std::string& hash) {
  return {{"kind", "rho"}, {"curve_hash", hash}, {"basis", {tab.basis1(), tab.basis2()}}, {"entries", grid_json(rho)}};
}

inline RhoTable rho_from_json(const json& j, const TorsionTable& tab, const std::string& hash) {
  require_hash(j, hash, "rho file");
  if (j.contains("basis") && j["basis"] != json({tab.basis1(), tab.basis2()}))
    throw ParseError("rho file uses a different torsion basis");
  return grid_from_json(j.at("entries"), tab.size(), tab.curve().field);
}

inline json certificate_json(const CSACertificate& c) {
  json j = {{"associative", c.associative},
            {"unit", c.unit ? json(*c.unit) : json(nullptr)},
            {"center_dimension", c.center_dimension},
            {"trace_form_rank", c.trace_form_rank},
            {"dimension", c.dimension},
            {"passed", c.ok()}};
  if (!c.associativity_witness.empty()) j["associativity_witness"] = c.associativity_witness;
  return j;
}

inline json csa_json(const CSA& a, const RhoTable& rho, const std::string& hash) {
  json sum = json::array();
  for (std::size_t x = 0; x < a.dim; ++x) {
    json row = json::array();
    for (std::size_t y = 0; y < a.dim; ++y) row.push_back(a.add(x, y));
    sum.push_back(row);
  }
  return {{"kind", "csa"},           {"curve_hash", hash},  {"dimension", a.dim},
          {"rho", grid_json(rho)},   {"sum", sum},          {"structure_constants", grid_json(a.c)},
          {"certificate", certificate_json(a.certificate)}};
}

/// Structure constants as stored; the certificate is recomputed, not read.
inline CSA csa_from_json(const json& j, const TorsionTable& tab, const std::string& hash) {
  require_hash(j, hash, "algebra file");
  CSA a;
  a.field = tab.curve().field;
  a.dim = j.at("dimension").get<std::size_t>();
  if (a.dim != tab.size()) throw ParseError("algebra dimension does not match the torsion table");
  for (const auto& row : j.at("sum"))
    for (const auto& v : row) a.sum.push_back(v.get<std::size_t>());
  if (a.sum.size() != a.dim * a.dim) throw ParseError("addition table of the wrong size");
  a.c = grid_from_json(j.at("structure_constants"), a.dim, a.field);
  a.certificate = certify(a);
  return a;
}

inline json trivialisation_json(const Trivialisation& t, const RhoTable& rho, const std::string& hash) {
  json imgs = json::array();
  for (const auto& m : t.images) imgs.push_back(matrix_json(m));
  return {{"kind", "trivialisation"}, {"curve_hash", hash}, {"provenance", t.provenance}, {"rho", grid_json(rho)},
          {"images", imgs}};
}

inline Trivialisation trivialisation_from_json(const json& j, const TowerPtr& k, const std::string& hash) {
  require_hash(j, hash, "trivialisation file");
  Trivialisation t;
  t.provenance = j.value("provenance", "user-supplied");
  for (const auto& m : j.at("images")) t.images.push_back(matrix_from_json(m, k));
  return t;
}

inline json quadrics_json(const QuadricSystem& qs, const RhoTable& rho, const std::string& hash) {
  json forms = json::array();
  for (const auto& q : qs.forms) {
    json terms = json::array();
    for (const auto& t : q.terms) terms.push_back({{"i", t.i}, {"j", t.j}, {"c", to_json(t.coeff)}});
    forms.push_back(terms);
  }
  return {{"kind", "quadrics"}, {"curve_hash", hash}, {"labels", qs.labels}, {"group1", qs.group1},
          {"rho", grid_json(rho)},  {"forms", forms}};
}

inline QuadricSystem quadrics_from_json(const json& j, const TowerPtr& k, const std::string& hash) {
  require_hash(j, hash, "quadric file");
  QuadricSystem qs;
  qs.labels = j.at("labels").get<std::vector<std::string>>();
  qs.dim = qs.labels.size();
  qs.group1 = j.at("group1").get<std::size_t>();
  for (const auto& f : j.at("forms")) {
    Quadric q;
    for (const auto& t : f) {
      const std::size_t i = t.at("i").get<std::size_t>(), jj = t.at("j").get<std::size_t>();
      if (i >= qs.dim || jj >= qs.dim) throw ParseError("quadric term index out of range");
      q.add(i, jj, element_from_json(t.at("c"), k));
    }
    qs.forms.push_back(std::move(q));
  }
  return qs;
}

inline json plane_curve_json(const PlaneCurveEquation& eq) {
  json mons = json::array();
  for (const auto& m : eq.monomials) mons.push_back({m[0], m[1], m[2]});
  return {{"monomials", mons}, {"coeffs", vector_json(eq.coeffs)}, {"rank", eq.rank}};
}

inline PlaneCurveEquation plane_curve_from_json(const json& j, const TowerPtr& k) {
  PlaneCurveEquation eq;
  for (const auto& m : j.at("monomials")) eq.monomials.push_back({m.at(0).get<int>(), m.at(1).get<int>(), m.at(2).get<int>()});
  eq.coeffs = vector_from_json(j.at("coeffs"), k);
  if (eq.coeffs.size() != eq.monomials.size()) throw ParseError("plane curve coefficient count mismatch");
  eq.rank = j.value("rank", 0u);
  return eq;
}

inline json report_json(const std::vector<Check>& report) {
  json r = json::array();
  for (const auto& c : report) r.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return r;
}

inline json descent_json(const DescentResult& res, const RhoTable& rho, const std::string& hash) {
  bool all = res.all_passed();
  return {{"kind", "descent"},
          {"curve_hash", hash},
          {"rho", grid_json(rho)},
          {"quadrics", quadrics_json(res.quadrics, rho, hash)},
          {"csa", csa_json(res.csa, rho, hash)},
          {"trivialisation", trivialisation_json(res.trivialisation, rho, hash)},
          {"plane_curve", plane_curve_json(res.plane_curve)},
          {"report", report_json(res.report)},
          {"status", all ? "all checks pass" : "some checks failed"},
          {"seed", res.seed}};
}

// ---------------------------------------------------------------------------
// Files.

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void write_json(const std::string& path, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

}  // namespace ndescent::io
