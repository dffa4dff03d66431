#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndescent/algebra/obstruction.hpp"

namespace ndescent {

class BadBasePoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class RankNotOne : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KernelTooBig : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KernelEmpty : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Quadrics in the coordinates z_T of P(R).

struct QuadricTerm {
  std::size_t i = 0, j = 0;  // i <= j
  FieldElement coeff;
};

struct Quadric {
  std::vector<QuadricTerm> terms;

  void add(std::size_t i, std::size_t j, const FieldElement& c) {
    if (i > j) std::swap(i, j);
    for (auto& t : terms)
      if (t.i == i && t.j == j) {
        t.coeff += c;
        return;
      }
    terms.push_back({i, j, c});
  }
  FieldElement operator()(const Vector& z) const {
    FieldElement s = FieldElement::zero(z.front().field());
    for (const auto& t : terms) s += t.coeff * z[t.i] * z[t.j];
    return s;
  }
};

struct QuadricSystem {
  std::size_t dim = 0;
  std::vector<std::string> labels;
  std::vector<Quadric> forms;
  /// Number of forms of the first kind (z_T z_{-T} differences).
  std::size_t group1 = 0;

  /// Coefficient matrix: one row per form, one column per monomial z_i z_j (i <= j).
  ExactMatrix coefficient_matrix(const TowerPtr& k) const {
    ExactMatrix m(k, forms.size(), dim * (dim + 1) / 2);
    auto col = [&](std::size_t i, std::size_t j) { return i * dim - i * (i - 1) / 2 + (j - i); };
    for (std::size_t r = 0; r < forms.size(); ++r)
      for (const auto& t : forms[r].terms) m.set(r, col(t.i, t.j), m(r, col(t.i, t.j)) + t.coeff);
    return m;
  }
};

/// Quadrics defining g_C(C) in P(R); rho = 1 gives the image of g_E.
inline QuadricSystem quadrics_for_C(const TorsionTable& tab, const RhoTable& rho) {
  const std::size_t nn = tab.size();
  const std::size_t n2 = nn;
  const TowerPtr& k = tab.curve().field;
  QuadricSystem qs;
  qs.dim = nn;
  for (std::size_t t = 0; t < nn; ++t)
    qs.labels.push_back("z" + std::to_string(tab.coord1(t)) + std::to_string(tab.coord2(t)));
  // group 1: one representative per {T, -T}, each paired with the first orbit
  std::vector<std::size_t> reps;
  for (std::size_t t = 1; t < nn; ++t)
    if (tab.neg(t) >= t) reps.push_back(t);
  for (std::size_t r = 1; r < reps.size(); ++r) {
    const std::size_t t1 = reps[r], t2 = reps.front();
    Quadric q;
    q.add(0, 0, tab.point(t1).x - tab.point(t2).x);
    q.add(t1, tab.neg(t1), rho(t1, tab.neg(t1)));
    q.add(t2, tab.neg(t2), -rho(t2, tab.neg(t2)));
    qs.forms.push_back(std::move(q));
  }
  qs.group1 = qs.forms.size();
  // group 2: for each T != O, unordered decompositions T = T1 + T2 with T1, T2 != O, each against the first
  for (std::size_t t = 1; t < nn; ++t) {
    std::vector<std::array<std::size_t, 2>> decomp;
    for (std::size_t a = 1; a < nn; ++a) {
      const std::size_t b = tab.sub(t, a);
      if (b != 0 && a <= b) decomp.push_back({a, b});
    }
    const auto [r1, r2] = decomp.front();
    for (std::size_t d = 1; d < decomp.size(); ++d) {
      const auto [a1, a2] = decomp[d];
      Quadric q;
      q.add(0, t, lambda(tab, a1, a2) - lambda(tab, r1, r2));
      q.add(r1, r2, -rho(r1, r2));
      q.add(a1, a2, rho(a1, a2));
      qs.forms.push_back(std::move(q));
    }
  }
  const std::size_t expected = n2 * (n2 - 3) / 2;
  if (qs.forms.size() != expected || rank(qs.coefficient_matrix(k)) != expected)
    throw std::logic_error("quadric system is not of full rank " + std::to_string(expected));
  return qs;
}

inline QuadricSystem quadrics_for_E(const TorsionTable& tab) {
  return quadrics_for_C(tab, constant_rho(tab, FieldElement::one(tab.curve().field)));
}

// ---------------------------------------------------------------------------
// Points of C through P(R) and P(Mat_n).

/// (gamma(T)^{-1} G_T(P))_T; without gamma this is g_E^0(P).
inline Vector g_eval(const TorsionTable& tab, const GBasis& gb, const GammaWitness* gamma, const Point& p) {
  const Curve& e = tab.curve();
  if (p.is_O() || point_mul(e, static_cast<long>(tab.size()), p).is_O())
    throw BadBasePoint("base point lies in E[n^2]");
  Vector z;
  try {
    for (std::size_t t = 0; t < tab.size(); ++t) {
      FieldElement v = gb.G[t](p);
      if (gamma) v /= gamma->gamma[t];
      z.push_back(v);
    }
  } catch (const PoleAtP& ex) {
    throw BadBasePoint(ex.what());
  }
  for (const auto& v : z)
    if (v.is_zero()) throw BadBasePoint("a coordinate of g(P) vanishes");
  return z;
}

/// Trace-zero part of the image of z under the trivialisation; required to have rank 1.
inline ExactMatrix lambda_eval(const Trivialisation& triv, const Vector& z) {
  ExactMatrix m = triv.images.front() * z.front();
  for (std::size_t t = 1; t < z.size(); ++t) m += triv.images[t] * z[t];
  const std::size_t n = m.rows();
  const FieldElement s = m.trace() / FieldElement::integer(m.field(), static_cast<long>(n));
  m -= ExactMatrix::identity(m.field(), n) * s;
  if (!m.trace().is_zero()) throw std::logic_error("trace-zero projection failed");
  if (rank(m) != 1) throw RankNotOne("lambda(P) has rank " + std::to_string(rank(m)));
  return m;
}

struct RankOneFactor {
  Vector column;
  Vector row;
};

/// M = column * row with column the first nonzero column of M.
inline RankOneFactor extract_point(const ExactMatrix& m) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Vector c = m.column_vector(j);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!c[i].is_zero()) {
        Vector r = m.row_vector(i);
        const FieldElement inv = c[i].inverse();
        for (auto& v : r) v *= inv;
        return {c, r};
      }
  }
  throw std::domain_error("extract_point: zero matrix");
}

// ---------------------------------------------------------------------------
// Ternary cubics.

struct PlaneCurveEquation {
  /// Exponent triples in graded-lex order with x1 > x2 > x3.
  std::vector<std::array<int, 3>> monomials;
  Vector coeffs;
  /// Rank of the split evaluation matrix at the interpolation.
  std::size_t rank = 0;

  FieldElement operator()(const Vector& p) const {
    FieldElement s = FieldElement::zero(p.front().field());
    for (std::size_t m = 0; m < monomials.size(); ++m)
      s += coeffs[m] * p[0].pow(monomials[m][0]) * p[1].pow(monomials[m][1]) * p[2].pow(monomials[m][2]);
    return s;
  }
};

inline std::vector<std::array<int, 3>> cubic_monomials() {
  std::vector<std::array<int, 3>> out;
  for (int a = 3; a >= 0; --a)
    for (int b = 3 - a; b >= 0; --b) out.push_back({a, b, 3 - a - b});
  return out;
}

/// Coordinates of v over the prefix tower k.
inline Vector split_over(const FieldElement& v, const TowerPtr& k) {
  const std::size_t dk = k->degree();
  const auto& c = v.coords();
  Vector out;
  for (std::size_t b = 0; b < c.size(); b += dk)
    out.push_back(FieldElement::from_coords(k, std::vector<Rational>(c.begin() + static_cast<std::ptrdiff_t>(b),
                                                                     c.begin() + static_cast<std::ptrdiff_t>(b + dk))));
  return out;
}

/// The unique cubic over k through the given points, each with coordinates in an extension of k.
inline PlaneCurveEquation interpolate_plane_curve(const std::vector<Vector>& points, const TowerPtr& k) {
  PlaneCurveEquation eq;
  eq.monomials = cubic_monomials();
  std::vector<Vector> rows;
  for (const auto& p : points) {
    if (p.size() != 3) throw DimensionMismatch("interpolate_plane_curve: points must lie in P^2");
    std::vector<Vector> cols;
    std::size_t blocks = 0;
    for (const auto& m : eq.monomials) {
      const FieldElement v = p[0].pow(m[0]) * p[1].pow(m[1]) * p[2].pow(m[2]);
      cols.push_back(split_over(v.embed(common_tower(v.field(), k)), k));
      blocks = std::max(blocks, cols.back().size());
    }
    for (std::size_t b = 0; b < blocks; ++b) {
      Vector row;
      for (const auto& c : cols) row.push_back(b < c.size() ? c[b] : FieldElement::zero(k));
      rows.push_back(std::move(row));
    }
  }
  ExactMatrix a(k, rows.size(), eq.monomials.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < eq.monomials.size(); ++c) a(r, c) = rows[r][c];
  eq.rank = rank(a);
  auto ker = kernel_basis(a);
  if (ker.empty()) throw KernelEmpty("no cubic passes through the sampled points");
  if (ker.size() > 1) throw KernelTooBig("cubic interpolation kernel of dimension " + std::to_string(ker.size()));
  eq.coeffs = ker[0];
  for (const auto& v : eq.coeffs)
    if (!v.is_zero()) {
      const FieldElement inv = v.inverse();
      for (auto& w : eq.coeffs) w *= inv;
      break;
    }
  return eq;
}

// ---------------------------------------------------------------------------
// End to end.

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct DescentResult {
  QuadricSystem quadrics;
  CSA csa;
  Trivialisation trivialisation;
  GammaWitness gamma;
  PlaneCurveEquation plane_curve;
  std::vector<Check> report;
  std::uint64_t seed = 0;
  /// Image points in P^2 used for interpolation, then the held-out ones.
  std::vector<Vector> fit_points, held_out;

  bool all_passed() const {
    for (const auto& c : report)
      if (!c.passed) return false;
    return !report.empty();
  }
};

struct DescentInputs {
  const TorsionTable* tab = nullptr;
  const GBasis* gb = nullptr;
  const EpsilonTable* eps = nullptr;
  RhoTable rho;
  Trivialisation trivialisation;
  std::uint64_t seed = 1;
  std::size_t fit_points = 10;
  std::size_t held_out = 5;
};

/// Samples points of C over quadratic extensions of the gamma field and maps them into P^{n-1}.
class CoveringSampler {
 public:
  CoveringSampler(const TorsionTable& tab, const GBasis& gb, const GammaWitness& gamma, const Trivialisation& triv,
                  std::uint64_t seed)
      : tab_(tab), gb_(gb), gamma_(gamma), triv_(triv),
        sampler_(Curve(gamma.field, tab.curve().a, tab.curve().b), seed) {
    for (const auto& p : tab.points())
      if (!p.is_O()) sampler_.exclude_x(p.x);
  }

  struct Sample {
    Point p;
    Vector g;
    ExactMatrix lambda;
    RankOneFactor factor;
  };

  Sample next() {
    for (int tries = 0; tries < 64; ++tries) {
      Point p = sampler_.next_in_extension();
      try {
        Sample s{p, g_eval(tab_, gb_, &gamma_, p), ExactMatrix(), {}};
        s.lambda = lambda_eval(triv_, s.g);
        s.factor = extract_point(s.lambda);
        return s;
      } catch (const BadBasePoint&) {
        continue;
      }
    }
    throw std::runtime_error("no admissible sample point found");
  }

 private:
  const TorsionTable& tab_;
  const GBasis& gb_;
  const GammaWitness& gamma_;
  const Trivialisation& triv_;
  PointSampler sampler_;
};

inline DescentResult descend(const DescentInputs& in) {
  const TorsionTable& tab = *in.tab;
  const TowerPtr& k = tab.curve().field;
  if (tab.n() != 3) throw std::domain_error("descend: plane-curve output is implemented for n = 3");
  DescentResult res;
  res.seed = in.seed;
  const RhoReport rep = validate_rho(tab, in.rho);
  if (!rep.accepted)
    throw std::domain_error("rho rejected (" + rep.failure + ") at witness " + [&] {
      std::string s;
      for (auto w : rep.witness) s += (s.empty() ? "" : ",") + std::to_string(w);
      return s;
    }());
  res.report.push_back({"rho validated", true, rep.criterion});
  const RhoTable& rho = rep.normalized;
  res.quadrics = quadrics_for_C(tab, rho);
  res.report.push_back({"quadric rank", true, std::to_string(res.quadrics.forms.size())});
  res.csa = build_csa(tab, *in.eps, rho);
  res.report.push_back({"algebra certified", res.csa.certificate.ok(), "center dimension 1, trace form rank 9"});
  require_certified(res.csa, in.trivialisation);
  res.trivialisation = in.trivialisation;
  res.report.push_back({"trivialisation certified", true, res.trivialisation.provenance});
  res.gamma = solve_gamma(tab, rho);
  res.report.push_back({"gamma solves d gamma = rho", true, "degree " + std::to_string(res.gamma.field->degree())});

  CoveringSampler cs(tab, *in.gb, res.gamma, res.trivialisation, in.seed);
  bool quadrics_ok = true, incidence_ok = true;
  std::size_t quadric_checks = 0;
  for (;;) {
    for (std::size_t i = res.fit_points.size(); i < in.fit_points; ++i) {
      auto s = cs.next();
      if (quadric_checks < 3) {
        for (const auto& q : res.quadrics.forms) quadrics_ok = quadrics_ok && q(s.g).is_zero();
        ++quadric_checks;
      }
      incidence_ok = incidence_ok && dot(s.factor.row, s.factor.column).is_zero();
      res.fit_points.push_back(s.factor.column);
    }
    try {
      res.plane_curve = interpolate_plane_curve(res.fit_points, k);
      break;
    } catch (const KernelTooBig&) {
      if (res.fit_points.size() >= 4 * in.fit_points) throw;
      res.fit_points.push_back(cs.next().factor.column);
    }
  }
  res.report.push_back({"quadrics vanish on sampled points of C", quadrics_ok, std::to_string(quadric_checks) + " points"});
  res.report.push_back({"lambda(P) trace zero and rank 1", true, std::to_string(res.fit_points.size()) + " points"});
  res.report.push_back({"row . column = 0", incidence_ok, ""});
  res.report.push_back({"interpolation kernel dimension 1", true, "rank " + std::to_string(res.plane_curve.rank)});
  bool held = true;
  for (std::size_t i = 0; i < in.held_out; ++i) {
    auto s = cs.next();
    held = held && res.plane_curve(s.factor.column).is_zero();
    res.held_out.push_back(s.factor.column);
  }
  res.report.push_back({"held-out points on the cubic", held, std::to_string(in.held_out) + " points"});
  return res;
}

}  // namespace ndescent
