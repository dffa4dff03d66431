#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndescent/descent/embedding.hpp"

namespace ndescent {

/// A map E[n] -> K in torsion-table order.
using RElement = Vector;
/// A map E[n] x E[n] -> K^x.
using RhoTable = PairTable;

class CertificationFailed : public std::runtime_error {
 public:
  CertificationFailed(const std::string& what, std::vector<std::size_t> witness)
      : std::runtime_error(what), witness_(std::move(witness)) {}
  const std::vector<std::size_t>& witness() const { return witness_; }

 private:
  std::vector<std::size_t> witness_;
};

/// Addition table of the torsion group: sum[a * N + b] = index of T_a + T_b.
inline std::vector<std::size_t> addition_table(const TorsionTable& tab) {
  std::vector<std::size_t> s(tab.size() * tab.size());
  for (std::size_t a = 0; a < tab.size(); ++a)
    for (std::size_t b = 0; b < tab.size(); ++b) s[a * tab.size() + b] = tab.add(a, b);
  return s;
}

inline RElement constant_element(const TorsionTable& tab, const FieldElement& c) { return RElement(tab.size(), c); }

inline RhoTable constant_rho(const TorsionTable& tab, const FieldElement& c) { return RhoTable(tab.size(), c); }

/// (dz)(T1, T2) = z(T1) z(T2) / z(T1 + T2).
inline RhoTable partial(const TorsionTable& tab, const RElement& z) {
  if (z.size() != tab.size()) throw DimensionMismatch("partial: element has the wrong length");
  for (const auto& v : z)
    if (v.is_zero()) throw std::domain_error("partial: z is not invertible");
  RhoTable r(tab.size(), z[0]);
  for (std::size_t a = 0; a < tab.size(); ++a)
    for (std::size_t b = 0; b < tab.size(); ++b) r(a, b) = z[a] * z[b] / z[tab.add(a, b)];
  return r;
}

inline RhoTable pointwise_product(const RhoTable& x, const RhoTable& y) {
  if (x.size != y.size) throw DimensionMismatch("rho tables of different sizes");
  RhoTable r = x;
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = x.v[i] * y.v[i];
  return r;
}

struct RhoReport {
  bool accepted = false;
  std::string criterion = "split-torsion criterion";
  /// Failed identity ("nonzero", "symmetry", "normalization", "cocycle") and its witness indices.
  std::string failure;
  std::vector<std::size_t> witness;
  /// rho(O, O), divided out of the normalized table.
  FieldElement scale;
  RhoTable normalized;
};

/// Symmetric 2-cocycle with rho(O, .) constant; a table with rho(O, O) = c is normalized to rho / c.
inline RhoReport validate_rho(const TorsionTable& tab, const RhoTable& rho) {
  RhoReport rep;
  const std::size_t nn = tab.size();
  if (rho.size != nn) throw DimensionMismatch("rho table has the wrong size");
  for (std::size_t a = 0; a < nn; ++a)
    for (std::size_t b = 0; b < nn; ++b)
      if (rho(a, b).is_zero()) {
        rep.failure = "nonzero";
        rep.witness = {a, b};
        return rep;
      }
  rep.scale = rho(0, 0);
  rep.normalized = rho;
  const FieldElement inv = rep.scale.inverse();
  for (auto& v : rep.normalized.v) v *= inv;
  const RhoTable& r = rep.normalized;
  const FieldElement one = FieldElement::one(rep.scale.field());
  for (std::size_t a = 0; a < nn; ++a)
    if (!r(0, a).is_one()) {
      rep.failure = "normalization";
      rep.witness = {0, a};
      return rep;
    }
  for (std::size_t a = 0; a < nn; ++a)
    for (std::size_t b = a + 1; b < nn; ++b)
      if (r(a, b) != r(b, a)) {
        rep.failure = "symmetry";
        rep.witness = {a, b};
        return rep;
      }
  for (std::size_t a = 0; a < nn; ++a)
    for (std::size_t b = 0; b < nn; ++b)
      for (std::size_t c = 0; c < nn; ++c)
        if (r(a, b) * r(tab.add(a, b), c) != r(a, tab.add(b, c)) * r(b, c)) {
          rep.failure = "cocycle";
          rep.witness = {a, b, c};
          return rep;
        }
  rep.accepted = true;
  return rep;
}

/// rho(T1, T2) = r_(T1,T2)(Q) for a non-torsion point Q over K.
inline RhoTable rho_from_point(const TorsionTable& tab, const Point& q) {
  const Curve& e = tab.curve();
  require_on_curve(e, q);
  if (point_mul(e, tab.n(), q).is_O()) throw std::domain_error("rho_from_point: Q is an n-torsion point");
  RhoTable r(tab.size(), FieldElement::one(e.field));
  for (std::size_t a = 0; a < tab.size(); ++a)
    for (std::size_t b = 0; b < tab.size(); ++b) r(a, b) = r_eval(tab, a, b, q);
  return r;
}

// ---------------------------------------------------------------------------
// The algebra A_rho on the basis delta_T with delta_a delta_b = eps(a, b) rho(a, b) delta_{a+b}.

struct CSACertificate {
  bool associative = false;
  std::vector<std::size_t> associativity_witness;
  std::optional<std::size_t> unit;
  std::size_t center_dimension = 0;
  std::size_t trace_form_rank = 0;
  std::size_t dimension = 0;

  bool ok() const {
    return associative && unit.has_value() && center_dimension == 1 && trace_form_rank == dimension;
  }
};

struct CSA {
  TowerPtr field;
  std::size_t dim = 0;
  std::vector<std::size_t> sum;
  PairTable c;
  CSACertificate certificate;

  std::size_t add(std::size_t a, std::size_t b) const { return sum[a * dim + b]; }

  Vector multiply(const Vector& x, const Vector& y) const {
    Vector out(dim, FieldElement::zero(field));
    for (std::size_t a = 0; a < dim; ++a) {
      if (x[a].is_zero()) continue;
      for (std::size_t b = 0; b < dim; ++b)
        if (!y[b].is_zero()) out[add(a, b)] += x[a] * y[b] * c(a, b);
    }
    return out;
  }
  /// Trace of left multiplication by delta_a.
  FieldElement regular_trace(std::size_t a) const {
    FieldElement t = FieldElement::zero(field);
    for (std::size_t b = 0; b < dim; ++b)
      if (add(a, b) == b) t += c(a, b);
    return t;
  }
  /// Reduced trace: (1/n) times the regular trace, n^2 = dim.
  FieldElement reduced_trace(const Vector& x) const {
    std::size_t n = 1;
    while (n * n < dim) ++n;
    FieldElement t = FieldElement::zero(field);
    for (std::size_t a = 0; a < dim; ++a) t += x[a] * regular_trace(a);
    return t / FieldElement::integer(field, static_cast<long>(n));
  }
};

inline CSACertificate certify(const CSA& a) {
  CSACertificate cert;
  const std::size_t d = a.dim;
  cert.dimension = d;
  cert.associative = true;
  for (std::size_t x = 0; x < d && cert.associative; ++x)
    for (std::size_t y = 0; y < d && cert.associative; ++y)
      for (std::size_t z = 0; z < d; ++z)
        if (a.c(x, y) * a.c(a.add(x, y), z) != a.c(y, z) * a.c(x, a.add(y, z))) {
          cert.associative = false;
          cert.associativity_witness = {x, y, z};
          break;
        }
  for (std::size_t u = 0; u < d && !cert.unit; ++u) {
    bool unit = true;
    for (std::size_t t = 0; t < d && unit; ++t)
      unit = a.add(u, t) == t && a.add(t, u) == t && a.c(u, t).is_one() && a.c(t, u).is_one();
    if (unit) cert.unit = u;
  }
  // centralizer of all delta_t: rows (t, s) of [x, delta_t] in coordinate s
  ExactMatrix comm(a.field, d * d, d);
  for (std::size_t t = 0; t < d; ++t)
    for (std::size_t b = 0; b < d; ++b) {
      comm(t * d + a.add(b, t), b) += a.c(b, t);
      comm(t * d + a.add(t, b), b) -= a.c(t, b);
    }
  cert.center_dimension = d - rank(comm);
  ExactMatrix form(a.field, d, d);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y) form(x, y) = a.c(x, y) * a.regular_trace(a.add(x, y));
  cert.trace_form_rank = rank(form);
  return cert;
}

/// Structure constants eps * rho, with certification; throws CertificationFailed if it does not pass.
inline CSA build_csa(const TorsionTable& tab, const EpsilonTable& eps, const RhoTable& rho) {
  CSA a;
  a.field = tab.curve().field;
  a.dim = tab.size();
  a.sum = addition_table(tab);
  a.c = pointwise_product(eps, rho);
  for (auto& v : a.c.v) v = v.embed(common_tower(a.field, v.field()));
  a.certificate = certify(a);
  if (!a.certificate.ok()) {
    std::vector<std::size_t> w = a.certificate.associativity_witness;
    throw CertificationFailed("algebra certification failed (associative=" + std::to_string(a.certificate.associative) +
                                  ", center dimension " + std::to_string(a.certificate.center_dimension) +
                                  ", trace form rank " + std::to_string(a.certificate.trace_form_rank) + ")",
                              w);
  }
  return a;
}

/// First basis pair where alpha -> z alpha fails to carry the product of `from` to that of `to`.
inline std::optional<std::array<std::size_t, 2>> intertwining_failure(const CSA& from, const CSA& to, const RElement& z) {
  for (std::size_t a = 0; a < from.dim; ++a)
    for (std::size_t b = 0; b < from.dim; ++b) {
      if (from.add(a, b) != to.add(a, b)) return std::array<std::size_t, 2>{a, b};
      if (from.c(a, b) * z[from.add(a, b)] != z[a] * z[b] * to.c(a, b)) return std::array<std::size_t, 2>{a, b};
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// gamma with d gamma = rho over an extension.

struct GammaWitness {
  TowerPtr field;
  Vector gamma;
};

namespace detail {

/// A root of x^n - c, adjoining one if needed; returns the root (its field is the extension).
inline FieldElement adjoin_nth_root(const FieldElement& c, int n, const std::string& name) {
  const TowerPtr& k = c.field();
  std::vector<FieldElement> co(static_cast<std::size_t>(n) + 1, FieldElement::zero(k));
  co[0] = -c;
  co[static_cast<std::size_t>(n)] = FieldElement::one(k);
  const Poly p(k, co);
  auto fs = factor(p);
  const Poly* best = nullptr;
  for (const auto& f : fs)
    if (!best || f.poly.degree() < best->degree()) best = &f.poly;
  if (best->degree() == 1) return -best->coeff(0) / best->coeff(1);
  Poly monic = *best * best->coeff(static_cast<std::size_t>(best->degree())).inverse();
  return FieldElement::generator(tower_extend(k, monic, name));
}

}  // namespace detail

inline GammaWitness solve_gamma(const TorsionTable& tab, const RhoTable& rho) {
  const int n = tab.n();
  const std::size_t t1 = tab.basis1(), t2 = tab.basis2();
  const TowerPtr& k = tab.curve().field;
  // alpha^n = prod_m rho(m T1, T1), beta^n = prod_m rho(m T2, T2)
  FieldElement pa = FieldElement::one(k), pb = FieldElement::one(k);
  for (int m = 1; m < n; ++m) {
    pa *= rho(tab.index(m, 0), t1);
    pb *= rho(tab.index(0, m), t2);
  }
  const FieldElement alpha = detail::adjoin_nth_root(pa, n, "alpha");
  const FieldElement beta = detail::adjoin_nth_root(pb.embed(alpha.field()), n, "beta");
  const TowerPtr l = common_tower(alpha.field(), beta.field());
  std::vector<FieldElement> g1(static_cast<std::size_t>(n)), g2(static_cast<std::size_t>(n));
  g1[0] = g2[0] = FieldElement::one(l);
  for (int m = 1; m < n; ++m) {
    g1[static_cast<std::size_t>(m)] = g1[static_cast<std::size_t>(m - 1)] * alpha / rho(tab.index(m - 1, 0), t1);
    g2[static_cast<std::size_t>(m)] = g2[static_cast<std::size_t>(m - 1)] * beta / rho(tab.index(0, m - 1), t2);
  }
  GammaWitness w;
  w.field = l;
  w.gamma.assign(tab.size(), FieldElement::one(l));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      w.gamma[tab.index(i, j)] =
          (g1[static_cast<std::size_t>(i)] * g2[static_cast<std::size_t>(j)] / rho(tab.index(i, 0), tab.index(0, j))).embed(l);
  for (std::size_t a = 0; a < tab.size(); ++a)
    for (std::size_t b = 0; b < tab.size(); ++b)
      if (w.gamma[a] * w.gamma[b] / w.gamma[tab.add(a, b)] != rho(a, b))
        throw std::logic_error("solve_gamma: d gamma differs from rho at (" + std::to_string(a) + ", " +
                               std::to_string(b) + ")");
  return w;
}

// ---------------------------------------------------------------------------
// Trivialisations A_rho -> Mat_n(K).

struct Trivialisation {
  std::vector<ExactMatrix> images;
  /// standard-tau1 | z-twist | user-supplied
  std::string provenance;
};

struct TrivialisationCertificate {
  bool multiplicative = false;
  std::vector<std::size_t> witness;
  bool unital = false;
  std::size_t span_rank = 0;
  std::size_t dimension = 0;
  bool ok() const { return multiplicative && unital && span_rank == dimension; }
};

inline TrivialisationCertificate certify(const CSA& a, const Trivialisation& t) {
  TrivialisationCertificate cert;
  cert.dimension = a.dim;
  if (t.images.size() != a.dim) throw DimensionMismatch("trivialisation has the wrong number of images");
  cert.multiplicative = true;
  for (std::size_t x = 0; x < a.dim && cert.multiplicative; ++x)
    for (std::size_t y = 0; y < a.dim; ++y)
      if (t.images[x] * t.images[y] != t.images[a.add(x, y)] * a.c(x, y)) {
        cert.multiplicative = false;
        cert.witness = {x, y};
        break;
      }
  const std::size_t unit = a.certificate.unit.value_or(0);
  const std::size_t m = t.images[unit].rows();
  cert.unital = t.images[unit] == ExactMatrix::identity(t.images[unit].field(), m);
  ExactMatrix stack(a.field, a.dim, m * m);
  for (std::size_t x = 0; x < a.dim; ++x)
    for (std::size_t i = 0; i < m * m; ++i) stack.set(x, i, t.images[x](i / m, i % m));
  cert.span_rank = rank(stack);
  return cert;
}

inline void require_certified(const CSA& a, const Trivialisation& t) {
  const TrivialisationCertificate cert = certify(a, t);
  if (!cert.ok())
    throw CertificationFailed(cert.multiplicative ? "trivialisation is not unital or does not span"
                                                  : "trivialisation is not multiplicative at (" +
                                                        std::to_string(cert.witness[0]) + ", " +
                                                        std::to_string(cert.witness[1]) + ")",
                              cert.witness);
}

enum class TrivialisationMode { standard, z_twist, user };

/// standard: delta_T -> M_T (rho = 1); z-twist: delta_T -> z(T) M_T (rho = dz); user: given images.
inline Trivialisation trivialize(const TorsionTable& tab, const CSA& a, const RhoTable& rho, TrivialisationMode mode,
                                 const EmbeddingData* emb, const RElement* z = nullptr,
                                 const std::vector<ExactMatrix>* user = nullptr) {
  Trivialisation t;
  const TowerPtr& k = tab.curve().field;
  switch (mode) {
    case TrivialisationMode::standard: {
      if (!emb) throw std::invalid_argument("standard trivialisation needs the embedding data");
      if (!(rho == constant_rho(tab, FieldElement::one(k)))) throw std::domain_error("standard trivialisation needs rho = 1");
      t.images = emb->M;
      t.provenance = "standard-tau1";
      break;
    }
    case TrivialisationMode::z_twist: {
      if (!emb || !z) throw std::invalid_argument("z-twist trivialisation needs the embedding data and z");
      RElement zn = *z;
      const FieldElement inv = zn.at(0).inverse();
      for (auto& v : zn) v *= inv;
      if (!(partial(tab, zn) == rho)) throw std::domain_error("z-twist trivialisation: rho is not dz");
      for (std::size_t i = 0; i < tab.size(); ++i) t.images.push_back(emb->M[i] * zn[i]);
      t.provenance = "z-twist";
      break;
    }
    case TrivialisationMode::user: {
      if (!user) throw std::invalid_argument("user trivialisation needs the images");
      t.images = *user;
      t.provenance = "user-supplied";
      break;
    }
  }
  require_certified(a, t);
  return t;
}

}  // namespace ndescent
