#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndescent/exact/field.hpp"

namespace ndescent {

using Vector = std::vector<FieldElement>;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix over a field tower.
class ExactMatrix {
 public:
  ExactMatrix() : field_(Tower::rationals()) {}
  ExactMatrix(TowerPtr field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), a_(rows * cols, FieldElement::zero(field_)) {}

  static ExactMatrix identity(const TowerPtr& field, std::size_t n) {
    ExactMatrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = FieldElement::one(field);
    return m;
  }
  static ExactMatrix column(const Vector& v) {
    TowerPtr f = v.empty() ? Tower::rationals() : v[0].field();
    for (const auto& e : v) f = common_tower(f, e.field());
    ExactMatrix m(f, v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m.set(i, 0, v[i]);
    return m;
  }
  static ExactMatrix row(const Vector& v) { return column(v).transpose(); }

  const TowerPtr& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const FieldElement& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  FieldElement& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

  /// Stores an entry, widening the matrix field if the value lives in a larger tower.
  void set(std::size_t i, std::size_t j, const FieldElement& v) {
    if (v.field().get() != field_.get() && !field_->contains(*v.field())) *this = embed(common_tower(field_, v.field()));
    a_[i * cols_ + j] = v.embed(field_);
  }

  ExactMatrix embed(const TowerPtr& target) const {
    ExactMatrix m(target, rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k].embed(target);
    return m;
  }

  Vector row_vector(std::size_t i) const { return Vector(a_.begin() + static_cast<std::ptrdiff_t>(i * cols_), a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)); }
  Vector column_vector(std::size_t j) const {
    Vector v;
    for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
    return v;
  }

  bool is_zero() const {
    for (const auto& e : a_)
      if (!e.is_zero()) return false;
    return true;
  }

  FieldElement trace() const {
    if (rows_ != cols_) throw DimensionMismatch("trace of a non-square matrix");
    FieldElement t = FieldElement::zero(field_);
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  ExactMatrix transpose() const {
    ExactMatrix m(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  ExactMatrix& operator+=(const ExactMatrix& o) {
    check_same_shape(o);
    widen(o.field_);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  ExactMatrix& operator-=(const ExactMatrix& o) {
    check_same_shape(o);
    widen(o.field_);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  ExactMatrix& operator*=(const FieldElement& s) {
    widen(s.field());
    for (auto& e : a_) e *= s;
    return *this;
  }

  friend ExactMatrix operator*(const ExactMatrix& x, const ExactMatrix& y) {
    if (x.cols_ != y.rows_) throw DimensionMismatch("matrix product shape mismatch");
    TowerPtr f = common_tower(x.field_, y.field_);
    ExactMatrix m(f, x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        const FieldElement& xik = x(i, k);
        if (xik.is_zero()) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) m(i, j) += xik * y(k, j);
      }
    return m;
  }

  friend bool operator==(const ExactMatrix& x, const ExactMatrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_) return false;
    for (std::size_t k = 0; k < x.a_.size(); ++k)
      if (x.a_[k] != y.a_[k]) return false;
    return true;
  }
  friend bool operator!=(const ExactMatrix& x, const ExactMatrix& y) { return !(x == y); }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? "; " : "";
      for (std::size_t j = 0; j < cols_; ++j) s += (j ? ", " : "") + (*this)(i, j).to_string();
    }
    return s + "]";
  }

 private:
  void check_same_shape(const ExactMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix shapes differ");
  }
  void widen(const TowerPtr& other) {
    if (other.get() == field_.get() || field_->contains(*other)) return;
    *this = embed(common_tower(field_, other));
  }

  TowerPtr field_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<FieldElement> a_;
};

inline ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
inline ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) { return a -= b; }
inline ExactMatrix operator*(ExactMatrix a, const FieldElement& s) { return a *= s; }
inline ExactMatrix operator*(const FieldElement& s, ExactMatrix a) { return a *= s; }

inline Vector operator*(const ExactMatrix& m, const Vector& v) {
  if (m.cols() != v.size()) throw DimensionMismatch("matrix-vector shape mismatch");
  Vector r;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    FieldElement acc = FieldElement::zero(m.field());
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
    r.push_back(std::move(acc));
  }
  return r;
}

inline FieldElement dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot product length mismatch");
  FieldElement acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

struct Echelon {
  ExactMatrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form by Gauss-Jordan elimination.
inline Echelon row_reduce(ExactMatrix m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const FieldElement inv = m(r, c).inverse();
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const FieldElement factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= factor * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const ExactMatrix& m) { return row_reduce(m).pivots.size(); }

/// Basis of {v : m v = 0}, one vector per free column, with a 1 in that column.
inline std::vector<Vector> kernel_basis(const ExactMatrix& m) {
  Echelon e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols(), FieldElement::zero(e.reduced.field()));
    v[free] = FieldElement::one(e.reduced.field());
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Some x with m x = b, or nullopt if the system is inconsistent.
inline std::optional<Vector> solve_linear(const ExactMatrix& m, const Vector& b) {
  if (b.size() != m.rows()) throw DimensionMismatch("right-hand side length mismatch");
  TowerPtr f = m.field();
  for (const auto& e : b) f = common_tower(f, e.field());
  ExactMatrix aug(f, m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j).embed(f);
    aug(i, m.cols()) = b[i].embed(f);
  }
  Echelon e = row_reduce(aug);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vector x(m.cols(), FieldElement::zero(f));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, m.cols());
  return x;
}

inline FieldElement determinant(ExactMatrix m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  FieldElement det = FieldElement::one(m.field());
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return FieldElement::zero(m.field());
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    const FieldElement inv = m(c, c).inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      const FieldElement factor = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= factor * m(c, j);
    }
  }
  return det;
}

inline ExactMatrix inverse(const ExactMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  ExactMatrix aug(m.field(), n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = FieldElement::one(m.field());
  }
  Echelon e = row_reduce(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw std::domain_error("singular matrix");
  ExactMatrix inv(m.field(), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

/// True if `a` is a nonzero scalar multiple of `b` (both nonzero), i.e. equal as projective points.
inline bool projectively_equal(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  std::optional<FieldElement> ratio;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const bool za = a(i, j).is_zero(), zb = b(i, j).is_zero();
      if (za != zb) return false;
      if (za) continue;
      FieldElement r = a(i, j) / b(i, j);
      if (!ratio) ratio = r;
      else if (*ratio != r) return false;
    }
  return ratio.has_value();
}

inline bool projectively_equal(const Vector& a, const Vector& b) {
  return projectively_equal(ExactMatrix::column(a), ExactMatrix::column(b));
}

}  // namespace ndescent
