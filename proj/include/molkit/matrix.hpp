#pragma once

#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "molkit/errors.hpp"
#include "molkit/rational.hpp"

namespace molkit {

// Dense matrix of exact rationals, row-major. Sizes in scope stay small
// (up to ~24x24), so no sparse storage and no pivoting heuristics.
class RationalMatrix {
 public:
  RationalMatrix() : rows_(0), cols_(0) {}
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols, Rational(0)) {}
  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    e_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DimensionMismatch("matrix literal: ragged rows");
      for (const auto& x : row) e_.push_back(x);
    }
  }

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
  }
  static RationalMatrix zero(std::size_t r, std::size_t c) { return RationalMatrix(r, c); }
  static RationalMatrix diagonal(const std::vector<Rational>& d) {
    RationalMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
  }
  static RationalMatrix row_vector(const std::vector<Rational>& v) {
    RationalMatrix m(1, v.size());
    for (std::size_t j = 0; j < v.size(); ++j) m.at(0, j) = v[j];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  Rational& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  std::vector<Rational> row(std::size_t i) const {
    std::vector<Rational> r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
    return r;
  }

  bool is_square() const { return rows_ == cols_; }
  bool is_zero() const {
    for (const auto& x : e_)
      if (!x.is_zero()) return false;
    return true;
  }
  bool is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if (at(i, j) != at(j, i)) return false;
    return true;
  }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix add");
    RationalMatrix c(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.e_.size(); ++i) c.e_[i] = a.e_[i] + b.e_[i];
    return c;
  }
  friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix sub");
    RationalMatrix c(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.e_.size(); ++i) c.e_[i] = a.e_[i] - b.e_[i];
    return c;
  }
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix mul");
    RationalMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a.at(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (b.at(k, j).is_zero()) continue;
          c.at(i, j) += a.at(i, k) * b.at(k, j);
        }
      }
    return c;
  }
  friend RationalMatrix operator*(const Rational& s, const RationalMatrix& a) {
    RationalMatrix c(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.e_.size(); ++i) c.e_[i] = s * a.e_[i];
    return c;
  }
  RationalMatrix operator-() const { return Rational(-1) * *this; }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }
  friend bool operator!=(const RationalMatrix& a, const RationalMatrix& b) { return !(a == b); }

  // Vertical stack: rows of a over rows of b.
  static RationalMatrix vstack(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a.cols_ != b.cols_) throw DimensionMismatch("vstack");
    RationalMatrix c(a.rows_ + b.rows_, a.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) c.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) c.at(a.rows_ + i, j) = b.at(i, j);
    return c;
  }

  // 2x2 block composition; all blocks must be compatibly sized.
  static RationalMatrix block2x2(const RationalMatrix& a, const RationalMatrix& b,
                                 const RationalMatrix& c, const RationalMatrix& d) {
    if (a.rows_ != b.rows_ || c.rows_ != d.rows_ || a.cols_ != c.cols_ || b.cols_ != d.cols_)
      throw DimensionMismatch("block2x2");
    RationalMatrix m(a.rows_ + c.rows_, a.cols_ + b.cols_);
    auto put = [&m](const RationalMatrix& x, std::size_t r0, std::size_t c0) {
      for (std::size_t i = 0; i < x.rows_; ++i)
        for (std::size_t j = 0; j < x.cols_; ++j) m.at(r0 + i, c0 + j) = x.at(i, j);
    };
    put(a, 0, 0);
    put(b, 0, a.cols_);
    put(c, a.rows_, 0);
    put(d, a.rows_, a.cols_);
    return m;
  }

  static RationalMatrix block_diagonal(const std::vector<RationalMatrix>& blocks) {
    std::size_t r = 0, c = 0;
    for (const auto& b : blocks) { r += b.rows_; c += b.cols_; }
    RationalMatrix m(r, c);
    std::size_t r0 = 0, c0 = 0;
    for (const auto& b : blocks) {
      for (std::size_t i = 0; i < b.rows_; ++i)
        for (std::size_t j = 0; j < b.cols_; ++j) m.at(r0 + i, c0 + j) = b.at(i, j);
      r0 += b.rows_;
      c0 += b.cols_;
    }
    return m;
  }

  RationalMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("submatrix");
    RationalMatrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) m.at(i, j) = at(r0 + i, c0 + j);
    return m;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Rational> e_;
};

struct RrefResult {
  RationalMatrix matrix;
  std::vector<std::size_t> pivots;  // pivot column per nonzero row
};

// Unique reduced row echelon form; zero rows trail.
inline RrefResult rref(const RationalMatrix& m) {
  RationalMatrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < a.cols() && lead < a.rows(); ++col) {
    std::size_t piv = lead;
    while (piv < a.rows() && a.at(piv, col).is_zero()) ++piv;
    if (piv == a.rows()) continue;
    if (piv != lead)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a.at(piv, j), a.at(lead, j));
    Rational inv = a.at(lead, col).inverse();
    for (std::size_t j = col; j < a.cols(); ++j) a.at(lead, j) = inv * a.at(lead, j);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == lead || a.at(i, col).is_zero()) continue;
      Rational f = a.at(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a.at(i, j) -= f * a.at(lead, j);
    }
    pivots.push_back(col);
    ++lead;
  }
  return {std::move(a), std::move(pivots)};
}

inline std::size_t rank(const RationalMatrix& m) { return rref(m).pivots.size(); }

// Rows of the result form a basis of { x : m x = 0 }.
inline RationalMatrix kernel(const RationalMatrix& m) {
  RrefResult r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t p : r.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  RationalMatrix k(free_cols.size(), m.cols());
  for (std::size_t fi = 0; fi < free_cols.size(); ++fi) {
    std::size_t f = free_cols[fi];
    k.at(fi, f) = Rational(1);
    for (std::size_t row = 0; row < r.pivots.size(); ++row)
      k.at(fi, r.pivots[row]) = -r.matrix.at(row, f);
  }
  return k;
}

inline RationalMatrix inverse(const RationalMatrix& m) {
  if (!m.is_square()) throw DimensionMismatch("inverse: matrix not square");
  std::size_t n = m.rows();
  RationalMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = Rational(1);
  }
  RrefResult r = rref(aug);
  for (std::size_t i = 0; i < n; ++i)
    if (i >= r.pivots.size() || r.pivots[i] != i)
      throw SingularMatrix("inverse: rank below dimension");
  return r.matrix.submatrix(0, n, n, n);
}

inline bool is_invertible(const RationalMatrix& m) {
  return m.is_square() && rank(m) == m.rows();
}

inline Rational determinant(const RationalMatrix& m) {
  if (!m.is_square()) throw DimensionMismatch("determinant: matrix not square");
  RationalMatrix a = m;
  std::size_t n = a.rows();
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a.at(piv, col).is_zero()) ++piv;
    if (piv == n) return Rational(0);
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a.at(piv, j), a.at(col, j));
      det = -det;
    }
    det *= a.at(col, col);
    Rational inv = a.at(col, col).inverse();
    for (std::size_t i = col + 1; i < n; ++i) {
      if (a.at(i, col).is_zero()) continue;
      Rational f = a.at(i, col) * inv;
      for (std::size_t j = col; j < n; ++j) a.at(i, j) -= f * a.at(col, j);
    }
  }
  return det;
}

inline std::vector<Rational> leading_principal_minors(const RationalMatrix& m) {
  std::vector<Rational> out;
  for (std::size_t k = 1; k <= m.rows(); ++k) out.push_back(determinant(m.submatrix(0, 0, k, k)));
  return out;
}

// Exact Sylvester test: all leading principal minors positive.
inline bool is_positive_definite(const RationalMatrix& g) {
  if (!g.is_square()) throw DimensionMismatch("is_positive_definite: not square");
  if (!g.is_symmetric()) throw NotSymmetric("is_positive_definite: matrix not symmetric");
  for (const Rational& d : leading_principal_minors(g))
    if (d.sign() <= 0) return false;
  return true;
}

// transpose(p) * g * p; the involution on Q is the identity.
inline RationalMatrix congruence_transform(const RationalMatrix& p, const RationalMatrix& g) {
  if (!g.is_square()) throw DimensionMismatch("congruence_transform: g not square");
  if (p.rows() != g.rows()) throw DimensionMismatch("congruence_transform: sizes differ");
  if (!is_invertible(p)) throw SingularMatrix("congruence_transform: p singular");
  return p.transpose() * g * p;
}

// --- text format: first line "rows cols", then entries "p/q" or "p". ---

inline std::string to_text(const RationalMatrix& m) {
  std::ostringstream os;
  os << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << m.at(i, j).str();
    }
    os << '\n';
  }
  return os.str();
}

inline RationalMatrix matrix_from_stream(std::istream& is) {
  std::size_t r = 0, c = 0;
  if (!(is >> r >> c)) throw ParseError("matrix: missing 'rows cols' header");
  RationalMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      std::string tok;
      if (!(is >> tok)) throw ParseError("matrix: unexpected end of input");
      m.at(i, j) = Rational::parse(tok);
    }
  return m;
}

inline RationalMatrix matrix_from_text(const std::string& text) {
  std::istringstream is(text);
  return matrix_from_stream(is);
}

}  // namespace molkit
