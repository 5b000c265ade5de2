#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "molkit/errors.hpp"
#include "molkit/matrix.hpp"

namespace molkit {

// Ambient space Q^n with a symmetric positive definite form. Positive
// definiteness is the decidable sufficient condition for anisotropy over Q;
// indefinite anisotropic forms are rejected with a diagnostic.
class FormSpace {
 public:
  FormSpace(std::size_t dimension, RationalMatrix gram)
      : n_(dimension), gram_(std::move(gram)) {
    if (gram_.rows() != n_ || gram_.cols() != n_)
      throw DimensionMismatch("FormSpace: gram must be n x n");
    if (!gram_.is_symmetric()) throw NotSymmetric("FormSpace: gram not symmetric");
    if (!is_positive_definite(gram_))
      throw NotPositiveDefinite(
          "FormSpace: gram not positive definite; only positive definite forms "
          "guarantee anisotropy over Q");
  }

  static FormSpace with_identity_form(std::size_t n) {
    return FormSpace(n, RationalMatrix::identity(n));
  }

  std::size_t dimension() const { return n_; }
  const RationalMatrix& gram() const { return gram_; }

  friend bool operator==(const FormSpace& a, const FormSpace& b) {
    return a.n_ == b.n_ && a.gram_ == b.gram_;
  }

 private:
  std::size_t n_;
  RationalMatrix gram_;
};

// A subspace of Q^n in canonical reduced-row-echelon basis form. Structural
// equality of the RREF basis is subspace equality.
class Subspace {
 public:
  Subspace(FormSpace ambient, const RationalMatrix& spanning_rows)
      : ambient_(std::move(ambient)) {
    if (!spanning_rows.empty() && spanning_rows.cols() != ambient_.dimension())
      throw DimensionMismatch("Subspace: vectors of wrong length");
    RrefResult r = rref(spanning_rows.empty()
                            ? RationalMatrix(0, ambient_.dimension())
                            : spanning_rows);
    basis_ = r.matrix.submatrix(0, 0, r.pivots.size(), ambient_.dimension());
  }

  static Subspace zero(const FormSpace& ambient) {
    return Subspace(ambient, RationalMatrix(0, ambient.dimension()));
  }
  static Subspace full(const FormSpace& ambient) {
    return Subspace(ambient, RationalMatrix::identity(ambient.dimension()));
  }
  static Subspace span(const FormSpace& ambient, const std::vector<std::vector<Rational>>& vectors) {
    RationalMatrix m(vectors.size(), ambient.dimension());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (vectors[i].size() != ambient.dimension())
        throw DimensionMismatch("span: vector of wrong length");
      for (std::size_t j = 0; j < ambient.dimension(); ++j) m.at(i, j) = vectors[i][j];
    }
    return Subspace(ambient, m);
  }

  const FormSpace& ambient() const { return ambient_; }
  const RationalMatrix& basis() const { return basis_; }
  std::size_t dim() const { return basis_.rows(); }
  std::size_t ambient_dim() const { return ambient_.dimension(); }
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_.dimension(); }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

 private:
  FormSpace ambient_;
  RationalMatrix basis_;
};

inline void require_same_ambient(const Subspace& u, const Subspace& v, const char* op) {
  if (!(u.ambient() == v.ambient()))
    throw AmbientMismatch(std::string(op) + ": ambient spaces differ");
}

inline Subspace sum(const Subspace& u, const Subspace& v) {
  require_same_ambient(u, v, "sum");
  return Subspace(u.ambient(), RationalMatrix::vstack(u.basis(), v.basis()));
}

// Membership constraints of a subspace: rows C with  x in u  iff  C x = 0.
inline RationalMatrix constraints_of(const Subspace& u) {
  if (u.is_zero()) return RationalMatrix::identity(u.ambient_dim());
  return kernel(u.basis());
}

inline Subspace intersect(const Subspace& u, const Subspace& v) {
  require_same_ambient(u, v, "intersect");
  RationalMatrix stacked = RationalMatrix::vstack(constraints_of(u), constraints_of(v));
  return Subspace(u.ambient(), kernel(stacked));
}

inline bool leq(const Subspace& u, const Subspace& v) {
  require_same_ambient(u, v, "leq");
  return sum(u, v) == v;
}

inline bool contains_vector(const Subspace& u, const std::vector<Rational>& x) {
  RationalMatrix r = RationalMatrix::row_vector(x);
  return rank(RationalMatrix::vstack(u.basis(), r)) == u.dim();
}

// u^perp with respect to the ambient form: { y : basis * gram * y = 0 }.
inline Subspace ortho_complement(const Subspace& u) {
  if (u.is_zero()) return Subspace::full(u.ambient());
  return Subspace(u.ambient(), kernel(u.basis() * u.ambient().gram()));
}

// Orthocomplement of x inside the interval [0, u]  (x <= u required).
inline Subspace interval_ortho(const Subspace& u, const Subspace& x) {
  require_same_ambient(u, x, "interval_ortho");
  if (!leq(x, u)) throw NotBelow("interval_ortho: x not below u");
  return intersect(u, ortho_complement(x));
}

// Extends basis(w) to a basis of u; returns only the added vectors.
inline std::vector<std::vector<Rational>> basis_extension(const Subspace& w, const Subspace& u) {
  std::vector<std::vector<Rational>> added;
  RationalMatrix cur = w.basis();
  std::size_t r = rank(cur);
  for (std::size_t i = 0; i < u.basis().rows(); ++i) {
    RationalMatrix cand = RationalMatrix::vstack(cur, RationalMatrix::row_vector(u.basis().row(i)));
    if (rank(cand) > r) {
      added.push_back(u.basis().row(i));
      cur = cand;
      ++r;
    }
  }
  return added;
}

// Common complement of u and v in [0, u+v], if one exists. For subspaces a
// witness exists iff dim u = dim v: take a basis of the intersection and glue
// complementary bases pairwise by diagonal vectors u_i + v_i.
inline std::optional<Subspace> is_perspective(const Subspace& u, const Subspace& v) {
  require_same_ambient(u, v, "is_perspective");
  if (u.dim() != v.dim()) return std::nullopt;
  Subspace w = intersect(u, v);
  std::vector<std::vector<Rational>> us = basis_extension(w, u);
  std::vector<std::vector<Rational>> vs = basis_extension(w, v);
  std::vector<std::vector<Rational>> diag;
  for (std::size_t i = 0; i < us.size(); ++i) {
    std::vector<Rational> d(u.ambient_dim());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = us[i][j] + vs[i][j];
    diag.push_back(std::move(d));
  }
  Subspace c = Subspace::span(u.ambient(), diag);
  Subspace top = sum(u, v);
  if (sum(u, c) == top && sum(v, c) == top && intersect(u, c).is_zero() &&
      intersect(v, c).is_zero())
    return c;
  return std::nullopt;  // cannot happen for equal dimensions; kept as a guard
}

struct PolaritySampleReport {
  bool all_pass = true;
  std::vector<std::string> failures;
};

// Cor. criterion on sample atoms: p + p^perp = 1 and p * p^perp = 0.
inline PolaritySampleReport check_polarity_sample(const FormSpace& space,
                                                  const std::vector<Subspace>& atoms) {
  PolaritySampleReport rep;
  for (const Subspace& p : atoms) {
    if (!(p.ambient() == space)) throw AmbientMismatch("check_polarity_sample: wrong ambient");
    if (p.dim() != 1) throw NotAnAtom("check_polarity_sample: subspace not 1-dimensional");
    Subspace q = ortho_complement(p);
    bool joins = sum(p, q).is_full();
    bool meets = intersect(p, q).is_zero();
    if (!joins || !meets) {
      rep.all_pass = false;
      rep.failures.push_back("atom fails polarity check");
    }
  }
  return rep;
}

// Regression guard; modularity is automatic in L(Q^n).
inline bool modular_law_check(const Subspace& u, const Subspace& v, const Subspace& w) {
  require_same_ambient(u, v, "modular_law_check");
  require_same_ambient(u, w, "modular_law_check");
  if (!leq(u, w)) throw NotBelow("modular_law_check: u not below w");
  return sum(u, intersect(v, w)) == intersect(sum(u, v), w);
}

// --- text formats ---

inline std::string to_text(const Subspace& u) {
  std::ostringstream os;
  os << "ambient " << u.ambient_dim() << '\n';
  os << u.dim() << ' ' << u.ambient_dim() << '\n';
  for (std::size_t i = 0; i < u.dim(); ++i) {
    for (std::size_t j = 0; j < u.ambient_dim(); ++j) {
      if (j) os << ' ';
      os << u.basis().at(i, j).str();
    }
    os << '\n';
  }
  return os.str();
}

inline Subspace subspace_from_stream(std::istream& is, const FormSpace& ambient) {
  std::string kw;
  std::size_t n = 0;
  if (!(is >> kw >> n) || kw != "ambient") throw ParseError("subspace: missing 'ambient n' line");
  if (n != ambient.dimension()) throw DimensionMismatch("subspace: ambient dimension mismatch");
  return Subspace(ambient, matrix_from_stream(is));
}

inline Subspace subspace_from_text(const std::string& text, const FormSpace& ambient) {
  std::istringstream is(text);
  return subspace_from_stream(is, ambient);
}

}  // namespace molkit
