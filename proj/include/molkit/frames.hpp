#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "molkit/errors.hpp"
#include "molkit/subspace.hpp"

namespace molkit {

// A von Neumann n-frame in a subspace MOL. Indices are 0-based. Immutable
// and validated on construction; block_size is set for canonical frames.
class Frame {
 public:
  static Frame check_frame(const std::vector<Subspace>& axes,
                           const std::vector<std::vector<Subspace>>& sides) {
    return Frame(axes, sides, std::nullopt);
  }

  // E_i spanned by coordinates of block i, E_ij by paired differences.
  static Frame canonical(int order, std::size_t block, const FormSpace& form) {
    if (order < 3) throw FrameAxiomViolation("frames require order >= 3");
    std::size_t n = static_cast<std::size_t>(order);
    if (form.dimension() != n * block)
      throw DimensionMismatch("canonical frame: ambient dimension must be order * block");
    auto unit = [&](std::size_t coord) {
      std::vector<Rational> v(form.dimension(), Rational(0));
      v[coord] = Rational(1);
      return v;
    };
    std::vector<Subspace> axes;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::vector<Rational>> rows;
      for (std::size_t t = 0; t < block; ++t) rows.push_back(unit(i * block + t));
      axes.push_back(Subspace::span(form, rows));
    }
    std::vector<std::vector<Subspace>> sides(n, std::vector<Subspace>());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) {
          sides[i].push_back(Subspace::zero(form));
          continue;
        }
        std::vector<std::vector<Rational>> rows;
        for (std::size_t t = 0; t < block; ++t) {
          std::vector<Rational> v(form.dimension(), Rational(0));
          v[i * block + t] = Rational(1);
          v[j * block + t] = Rational(-1);
          rows.push_back(v);
        }
        sides[i].push_back(Subspace::span(form, rows));
      }
    Frame f(axes, sides, block);
    return f;
  }

  int order() const { return static_cast<int>(axes_.size()); }
  const FormSpace& ambient() const { return axes_.front().ambient(); }
  const Subspace& axis(int i) const { return axes_[i]; }
  const Subspace& side(int i, int j) const {
    if (i == j) throw BadIndexPattern("frame side needs i != j");
    return sides_[i][j];
  }
  bool spanning() const { return spanning_; }
  bool orthogonal() const { return orthogonal_; }
  std::optional<std::size_t> block_size() const { return block_; }

  Subspace sum_axes(std::initializer_list<int> is) const {
    Subspace s = Subspace::zero(ambient());
    for (int i : is) s = sum(s, axes_[i]);
    return s;
  }

 private:
  std::vector<Subspace> axes_;
  std::vector<std::vector<Subspace>> sides_;
  bool spanning_ = false, orthogonal_ = false;
  std::optional<std::size_t> block_;

  Frame(const std::vector<Subspace>& axes, const std::vector<std::vector<Subspace>>& sides,
        std::optional<std::size_t> block)
      : axes_(axes), sides_(sides), block_(block) {
    int n = order();
    if (n < 3) throw FrameAxiomViolation("frames require order >= 3");
    if (static_cast<int>(sides_.size()) != n)
      throw DimensionMismatch("frame sides must be an n x n table");
    for (auto& row : sides_)
      if (static_cast<int>(row.size()) != n)
        throw DimensionMismatch("frame sides must be an n x n table");
    const FormSpace& sp = axes_.front().ambient();
    for (const auto& a : axes_)
      if (!(a.ambient() == sp)) throw AmbientMismatch("frame elements in different spaces");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && !(sides_[i][j].ambient() == sp))
          throw AmbientMismatch("frame elements in different spaces");

    Subspace bot = axes_[0];
    for (int i = 1; i < n; ++i) bot = intersect(bot, axes_[i]);
    for (int j = 0; j < n; ++j) {
      Subspace rest = Subspace::zero(sp);
      for (int i = 0; i < n; ++i)
        if (i != j) rest = sum(rest, axes_[i]);
      if (intersect(axes_[j], rest) != bot)
        throw FrameAxiomViolation("a_j * sum_{i!=j} a_i != prod a_i at j=" + std::to_string(j));
    }
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (j == k) continue;
        if (sides_[j][k] != sides_[k][j])
          throw FrameAxiomViolation("a_jk != a_kj at (" + std::to_string(j) + "," +
                                    std::to_string(k) + ")");
        if (intersect(axes_[j], sides_[j][k]) != bot)
          throw FrameAxiomViolation("a_j * a_jk != prod a_i at (" + std::to_string(j) + "," +
                                    std::to_string(k) + ")");
        if (sum(axes_[j], sides_[j][k]) != sum(axes_[j], axes_[k]))
          throw FrameAxiomViolation("a_j + a_jk != a_j + a_k at (" + std::to_string(j) + "," +
                                    std::to_string(k) + ")");
      }
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (j == k || k == l || j == l) continue;
          if (sides_[j][l] != intersect(sum(axes_[j], axes_[l]),
                                        sum(sides_[j][k], sides_[k][l])))
            throw FrameAxiomViolation("a_jl != (a_j+a_l)(a_jk+a_kl) at (" + std::to_string(j) +
                                      "," + std::to_string(k) + "," + std::to_string(l) + ")");
        }
    Subspace top = Subspace::zero(sp);
    for (const auto& a : axes_) top = sum(top, a);
    spanning_ = bot.is_zero() && top.is_full();
    orthogonal_ = true;
    for (int j = 0; j < n && orthogonal_; ++j)
      for (int k = 0; k < n && orthogonal_; ++k)
        if (j != k) orthogonal_ = leq(axes_[j], ortho_complement(axes_[k]));
  }
};

// An element of the coordinate domain R_ij = { r : r a_j = a_i a_j,
// r + a_j = a_i + a_j }, held by its carrier subspace.
struct RingElem {
  std::shared_ptr<const Frame> frame;
  int i, j;
  Subspace carrier;

  friend bool operator==(const RingElem& a, const RingElem& b) {
    return a.i == b.i && a.j == b.j && a.carrier == b.carrier;
  }
  friend bool operator!=(const RingElem& a, const RingElem& b) { return !(a == b); }
};

inline bool in_coordinate_domain(const Frame& f, int i, int j, const Subspace& s) {
  return intersect(s, f.axis(j)) == intersect(f.axis(i), f.axis(j)) &&
         sum(s, f.axis(j)) == sum(f.axis(i), f.axis(j));
}

inline RingElem as_ring_elem(std::shared_ptr<const Frame> f, int i, int j, Subspace s) {
  if (i == j || i < 0 || j < 0 || i >= f->order() || j >= f->order())
    throw BadIndexPattern("ring element needs distinct indices in range");
  if (!in_coordinate_domain(*f, i, j, s))
    throw NotInCoordinateDomain("subspace fails the R_ij membership conditions");
  return RingElem{std::move(f), i, j, std::move(s)};
}

// (e_i - e_j r) R as a subspace: block i carries v, block j carries -r v.
inline RingElem embed_ring(const RationalMatrix& r, std::shared_ptr<const Frame> f, int i, int j) {
  if (!f->block_size().has_value())
    throw BadIndexPattern("embed_ring needs a canonical block frame");
  std::size_t m = *f->block_size();
  if (r.rows() != m || r.cols() != m) throw DimensionMismatch("embed_ring: block size mismatch");
  const FormSpace& sp = f->ambient();
  std::vector<std::vector<Rational>> rows;
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<Rational> v(sp.dimension(), Rational(0));
    v[i * m + c] = Rational(1);
    for (std::size_t t = 0; t < m; ++t) v[j * m + t] = -r.at(t, c);
    rows.push_back(v);
  }
  return as_ring_elem(std::move(f), i, j, Subspace::span(sp, rows));
}

inline RingElem embed_ring(const Rational& r, std::shared_ptr<const Frame> f, int i, int j) {
  RationalMatrix m(1, 1);
  m.at(0, 0) = r;
  return embed_ring(m, std::move(f), i, j);
}

// Recovers the matrix r from a carrier (canonical frames only).
inline RationalMatrix value_of(const RingElem& e) {
  const Frame& f = *e.frame;
  if (!f.block_size().has_value())
    throw BadIndexPattern("value_of needs a canonical block frame");
  std::size_t m = *f.block_size();
  const RationalMatrix& b = e.carrier.basis();
  if (b.rows() != m) throw NotInCoordinateDomain("carrier has wrong dimension");
  RationalMatrix bi(m, m), bj(m, m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) {
      bi.at(r, c) = b.at(r, e.i * m + c);
      bj.at(r, c) = b.at(r, e.j * m + c);
    }
  RationalMatrix sol = inverse(bi) * bj;  // row c = block-j part of the vector with block-i = e_c
  return -sol.transpose();
}

inline int least_aux(const Frame& f, int i, int j) {
  for (int k = 0; k < f.order(); ++k)
    if (k != i && k != j) return k;
  throw BadIndexPattern("no auxiliary index available");
}

// pi transfers: r_ik = (r + a_jk)(a_i + a_k), r_kj = (r + a_ik)(a_k + a_j).
inline RingElem transfer_second(const RingElem& r, int k) {
  const Frame& f = *r.frame;
  if (k == r.i || k == r.j) throw BadIndexPattern("transfer target must be a fresh index");
  Subspace s = intersect(sum(r.carrier, f.side(r.j, k)), sum(f.axis(r.i), f.axis(k)));
  return as_ring_elem(r.frame, r.i, k, std::move(s));
}

inline RingElem transfer_first(const RingElem& r, int k) {
  const Frame& f = *r.frame;
  if (k == r.i || k == r.j) throw BadIndexPattern("transfer target must be a fresh index");
  Subspace s = intersect(sum(r.carrier, f.side(r.i, k)), sum(f.axis(k), f.axis(r.j)));
  return as_ring_elem(r.frame, k, r.j, std::move(s));
}

// Transfer to any position sharing one index with the source.
inline RingElem pi_transfer(const RingElem& r, int ti, int tj) {
  if (ti == tj) throw BadIndexPattern("pi_transfer: target indices equal");
  if (ti == r.i && tj != r.j) return transfer_second(r, tj);
  if (tj == r.j && ti != r.i) return transfer_first(r, ti);
  throw BadIndexPattern("pi_transfer: target must share exactly one index in place");
}

inline void require_same_position(const RingElem& a, const RingElem& b, const char* op) {
  if (a.i != b.i || a.j != b.j) throw IndexMismatch(std::string(op) + ": operands in different R_ij");
  if (a.frame.get() != b.frame.get() && !(a.frame->ambient() == b.frame->ambient()))
    throw IndexMismatch(std::string(op) + ": operands over different frames");
}

inline RingElem ring_zero(std::shared_ptr<const Frame> f, int i, int j) {
  Subspace ai = f->axis(i);
  return as_ring_elem(std::move(f), i, j, std::move(ai));
}

inline RingElem ring_unit(std::shared_ptr<const Frame> f, int i, int j) {
  Subspace u = f->side(i, j);
  return as_ring_elem(std::move(f), i, j, std::move(u));
}

// x + y via one auxiliary index k:
//   (a_i + a_j) * [ ((x + a_k)(a_ik + a_j)) + ((y + a_ik)(a_j + a_k)) ]
inline RingElem ring_add(const RingElem& x, const RingElem& y, int k = -1) {
  require_same_position(x, y, "ring_add");
  const Frame& f = *x.frame;
  if (k < 0) k = least_aux(f, x.i, x.j);
  if (k == x.i || k == x.j) throw BadIndexPattern("ring_add: bad auxiliary index");
  Subspace u = intersect(sum(x.carrier, f.axis(k)), sum(f.side(x.i, k), f.axis(x.j)));
  Subspace w = intersect(sum(y.carrier, f.side(x.i, k)), sum(f.axis(x.j), f.axis(k)));
  Subspace s = intersect(sum(f.axis(x.i), f.axis(x.j)), sum(u, w));
  return as_ring_elem(x.frame, x.i, x.j, std::move(s));
}

// -x: reflect x + a_k against the doubled unit placed at (k, j):
//   (a_i + a_j) * [ ((x + a_k)(a_jk + a_i)) + ((1+1) transferred to (k,j)) ]
inline RingElem ring_neg(const RingElem& x, int k = -1) {
  const Frame& f = *x.frame;
  if (k < 0) k = least_aux(f, x.i, x.j);
  if (k == x.i || k == x.j) throw BadIndexPattern("ring_neg: bad auxiliary index");
  RingElem unit = ring_unit(x.frame, x.i, x.j);
  RingElem two = ring_add(unit, unit, k);
  RingElem two_kj = transfer_first(two, k);
  Subspace u = intersect(sum(x.carrier, f.axis(k)), sum(f.side(x.j, k), f.axis(x.i)));
  Subspace s = intersect(sum(f.axis(x.i), f.axis(x.j)), sum(u, two_kj.carrier));
  return as_ring_elem(x.frame, x.i, x.j, std::move(s));
}

inline RingElem ring_sub(const RingElem& x, const RingElem& y, int k = -1) {
  return ring_add(x, ring_neg(y, k), k);
}

// x * y (x on the left): (s r)_ik = (r_ij + s_jk)(a_i + a_k) instantiated
// with y moved to (i,k) and x moved to (k,j).
inline RingElem ring_mul(const RingElem& x, const RingElem& y, int k = -1) {
  require_same_position(x, y, "ring_mul");
  const Frame& f = *x.frame;
  if (k < 0) k = least_aux(f, x.i, x.j);
  if (k == x.i || k == x.j) throw BadIndexPattern("ring_mul: bad auxiliary index");
  RingElem y_ik = transfer_second(y, k);
  RingElem x_kj = transfer_first(x, k);
  Subspace s = intersect(sum(y_ik.carrier, x_kj.carrier), sum(f.axis(x.i), f.axis(x.j)));
  return as_ring_elem(x.frame, x.i, x.j, std::move(s));
}

// Invertible elements of R_ij are those which also lie in R_ji; the same
// carrier then represents r^-1 at (j,i), transferred back to (i,j).
inline std::optional<RingElem> ring_inverse(const RingElem& x, int k = -1) {
  const Frame& f = *x.frame;
  if (!in_coordinate_domain(f, x.j, x.i, x.carrier)) return std::nullopt;
  if (k < 0) k = least_aux(f, x.i, x.j);
  RingElem inv = as_ring_elem(x.frame, x.j, x.i, x.carrier);
  inv = transfer_second(inv, k);   // (j,i) -> (j,k)
  inv = transfer_first(inv, x.i);  // (j,k) -> (i,k)
  inv = transfer_second(inv, x.j); // (i,k) -> (i,j)
  return inv;
}

// l(x, x', a_1..a_n) = (x' + x(x' + S))(x + x' S)(a_1 + a_2), S = sum_{j!=1} a_j
// (0-based: S omits the axis with index 1). Always lands in R_01.
inline RingElem t_polynomial(const Subspace& x, std::shared_ptr<const Frame> f) {
  const Frame& fr = *f;
  if (!fr.spanning() || !fr.orthogonal())
    throw FrameAxiomViolation("t_polynomial needs a spanning orthogonal frame");
  Subspace xp = ortho_complement(x);
  Subspace s = Subspace::zero(fr.ambient());
  for (int j = 0; j < fr.order(); ++j)
    if (j != 1) s = sum(s, fr.axis(j));
  Subspace left = sum(xp, intersect(x, sum(xp, s)));
  Subspace mid = sum(x, intersect(xp, s));
  Subspace val = intersect(intersect(left, mid), sum(fr.axis(0), fr.axis(1)));
  return as_ring_elem(std::move(f), 0, 1, std::move(val));
}

// Form blocks of a canonical frame over a block-diagonal gram.
inline std::vector<RationalMatrix> form_blocks(const Frame& f) {
  if (!f.block_size().has_value()) throw BadIndexPattern("form_blocks: canonical frames only");
  std::size_t m = *f.block_size();
  const RationalMatrix& g = f.ambient().gram();
  int n = f.order();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (!g.submatrix(i * m, j * m, m, m).is_zero())
        throw Error("form is not block diagonal with respect to the frame");
    }
  std::vector<RationalMatrix> out;
  for (int i = 0; i < n; ++i) out.push_back(g.submatrix(i * m, i * m, m, m));
  return out;
}

// The involution polynomial at (0,1): reads off (-r* alpha_2)_{21} as
// r' (a_1 + a_2), divides out (-alpha_2)_{21} = a_12' (a_1 + a_2) with ring
// operations, and transfers back. Requires alpha_1 = identity.
inline RingElem star_polynomial(const RingElem& r) {
  if (r.i != 0 || r.j != 1) throw IndexMismatch("star_polynomial is defined at position (0,1)");
  const Frame& f = *r.frame;
  if (!f.spanning() || !f.orthogonal())
    throw FrameAxiomViolation("star_polynomial needs a spanning orthogonal frame");
  std::vector<RationalMatrix> alphas = form_blocks(f);
  if (alphas[0] != RationalMatrix::identity(alphas[0].rows()))
    throw Error("star_polynomial: first form block must be the identity");
  Subspace a01 = sum(f.axis(0), f.axis(1));
  RingElem u = as_ring_elem(r.frame, 1, 0, intersect(ortho_complement(r.carrier), a01));
  RingElem v = as_ring_elem(r.frame, 1, 0, intersect(ortho_complement(f.side(0, 1)), a01));
  std::optional<RingElem> vinv = ring_inverse(v);
  if (!vinv) throw SingularAlpha("star_polynomial: form block not invertible in the ring");
  RingElem w = ring_mul(u, *vinv);  // value (-r* a2)(-a2^-1) = r*
  int k = least_aux(f, 0, 1);
  w = transfer_second(w, k);
  w = transfer_first(w, 0);
  w = transfer_second(w, 1);
  return w;
}

// Matrix involution (x_ij)* = alpha_i^-1 x*_ji alpha_j on uniform blocks.
inline RationalMatrix matrix_involution(const std::vector<RationalMatrix>& alphas,
                                        const RationalMatrix& x) {
  if (alphas.empty()) throw DimensionMismatch("matrix_involution: no blocks");
  std::size_t m = alphas[0].rows();
  std::size_t n = alphas.size();
  std::vector<RationalMatrix> inverses;
  for (const auto& a : alphas) {
    if (a.rows() != m || a.cols() != m)
      throw DimensionMismatch("matrix_involution: ragged blocks");
    if (!a.is_symmetric()) throw NotSymmetric("matrix_involution: alpha blocks must be hermitian");
    if (!is_invertible(a)) throw SingularAlpha("matrix_involution: alpha block singular");
    inverses.push_back(inverse(a));
  }
  if (x.rows() != n * m || x.cols() != n * m)
    throw DimensionMismatch("matrix_involution: matrix size must be blocks * block size");
  RationalMatrix out(n * m, n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      RationalMatrix xji = x.submatrix(j * m, i * m, m, m);
      RationalMatrix blk = inverses[i] * xji.transpose() * alphas[j];
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) out.at(i * m + r, j * m + c) = blk.at(r, c);
    }
  return out;
}

}  // namespace molkit
