#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "molkit/errors.hpp"
#include "molkit/finlat.hpp"

namespace molkit {

inline std::size_t closure_cap() {
  if (const char* s = std::getenv("MOLKIT_CAP")) {
    long v = std::atol(s);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 100000;  // default iteration cap for free closures
}

// A projective space given combinatorially: points plus the collinear
// 3-element subsets, optionally with a point orthogonality.
class PointGeometry {
 public:
  PointGeometry(std::vector<std::string> names, std::set<std::array<int, 3>> collinear,
                std::optional<std::vector<std::vector<char>>> perp = std::nullopt)
      : names_(std::move(names)), collinear_(std::move(collinear)), perp_(std::move(perp)) {
    int n = size();
    for (const auto& t : collinear_) {
      if (t[0] < 0 || t[2] >= n || !(t[0] < t[1] && t[1] < t[2]))
        throw Error("PointGeometry: collinear triples must be sorted 3-element subsets");
    }
    if (perp_) {
      if (static_cast<int>(perp_->size()) != n) throw DimensionMismatch("PointGeometry: perp size");
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          if ((*perp_)[p][q] != (*perp_)[q][p])
            throw Error("PointGeometry: orthogonality must be symmetric");
      // p perp q, p perp r, s <= q+r  imply  p perp s
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          if (!(*perp_)[p][q]) continue;
          for (int r = 0; r < n; ++r) {
            if (!(*perp_)[p][r]) continue;
            for (int s : line(q, r))
              if (!(*perp_)[p][s])
                throw Error("PointGeometry: orthogonality not compatible with lines");
          }
        }
    }
    check_triangle_axiom();
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int p) const { return names_[p]; }
  const std::set<std::array<int, 3>>& collinear_triples() const { return collinear_; }
  bool has_perp() const { return perp_.has_value(); }
  bool perp(int p, int q) const { return (*perp_)[p][q] != 0; }

  bool collinear(int p, int q, int r) const {
    std::array<int, 3> t{p, q, r};
    std::sort(t.begin(), t.end());
    return collinear_.count(t) > 0;
  }

  // The line through two distinct points: p, q and everything collinear.
  std::vector<int> line(int p, int q) const {
    if (p == q) return {p};
    std::vector<int> out{std::min(p, q), std::max(p, q)};
    for (int u = 0; u < size(); ++u)
      if (u != p && u != q && collinear(p, q, u)) out.push_back(u);
    std::sort(out.begin(), out.end());
    return out;
  }

  // Least subspace containing the set: closed under collinearity.
  std::vector<int> subspace_closure(std::vector<int> pts) const {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<char> in(size(), 0);
    for (int p : pts) in[p] = 1;
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& t : collinear_) {
        int have = in[t[0]] + in[t[1]] + in[t[2]];
        if (have == 2) {
          int missing = !in[t[0]] ? t[0] : (!in[t[1]] ? t[1] : t[2]);
          in[missing] = 1;
          grew = true;
        }
      }
    }
    std::vector<int> out;
    for (int p = 0; p < size(); ++p)
      if (in[p]) out.push_back(p);
    return out;
  }

  std::vector<int> subspace_join(const std::vector<int>& a, const std::vector<int>& b) const {
    std::vector<int> u = a;
    u.insert(u.end(), b.begin(), b.end());
    return subspace_closure(u);
  }

  // p^perp as a point set (a subspace when perp is an orthogonality).
  std::vector<int> perp_set(const std::vector<int>& pts) const {
    if (!perp_) throw Error("PointGeometry: no orthogonality present");
    std::vector<int> out;
    for (int q = 0; q < size(); ++q) {
      bool all = true;
      for (int p : pts) all = all && perp(p, q);
      if (all) out.push_back(q);
    }
    return out;
  }

 private:
  std::vector<std::string> names_;
  std::set<std::array<int, 3>> collinear_;
  std::optional<std::vector<std::vector<char>>> perp_;

  void check_triangle_axiom() const {
    // If p,s,q and q,t,r are collinear but p,q,r are not, a unique u exists
    // with p,r,u and s,t,u collinear.
    for (const auto& A : collinear_)
      for (const auto& B : collinear_)
        for (int q : A) {
          if (std::find(B.begin(), B.end(), q) == B.end()) continue;
          std::array<int, 2> ps{-1, -1}, tr{-1, -1};
          int i = 0, j = 0;
          for (int x : A)
            if (x != q) ps[i++] = x;
          for (int x : B)
            if (x != q) tr[j++] = x;
          for (int swap_a = 0; swap_a < 2; ++swap_a)
            for (int swap_b = 0; swap_b < 2; ++swap_b) {
              int p = ps[swap_a], s = ps[1 - swap_a];
              int t = tr[swap_b], r = tr[1 - swap_b];
              if (p == r || p == t || r == s) continue;
              if (collinear(p, q, r)) continue;
              int count = 0;
              for (int u = 0; u < size(); ++u) {
                if (u == p || u == r || u == s || u == t) continue;
                if (collinear(p, r, u) && collinear(s, t, u)) ++count;
              }
              if (count != 1)
                throw Error("PointGeometry: triangle axiom fails at (" + names_[p] + "," +
                            names_[q] + "," + names_[r] + ")");
            }
        }
  }
};

struct PointsOfLattice {
  PointGeometry geometry;
  std::vector<int> atom_of_point;  // geometry point -> lattice element
};

// Atoms of a modular lattice as a projective space: p,q,r collinear iff
// p+q = p+r = q+r; canonical orthogonality p perp q iff p <= q'.
inline PointsOfLattice points_of(const FiniteOrtholattice& l) {
  if (!l.validate().is_modular) throw NotModular("points_of: lattice must be modular");
  std::vector<int> at = l.atoms();
  int m = static_cast<int>(at.size());
  std::vector<std::string> names;
  for (int p : at) names.push_back(l.name(p));
  std::set<std::array<int, 3>> coll;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        int jij = l.join(at[i], at[j]);
        if (jij == l.join(at[i], at[k]) && jij == l.join(at[j], at[k]))
          coll.insert({i, j, k});
      }
  std::optional<std::vector<std::vector<char>>> perp;
  if (l.has_ortho()) {
    std::vector<std::vector<char>> rel(m, std::vector<char>(m, 0));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (l.leq(at[i], l.ortho(at[j]))) rel[i][j] = 1;
    perp = std::move(rel);
  }
  return {PointGeometry(std::move(names), std::move(coll), std::move(perp)), at};
}

struct ComponentsReport {
  std::vector<std::vector<int>> components;
  bool cross_orthogonal = true;  // meaningful only when perp present
  std::vector<std::string> violations;
};

// Connected components under "lies on a common collinear triple"; with a
// polarity present, distinct components must be pairwise orthogonal.
inline ComponentsReport components(const PointGeometry& g) {
  int n = g.size();
  std::vector<int> rep(n);
  for (int i = 0; i < n; ++i) rep[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (rep[x] != x) x = rep[x] = rep[rep[x]];
    return x;
  };
  for (const auto& t : g.collinear_triples()) {
    rep[find(t[0])] = find(t[1]);
    rep[find(t[1])] = find(t[2]);
  }
  std::map<int, std::vector<int>> comps;
  for (int i = 0; i < n; ++i) comps[find(i)].push_back(i);
  ComponentsReport r;
  for (auto& [root, pts] : comps) r.components.push_back(pts);
  if (g.has_perp()) {
    for (std::size_t a = 0; a < r.components.size(); ++a)
      for (std::size_t b = a + 1; b < r.components.size(); ++b)
        for (int p : r.components[a])
          for (int q : r.components[b])
            if (!g.perp(p, q)) {
              r.cross_orthogonal = false;
              r.violations.push_back(g.name(p) + " not orthogonal to " + g.name(q));
            }
  }
  return r;
}

struct ClosureResult {
  std::vector<int> points;
  bool cap_exceeded = false;
};

// Least superset of the seed closed under the triangle-axiom operation.
inline ClosureResult subgeometry_closure(const PointGeometry& g, const std::vector<int>& seed,
                                         std::size_t cap = closure_cap()) {
  std::vector<char> in(g.size(), 0);
  for (int p : seed) in[p] = 1;
  std::size_t applications = 0;
  bool grew = true;
  ClosureResult out;
  while (grew) {
    grew = false;
    std::vector<int> cur;
    for (int p = 0; p < g.size(); ++p)
      if (in[p]) cur.push_back(p);
    for (int p : cur)
      for (int s : cur)
        for (int q : cur) {
          if (p == s || p == q || s == q || !g.collinear(p, s, q)) continue;
          for (int t : cur)
            for (int r : cur) {
              if (t == r || t == q || r == q || !g.collinear(q, t, r)) continue;
              if (p == r || g.collinear(p, q, r)) continue;
              for (int u = 0; u < g.size(); ++u) {
                if (in[u] || u == p || u == r || u == s || u == t) continue;
                if (g.collinear(p, r, u) && g.collinear(s, t, u)) {
                  if (++applications > cap) {
                    out.cap_exceeded = true;
                    for (int x = 0; x < g.size(); ++x)
                      if (in[x]) out.points.push_back(x);
                    return out;
                  }
                  in[u] = 1;
                  grew = true;
                }
              }
            }
        }
  }
  for (int x = 0; x < g.size(); ++x)
    if (in[x]) out.points.push_back(x);
  return out;
}

struct PolarityReport {
  bool nondegenerate = true;
  bool anisotropic = true;
  bool pairs_condition = true;  // (p+r) meets p^perp for all p != r
  bool is_polarity = false;
  std::vector<std::string> failures;
};

// Nondegeneracy plus the pairwise criterion; anisotropy reported separately.
inline PolarityReport check_polarity(const PointGeometry& g) {
  if (!g.has_perp()) throw Error("check_polarity: no orthogonality present");
  PolarityReport r;
  for (int p = 0; p < g.size(); ++p) {
    if (g.perp(p, p)) {
      r.anisotropic = false;
      r.failures.push_back("isotropic point " + g.name(p));
    }
    bool some_nonperp = false;
    for (int q = 0; q < g.size(); ++q) some_nonperp = some_nonperp || !g.perp(p, q);
    if (!some_nonperp) {
      r.nondegenerate = false;
      r.failures.push_back("point " + g.name(p) + " orthogonal to everything");
    }
  }
  for (int p = 0; p < g.size(); ++p) {
    std::vector<int> pperp = g.perp_set({p});
    for (int q = 0; q < g.size(); ++q) {
      if (p == q) continue;
      std::vector<int> ln = g.line(p, q);
      bool meets = false;
      for (int u : ln)
        meets = meets || std::find(pperp.begin(), pperp.end(), u) != pperp.end();
      if (!meets) {
        r.pairs_condition = false;
        r.failures.push_back("line through " + g.name(p) + "," + g.name(q) +
                             " misses the polar of " + g.name(p));
      }
    }
  }
  r.is_polarity = r.nondegenerate && r.pairs_condition;
  return r;
}

// --- representations ----------------------------------------------------------

struct RepresentationMap {
  FiniteOrtholattice source;
  std::vector<int> sub;                  // subalgebra elements of the source
  PointGeometry geometry;                // target point geometry
  std::vector<int> atom_of_point;        // geometry point -> source element
  std::map<int, std::vector<int>> eta;   // sub element -> sorted point set
};

inline bool is_subalgebra(const FiniteOrtholattice& l, const std::vector<int>& sub) {
  std::vector<char> in(l.size(), 0);
  for (int x : sub) in[x] = 1;
  if (!in[l.bottom()] || !in[l.top()]) return false;
  for (int x : sub)
    for (int y : sub)
      if (!in[l.join(x, y)] || !in[l.meet(x, y)]) return false;
  if (l.has_ortho())
    for (int x : sub)
      if (!in[l.ortho(x)]) return false;
  return true;
}

namespace detail {

inline void verify_representation(const RepresentationMap& rep,
                                  const std::vector<int>& classes_of);

}  // namespace detail

// eta(a) = points below a, into the projective space of the atoms of m.
inline RepresentationMap canonical_representation(const FiniteOrtholattice& m,
                                                  const std::vector<int>& sub) {
  if (!is_subalgebra(m, sub)) throw NotSubalgebra("canonical_representation");
  PointsOfLattice pts = points_of(m);
  RepresentationMap rep{m, sub, pts.geometry, pts.atom_of_point, {}};
  for (int a : sub) {
    std::vector<int> set;
    for (int i = 0; i < rep.geometry.size(); ++i)
      if (m.leq(rep.atom_of_point[i], a)) set.push_back(i);
    rep.eta[a] = set;
  }
  std::vector<int> ident(m.size());
  for (int i = 0; i < m.size(); ++i) ident[i] = i;
  detail::verify_representation(rep, ident);
  return rep;
}

// Induced point orthogonality of a representation:
// p perp q iff p in eta(a) and q in eta(a') for some a.
inline std::vector<std::vector<char>> induced_point_orthogonality(const RepresentationMap& rep) {
  if (!rep.source.has_ortho()) throw Error("induced_point_orthogonality: source has no ortho");
  int n = rep.geometry.size();
  std::vector<std::vector<char>> out(n, std::vector<char>(n, 0));
  for (int a : rep.sub) {
    auto ia = rep.eta.find(a);
    auto ic = rep.eta.find(rep.source.ortho(a));
    if (ia == rep.eta.end() || ic == rep.eta.end()) continue;
    for (int p : ia->second)
      for (int q : ic->second) {
        out[p][q] = 1;
        out[q][p] = 1;
      }
  }
  // must be an anisotropic orthogonality and eta(a') subset of eta(a)^perp
  for (int p = 0; p < n; ++p)
    if (out[p][p]) throw RepresentationFailure("induced orthogonality not anisotropic");
  for (int a : rep.sub) {
    const std::vector<int>& im = rep.eta.at(a);
    for (int q : rep.eta.at(rep.source.ortho(a)))
      for (int p : im)
        if (!out[p][q]) throw RepresentationFailure("eta(a') not inside eta(a)^perp");
  }
  return out;
}

namespace detail {

// Shared verification: eta is well defined on classes, preserves 0/1, meets,
// joins (in the subspace lattice of the geometry), is injective on classes,
// and maps orthocomplements to orthogonal sets.
inline void verify_representation(const RepresentationMap& rep,
                                  const std::vector<int>& classes_of) {
  const FiniteOrtholattice& m = rep.source;
  auto eta_of = [&](int a) -> const std::vector<int>& { return rep.eta.at(a); };
  // well defined on classes + injective across classes
  for (int a : rep.sub)
    for (int b : rep.sub) {
      if (classes_of[a] == classes_of[b] && eta_of(a) != eta_of(b))
        throw RepresentationFailure("eta not well defined on classes");
      if (classes_of[a] != classes_of[b] && eta_of(a) == eta_of(b))
        throw RepresentationFailure("eta not injective");
    }
  if (!eta_of(m.bottom()).empty()) throw RepresentationFailure("eta(0) nonempty");
  std::vector<int> allpts;
  for (int i = 0; i < rep.geometry.size(); ++i) allpts.push_back(i);
  if (eta_of(m.top()) != allpts) throw RepresentationFailure("eta(1) not the whole space");
  for (int a : rep.sub)
    for (int b : rep.sub) {
      std::vector<int> cap;
      std::set_intersection(eta_of(a).begin(), eta_of(a).end(), eta_of(b).begin(),
                            eta_of(b).end(), std::back_inserter(cap));
      if (cap != eta_of(m.meet(a, b))) throw RepresentationFailure("eta misses a meet");
      if (rep.geometry.subspace_join(eta_of(a), eta_of(b)) != eta_of(m.join(a, b)))
        throw RepresentationFailure("eta misses a join");
    }
  if (m.has_ortho() && rep.geometry.has_perp()) {
    for (int a : rep.sub) {
      for (int p : eta_of(a))
        for (int q : eta_of(m.ortho(a)))
          if (!rep.geometry.perp(p, q))
            throw RepresentationFailure("eta(a) not orthogonal to eta(a')");
      // by modularity the polar of the image is the image of the complement
      if (rep.geometry.perp_set(eta_of(a)) != eta_of(m.ortho(a)))
        throw RepresentationFailure("eta(a)^perp differs from eta(a')");
    }
  }
}

}  // namespace detail

// Geometric representation of a quotient sub/theta on the points below the
// neutral filter F = { x : x theta 1 }: Q = { p : p <= F },
// eta(a/theta) = { p in Q : p <= a }. The finite case always succeeds;
// a RepresentationFailure signals an implementation bug. As a step the
// filter-stability of the two Frink meets is checked for every triple.
inline RepresentationMap quotient_representation(const FiniteOrtholattice& m,
                                                 const std::vector<int>& sub,
                                                 const QuotientSet& theta) {
  if (!is_subalgebra(m, sub)) throw NotSubalgebra("quotient_representation");
  // neutral filter and its minimum (finiteness replaces compactness here)
  std::vector<int> filter;
  int fmin = m.top();
  for (int x : sub)
    if (theta.contains(m.top(), x) && m.leq(x, m.top())) {
      filter.push_back(x);
      fmin = m.meet(fmin, x);
    }
  PointsOfLattice pts = points_of(m);
  // Q: points below every member of F, i.e. below min F
  std::vector<int> qpoints;
  for (int i = 0; i < pts.geometry.size(); ++i)
    if (m.leq(pts.atom_of_point[i], fmin)) qpoints.push_back(i);

  // filter stability of the Frink meets for all applicable triples
  for (int a : sub)
    for (int b : sub) {
      if (m.meet(a, b) != m.bottom()) continue;
      for (int gi : qpoints) {
        int p = pts.atom_of_point[gi];
        if (!m.leq(p, m.join(a, b)) || m.leq(p, a) || m.leq(p, b)) continue;
        int qa = m.meet(a, m.join(p, b));
        int rb = m.meet(b, m.join(p, a));
        if (!m.leq(qa, fmin) || !m.leq(rb, fmin))
          throw RepresentationFailure("filter stability fails at (" + m.name(a) + "," +
                                      m.name(b) + "," + m.name(p) + ")");
      }
    }

  // restricted geometry on Q with induced collinearity and orthogonality
  std::vector<std::string> names;
  std::vector<int> atom_of_point;
  std::vector<int> newindex(pts.geometry.size(), -1);
  for (std::size_t i = 0; i < qpoints.size(); ++i) {
    newindex[qpoints[i]] = static_cast<int>(i);
    names.push_back(pts.geometry.name(qpoints[i]));
    atom_of_point.push_back(pts.atom_of_point[qpoints[i]]);
  }
  std::set<std::array<int, 3>> coll;
  for (const auto& t : pts.geometry.collinear_triples()) {
    if (newindex[t[0]] < 0 || newindex[t[1]] < 0 || newindex[t[2]] < 0) continue;
    std::array<int, 3> nt{newindex[t[0]], newindex[t[1]], newindex[t[2]]};
    std::sort(nt.begin(), nt.end());
    coll.insert(nt);
  }
  std::optional<std::vector<std::vector<char>>> perp;
  if (pts.geometry.has_perp()) {
    std::vector<std::vector<char>> rel(qpoints.size(), std::vector<char>(qpoints.size(), 0));
    for (std::size_t i = 0; i < qpoints.size(); ++i)
      for (std::size_t j = 0; j < qpoints.size(); ++j)
        rel[i][j] = pts.geometry.perp(qpoints[i], qpoints[j]);
    perp = std::move(rel);
  }
  RepresentationMap rep{m, sub, PointGeometry(std::move(names), std::move(coll), std::move(perp)),
                        atom_of_point, {}};
  for (int a : sub) {
    std::vector<int> set;
    for (std::size_t i = 0; i < qpoints.size(); ++i)
      if (m.leq(atom_of_point[i], a)) set.push_back(static_cast<int>(i));
    rep.eta[a] = set;
  }
  // classes of theta restricted to sub
  std::vector<int> classes_of(m.size(), -1);
  for (int a : sub) {
    if (classes_of[a] >= 0) continue;
    for (int b : sub)
      if (theta.related(m, a, b)) classes_of[b] = a;
  }
  detail::verify_representation(rep, classes_of);
  return rep;
}

// --- closed elements and the hat construction ---------------------------------

struct HatReport {
  bool cond_a = true;  // meets of sub stay in hat(L)
  bool cond_b = true;  // joins stay in hat(L) and joins of polars are closed
  bool cond_c = true;  // polars of sub stay in hat(L)
  bool all_hold = false;
  bool mu_total = true;  // finite case: the finiteness congruence is total
  std::vector<int> closed_elements;
  std::vector<int> hat;  // = closed elements in the finite case
  bool hat_is_sub_mol = false;
  std::string note;
};

// x^perp inside the lattice, from the point orthogonality.
inline int lattice_polar(const FiniteOrtholattice& m, const PointsOfLattice& pts,
                         const std::vector<std::vector<char>>& perp, int x) {
  int acc = m.bottom();
  for (int q = 0; q < pts.geometry.size(); ++q) {
    bool all = true;
    for (int p = 0; p < pts.geometry.size() && all; ++p)
      if (m.leq(pts.atom_of_point[p], x)) all = perp[p][q] != 0;
    if (all) acc = m.join(acc, pts.atom_of_point[q]);
  }
  return acc;
}

inline HatReport hat_conditions(const FiniteOrtholattice& m, const std::vector<int>& sub,
                                std::optional<std::vector<std::vector<char>>> point_perp =
                                    std::nullopt) {
  LatticeValidation v = m.validate();
  if (!v.is_modular) throw NotModular("hat_conditions: lattice must be modular");
  PointsOfLattice pts = points_of(m);
  std::vector<std::vector<char>> perp;
  if (point_perp) {
    perp = *point_perp;
  } else {
    if (!m.has_ortho()) throw NotPolarity("hat_conditions: no orthocomplement or polarity given");
    perp.assign(pts.geometry.size(), std::vector<char>(pts.geometry.size(), 0));
    for (int i = 0; i < pts.geometry.size(); ++i)
      for (int j = 0; j < pts.geometry.size(); ++j)
        perp[i][j] = m.leq(pts.atom_of_point[i], m.ortho(pts.atom_of_point[j]));
  }
  {
    PolarityReport pr;
    PointGeometry withperp(
        [&] {
          std::vector<std::string> names;
          for (int i = 0; i < pts.geometry.size(); ++i) names.push_back(pts.geometry.name(i));
          return names;
        }(),
        pts.geometry.collinear_triples(), perp);
    pr = check_polarity(withperp);
    if (!pr.is_polarity || !pr.anisotropic)
      throw NotPolarity("hat_conditions: relation is not an anisotropic polarity");
  }
  HatReport r;
  auto polar = [&](int x) { return lattice_polar(m, pts, perp, x); };
  std::vector<char> closed(m.size(), 0);
  for (int x = 0; x < m.size(); ++x) {
    if (polar(polar(x)) == x) {
      closed[x] = 1;
      r.closed_elements.push_back(x);
    }
  }
  r.hat = r.closed_elements;  // mu is total on a finite lattice
  r.note = "finite case: the finiteness congruence is total, so hat(L) equals the closed elements";
  for (int a : sub)
    for (int b : sub) {
      if (!closed[m.meet(a, b)]) r.cond_a = false;
      if (!closed[m.join(a, b)]) r.cond_b = false;
      if (!closed[m.join(polar(a), polar(b))]) r.cond_b = false;
      if (!closed[polar(a)]) r.cond_c = false;
    }
  r.all_hold = r.cond_a && r.cond_b && r.cond_c;
  if (r.all_hold) {
    // hat(L) must be closed under meet, the closed-element join
    // (x^perp y^perp)^perp, and the polar map, with anisotropy throughout.
    r.hat_is_sub_mol = true;
    for (int x : r.hat) {
      if (!closed[polar(x)] || m.meet(x, polar(x)) != m.bottom()) r.hat_is_sub_mol = false;
      for (int y : r.hat) {
        int k_join = polar(m.meet(polar(x), polar(y)));
        if (!closed[m.meet(x, y)] || !closed[k_join]) r.hat_is_sub_mol = false;
      }
    }
  }
  return r;
}

// --- materialized subspace lattice of a finite geometry -----------------------

// All subspaces of the geometry as a FiniteOrtholattice (inclusion order),
// bounded by `bound` to keep free closures in check.
inline FiniteOrtholattice subspace_lattice(const PointGeometry& g, std::size_t bound = 4096) {
  std::set<std::vector<int>> subs;
  subs.insert(std::vector<int>{});
  std::vector<std::vector<int>> work{std::vector<int>{}};
  while (!work.empty()) {
    std::vector<int> s = work.back();
    work.pop_back();
    for (int p = 0; p < g.size(); ++p) {
      std::vector<int> ext = s;
      ext.push_back(p);
      std::vector<int> cl = g.subspace_closure(ext);
      if (subs.insert(cl).second) {
        if (subs.size() > bound) throw CapExceeded("subspace_lattice: bound exceeded");
        work.push_back(cl);
      }
    }
  }
  std::vector<std::vector<int>> all(subs.begin(), subs.end());
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  OrderData d;
  for (const auto& s : all) {
    if (s.empty()) {
      d.names.push_back("0");
    } else if (s.size() == static_cast<std::size_t>(g.size())) {
      d.names.push_back("1");
    } else {
      std::string nm;
      for (int p : s) nm += (nm.empty() ? "" : "+") + g.name(p);
      d.names.push_back(nm);
    }
  }
  d.bottom = 0;
  d.top = static_cast<int>(all.size()) - 1;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j)
      if (std::includes(all[j].begin(), all[j].end(), all[i].begin(), all[i].end()))
        d.leq_pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
  if (g.has_perp()) {
    bool ortho_ok = true;
    std::vector<int> polar(all.size());
    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < all.size(); ++i) index[all[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < all.size(); ++i) {
      std::vector<int> ps = g.perp_set(all[i]);  // empty set: everything qualifies
      auto it = index.find(ps);
      if (it == index.end()) { ortho_ok = false; break; }
      polar[i] = it->second;
    }
    if (ortho_ok)
      for (std::size_t i = 0; i < all.size(); ++i)
        if (polar[polar[i]] != static_cast<int>(i) || (all[i].size() && [&] {
              std::vector<int> cap;
              std::set_intersection(all[i].begin(), all[i].end(), all[polar[i]].begin(),
                                    all[polar[i]].end(), std::back_inserter(cap));
              return !cap.empty();
            }()))
          ortho_ok = false;
    if (ortho_ok)
      for (std::size_t i = 0; i < all.size(); ++i)
        d.ortho_pairs.emplace_back(static_cast<int>(i), polar[i]);
  }
  return FiniteOrtholattice::build(d);
}

// --- text format ----------------------------------------------------------------

inline std::string to_text(const PointGeometry& g) {
  std::ostringstream os;
  os << "points: " << g.size();
  for (int i = 0; i < g.size(); ++i) os << ' ' << g.name(i);
  os << '\n';
  os << "collinear:\n";
  for (const auto& t : g.collinear_triples())
    os << g.name(t[0]) << ' ' << g.name(t[1]) << ' ' << g.name(t[2]) << '\n';
  if (g.has_perp()) {
    os << "perp:\n";
    for (int p = 0; p < g.size(); ++p)
      for (int q = p; q < g.size(); ++q)
        if (g.perp(p, q)) os << g.name(p) << ' ' << g.name(q) << '\n';
  }
  return os.str();
}

inline PointGeometry geometry_from_stream(std::istream& is) {
  std::string kw;
  if (!(is >> kw) || kw != "points:") throw ParseError("geometry: expected 'points:'");
  int n = 0;
  if (!(is >> n) || n <= 0) throw ParseError("geometry: bad point count");
  std::vector<std::string> names(n);
  std::map<std::string, int> idx;
  for (int i = 0; i < n; ++i) {
    if (!(is >> names[i])) throw ParseError("geometry: missing point name");
    idx[names[i]] = i;
  }
  auto pt = [&](const std::string& s) {
    auto it = idx.find(s);
    if (it == idx.end()) throw ParseError("geometry: unknown point '" + s + "'");
    return it->second;
  };
  std::set<std::array<int, 3>> coll;
  std::vector<std::vector<char>> perp(n, std::vector<char>(n, 0));
  bool has_perp = false;
  enum { kNone, kColl, kPerp } section = kNone;
  std::string tok;
  while (is >> tok) {
    if (tok == "collinear:") {
      section = kColl;
    } else if (tok == "perp:") {
      section = kPerp;
      has_perp = true;
    } else if (section == kColl) {
      std::string b, c;
      if (!(is >> b >> c)) throw ParseError("geometry: truncated collinear triple");
      std::array<int, 3> t{pt(tok), pt(b), pt(c)};
      std::sort(t.begin(), t.end());
      coll.insert(t);
    } else if (section == kPerp) {
      std::string b;
      if (!(is >> b)) throw ParseError("geometry: truncated perp pair");
      perp[pt(tok)][pt(b)] = 1;
      perp[pt(b)][pt(tok)] = 1;
    } else {
      throw ParseError("geometry: token outside any section");
    }
  }
  return PointGeometry(std::move(names), std::move(coll),
                       has_perp ? std::optional(perp) : std::nullopt);
}

inline PointGeometry geometry_from_text(const std::string& text) {
  std::istringstream is(text);
  return geometry_from_stream(is);
}

}  // namespace molkit
