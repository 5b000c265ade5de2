#include <catch2/catch_amalgamated.hpp>

#include "molkit/geometry.hpp"

using namespace molkit;

namespace {

FiniteOrtholattice chain2() {
  OrderData d;
  d.names = {"0", "1"};
  d.bottom = 0;
  d.top = 1;
  d.leq_pairs = {{0, 1}};
  return FiniteOrtholattice::build(d);
}

std::vector<int> all_elements(const FiniteOrtholattice& l) {
  std::vector<int> out(l.size());
  for (int i = 0; i < l.size(); ++i) out[i] = i;
  return out;
}

}  // namespace

TEST_CASE("points of standard lattices") {
  PointsOfLattice m3 = points_of(mo(3));
  CHECK(m3.geometry.size() == 6);
  // every 3 distinct points collinear (one line)
  int n3 = 6 * 5 * 4 / 6;
  CHECK(static_cast<int>(m3.geometry.collinear_triples().size()) == n3);

  PointsOfLattice b3 = points_of(boolean_algebra(3));
  CHECK(b3.geometry.size() == 3);
  CHECK(b3.geometry.collinear_triples().empty());

  PointsOfLattice c2 = points_of(chain2());
  CHECK(c2.geometry.size() == 1);
  CHECK(c2.geometry.collinear_triples().empty());
}

TEST_CASE("components and orthogonal decomposition") {
  CHECK(components(points_of(mo(3)).geometry).components.size() == 1);
  CHECK(components(points_of(boolean_algebra(3)).geometry).components.size() == 3);

  ComponentsReport r = components(points_of(product(mo(2), mo(2))).geometry);
  CHECK(r.components.size() == 2);
  CHECK(r.cross_orthogonal);
}

TEST_CASE("subgeometry closure") {
  PointGeometry b3 = points_of(boolean_algebra(3)).geometry;
  ClosureResult r1 = subgeometry_closure(b3, {0, 1, 2});
  CHECK(r1.points == std::vector<int>{0, 1, 2});
  CHECK_FALSE(r1.cap_exceeded);

  PointGeometry m4 = points_of(mo(4)).geometry;
  ClosureResult r2 = subgeometry_closure(m4, {0, 1});
  CHECK(r2.points == std::vector<int>{0, 1});  // no second collinear pair available

  std::vector<int> all;
  for (int i = 0; i < m4.size(); ++i) all.push_back(i);
  CHECK(subgeometry_closure(m4, all).points == all);
}

TEST_CASE("polarity checks") {
  PolarityReport p2 = check_polarity(points_of(mo(2)).geometry);
  CHECK(p2.is_polarity);
  CHECK(p2.anisotropic);

  PolarityReport p3 = check_polarity(points_of(mo(3)).geometry);
  CHECK(p3.is_polarity);

  // two isolated points with empty orthogonality: polars are empty, not coatoms
  PointGeometry empty_perp({"p", "q"}, {},
                           std::vector<std::vector<char>>(2, std::vector<char>(2, 0)));
  PolarityReport pb = check_polarity(empty_perp);
  CHECK_FALSE(pb.is_polarity);
}

TEST_CASE("canonical representation") {
  FiniteOrtholattice m2 = mo(2);
  std::vector<int> sub = {m2.bottom(), m2.top(), m2.atoms()[0], m2.ortho(m2.atoms()[0])};
  RepresentationMap rep = canonical_representation(m2, sub);
  CHECK(rep.eta.at(m2.atoms()[0]).size() == 1);
  CHECK(rep.eta.at(m2.top()).size() == 4);

  RepresentationMap trivial = canonical_representation(m2, {m2.bottom(), m2.top()});
  CHECK(trivial.eta.at(m2.top()).size() == 4);
  CHECK(trivial.eta.at(m2.bottom()).empty());

  FiniteOrtholattice b2 = boolean_algebra(2);
  CHECK_NOTHROW(canonical_representation(b2, all_elements(b2)));

  CHECK_THROWS_AS(canonical_representation(m2, std::vector<int>{m2.bottom(), m2.atoms()[0]}),
                  NotSubalgebra);
}

TEST_CASE("induced point orthogonality") {
  FiniteOrtholattice m2 = mo(2);
  RepresentationMap rep = canonical_representation(m2, all_elements(m2));
  auto induced = induced_point_orthogonality(rep);
  // the identity representation induces exactly the canonical orthogonality
  for (int p = 0; p < rep.geometry.size(); ++p)
    for (int q = 0; q < rep.geometry.size(); ++q)
      CHECK(static_cast<bool>(induced[p][q]) == rep.geometry.perp(p, q));

  // trivial subalgebra of the 2-element MOL: no orthogonal pairs
  FiniteOrtholattice b1 = boolean_algebra(1);
  RepresentationMap triv = canonical_representation(b1, all_elements(b1));
  auto ind2 = induced_point_orthogonality(triv);
  CHECK_FALSE(ind2[0][0]);

  // an MO_2 subalgebra inside MO_3: only subalgebra atoms pick up orthogonality
  FiniteOrtholattice m3 = mo(3);
  std::vector<int> atoms = m3.atoms();
  std::vector<int> sub = {m3.bottom(), m3.top()};
  sub.push_back(m3.index_of("a1"));
  sub.push_back(m3.index_of("a1'"));
  sub.push_back(m3.index_of("a2"));
  sub.push_back(m3.index_of("a2'"));
  RepresentationMap rep3 = canonical_representation(m3, sub);
  auto ind3 = induced_point_orthogonality(rep3);
  int p3 = -1;
  for (int i = 0; i < rep3.geometry.size(); ++i)
    if (rep3.geometry.name(i) == "a3") p3 = i;
  REQUIRE(p3 >= 0);
  for (int q = 0; q < rep3.geometry.size(); ++q) CHECK_FALSE(ind3[p3][q]);
}

TEST_CASE("quotient representation of the projection kernel") {
  FiniteOrtholattice m = product(mo(2), boolean_algebra(1));
  // kernel of the first projection: generated by collapsing the second leg
  int a = m.index_of("(0,0)");
  int b = m.index_of("(0,1)");
  QuotientSet theta =
      detail::quotients_of_partition(m, detail::congruence_partition(m, {{m.join(a, b), a}}));
  RepresentationMap rep = quotient_representation(m, all_elements(m), theta);
  CHECK(rep.geometry.size() == 4);  // the four atoms of the MO_2 block

  // the image is an MO_2: check through the materialized subspace lattice
  FiniteOrtholattice sq = subspace_lattice(rep.geometry);
  CHECK(find_isomorphism(sq, mo(2)).has_value());

  // identity congruence reduces to the canonical representation
  QuotientSet ident(m);
  RepresentationMap rid = quotient_representation(m, all_elements(m), ident);
  RepresentationMap can = canonical_representation(m, all_elements(m));
  for (int x = 0; x < m.size(); ++x) CHECK(rid.eta.at(x) == can.eta.at(x));

  // the all congruence forces an empty point set
  QuotientSet allcon = congruence_from_quotient(m, m.top(), m.bottom());
  RepresentationMap rall = quotient_representation(m, all_elements(m), allcon);
  CHECK(rall.geometry.size() == 0);
}

TEST_CASE("hat conditions degenerate finite case") {
  FiniteOrtholattice m3 = mo(3);
  std::vector<int> sub = {m3.bottom(), m3.top(), m3.index_of("a1"), m3.index_of("a1'")};
  HatReport r = hat_conditions(m3, sub);
  CHECK(r.all_hold);
  CHECK(r.mu_total);
  CHECK(static_cast<int>(r.hat.size()) == m3.size());  // every element closed
  CHECK(r.hat_is_sub_mol);

  HatReport r2 = hat_conditions(m3, {m3.bottom(), m3.top()});
  CHECK(r2.all_hold);

  FiniteOrtholattice b3 = boolean_algebra(3);
  HatReport r3 = hat_conditions(b3, all_elements(b3));
  CHECK(r3.all_hold);
  CHECK(static_cast<int>(r3.hat.size()) == b3.size());
}

TEST_CASE("collinearity from disjoint joins (Frink-style, constructive)") {
  std::vector<FiniteOrtholattice> corpus;
  corpus.push_back(mo(2));
  corpus.push_back(mo(3));
  corpus.push_back(boolean_algebra(3));
  corpus.push_back(product(mo(2), boolean_algebra(1)));
  for (const auto& l : corpus) {
    PointsOfLattice pts = points_of(l);
    std::vector<int> point_of(l.size(), -1);
    for (int i = 0; i < pts.geometry.size(); ++i) point_of[pts.atom_of_point[i]] = i;
    for (int a = 0; a < l.size(); ++a)
      for (int b = 0; b < l.size(); ++b) {
        if (l.meet(a, b) != l.bottom()) continue;
        for (int gi = 0; gi < pts.geometry.size(); ++gi) {
          int p = pts.atom_of_point[gi];
          if (!l.leq(p, l.join(a, b)) || l.leq(p, a) || l.leq(p, b)) continue;
          int q = l.meet(a, l.join(p, b));
          int r = l.meet(b, l.join(p, a));
          REQUIRE(point_of[q] >= 0);  // q and r are atoms
          REQUIRE(point_of[r] >= 0);
          CHECK(pts.geometry.collinear(gi, point_of[q], point_of[r]));
        }
      }
  }
}

TEST_CASE("finite polar laws: double polar and complementation") {
  std::vector<FiniteOrtholattice> corpus;
  corpus.push_back(mo(2));
  corpus.push_back(mo(3));
  corpus.push_back(boolean_algebra(3));
  corpus.push_back(product(mo(2), boolean_algebra(1)));
  for (const auto& l : corpus) {
    PointsOfLattice pts = points_of(l);
    std::vector<std::vector<char>> perp(pts.geometry.size(),
                                        std::vector<char>(pts.geometry.size(), 0));
    for (int i = 0; i < pts.geometry.size(); ++i)
      for (int j = 0; j < pts.geometry.size(); ++j)
        perp[i][j] = l.leq(pts.atom_of_point[i], l.ortho(pts.atom_of_point[j]));
    for (int x = 0; x < l.size(); ++x) {
      int p = lattice_polar(l, pts, perp, x);
      CHECK(lattice_polar(l, pts, perp, p) == x);
      CHECK(l.join(x, p) == l.top());
      CHECK(l.meet(x, p) == l.bottom());
    }
  }
}

TEST_CASE("materialized subspace lattice of an atomistic MOL is the MOL") {
  FiniteOrtholattice m2 = mo(2);
  FiniteOrtholattice s = subspace_lattice(points_of(m2).geometry);
  CHECK(find_isomorphism(s, m2).has_value());

  FiniteOrtholattice b2 = boolean_algebra(2);
  FiniteOrtholattice sb = subspace_lattice(points_of(b2).geometry);
  CHECK(find_isomorphism(sb, b2).has_value());
}

TEST_CASE("geometry text format round trips") {
  PointGeometry g = points_of(mo(3)).geometry;
  std::string t = to_text(g);
  PointGeometry back = geometry_from_text(t);
  CHECK(to_text(back) == t);
  CHECK(back.size() == g.size());

  PointGeometry noperp({"x", "y", "z"}, {{{0, 1, 2}}});
  std::string t2 = to_text(noperp);
  CHECK(to_text(geometry_from_text(t2)) == t2);
}
