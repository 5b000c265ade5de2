#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "molkit/subspace.hpp"

using namespace molkit;

namespace {

std::vector<Rational> vec(std::initializer_list<int> xs) {
  std::vector<Rational> v;
  for (int x : xs) v.push_back(Rational(x));
  return v;
}

Subspace random_subspace(std::mt19937_64& rng, const FormSpace& sp) {
  std::uniform_int_distribution<int> entry(-5, 5);
  std::uniform_int_distribution<std::size_t> nrows(0, sp.dimension());
  RationalMatrix m(nrows(rng), sp.dimension());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = Rational(entry(rng));
  return Subspace(sp, m);
}

}  // namespace

TEST_CASE("form space rejects bad grams") {
  CHECK_THROWS_AS(FormSpace(2, RationalMatrix::identity(3)), DimensionMismatch);
  CHECK_THROWS_AS(FormSpace(2, RationalMatrix{{Rational(1), Rational(2)}, {Rational(0), Rational(1)}}),
                  NotSymmetric);
  CHECK_THROWS_AS(FormSpace(2, RationalMatrix::diagonal({Rational(1), Rational(-1)})),
                  NotPositiveDefinite);
  CHECK_THROWS_AS(FormSpace(2, RationalMatrix(2, 2)), NotPositiveDefinite);
}

TEST_CASE("span examples") {
  FormSpace q2 = FormSpace::with_identity_form(2);
  CHECK(Subspace::span(q2, {}).is_zero());
  Subspace s = Subspace::span(q2, {vec({1, 0}), vec({2, 0})});
  CHECK(s.dim() == 1);
  CHECK(s == Subspace::span(q2, {vec({1, 0})}));
  CHECK(Subspace::span(q2, {vec({1, 1}), vec({1, -1})}).is_full());
  CHECK_THROWS_AS(Subspace::span(q2, {vec({1, 2, 3})}), DimensionMismatch);
}

TEST_CASE("sum and intersect") {
  FormSpace q2 = FormSpace::with_identity_form(2);
  FormSpace q3 = FormSpace::with_identity_form(3);
  Subspace e1 = Subspace::span(q2, {vec({1, 0})});
  Subspace e2 = Subspace::span(q2, {vec({0, 1})});
  CHECK(sum(e1, e2).is_full());
  CHECK(sum(e1, Subspace::zero(q2)) == e1);

  Subspace u = Subspace::span(q3, {vec({1, 0, 0}), vec({0, 1, 0})});
  Subspace v = Subspace::span(q3, {vec({0, 1, 0}), vec({0, 0, 1})});
  CHECK(intersect(u, v) == Subspace::span(q3, {vec({0, 1, 0})}));

  FormSpace other = FormSpace::with_identity_form(3);
  Subspace w = Subspace::span(other, {vec({1, 0, 0})});
  CHECK_NOTHROW(sum(u, w));  // same gram, same dimension: same ambient
  CHECK_THROWS_AS(sum(e1, u), AmbientMismatch);
}

TEST_CASE("ortho complement examples") {
  FormSpace q3 = FormSpace::with_identity_form(3);
  Subspace e1 = Subspace::span(q3, {vec({1, 0, 0})});
  CHECK(ortho_complement(e1) == Subspace::span(q3, {vec({0, 1, 0}), vec({0, 0, 1})}));
  // derived by solving the Gram system for span{(1,1,0)}
  Subspace d = Subspace::span(q3, {vec({1, 1, 0})});
  CHECK(ortho_complement(d) == Subspace::span(q3, {vec({1, -1, 0}), vec({0, 0, 1})}));
  CHECK(ortho_complement(Subspace::full(q3)).is_zero());
  CHECK(ortho_complement(Subspace::zero(q3)).is_full());
}

TEST_CASE("interval ortho") {
  FormSpace q3 = FormSpace::with_identity_form(3);
  Subspace u = Subspace::span(q3, {vec({1, 0, 0}), vec({0, 1, 0})});
  Subspace x = Subspace::span(q3, {vec({1, 0, 0})});
  CHECK(interval_ortho(u, x) == Subspace::span(q3, {vec({0, 1, 0})}));
  CHECK(interval_ortho(u, Subspace::zero(q3)) == u);
  CHECK(interval_ortho(u, u).is_zero());
  Subspace e3 = Subspace::span(q3, {vec({0, 0, 1})});
  CHECK_THROWS_AS(interval_ortho(u, e3), NotBelow);
}

TEST_CASE("perspectivity witness") {
  FormSpace q2 = FormSpace::with_identity_form(2);
  Subspace e1 = Subspace::span(q2, {vec({1, 0})});
  Subspace e2 = Subspace::span(q2, {vec({0, 1})});
  auto c = is_perspective(e1, e2);
  REQUIRE(c.has_value());
  CHECK(*c == Subspace::span(q2, {vec({1, 1})}));

  auto self = is_perspective(e1, e1);
  REQUIRE(self.has_value());
  CHECK(self->is_zero());

  FormSpace q3 = FormSpace::with_identity_form(3);
  Subspace plane = Subspace::span(q3, {vec({1, 0, 0}), vec({0, 1, 0})});
  Subspace line = Subspace::span(q3, {vec({0, 0, 1})});
  CHECK_FALSE(is_perspective(plane, line).has_value());  // dimension invariant
}

TEST_CASE("perspectivity witness on random pairs") {
  std::mt19937_64 rng(77);
  FormSpace q4 = FormSpace::with_identity_form(4);
  int found = 0;
  for (int it = 0; it < 60; ++it) {
    Subspace u = random_subspace(rng, q4);
    Subspace v = random_subspace(rng, q4);
    auto c = is_perspective(u, v);
    CHECK(c.has_value() == (u.dim() == v.dim()));
    if (c.has_value()) {
      ++found;
      Subspace top = sum(u, v);
      CHECK(sum(u, *c) == top);
      CHECK(sum(v, *c) == top);
      CHECK(intersect(u, *c).is_zero());
      CHECK(intersect(v, *c).is_zero());
    }
  }
  CHECK(found > 0);
}

TEST_CASE("polarity sample checks") {
  FormSpace q3 = FormSpace::with_identity_form(3);
  Subspace e1 = Subspace::span(q3, {vec({1, 0, 0})});
  CHECK(check_polarity_sample(q3, {e1}).all_pass);

  FormSpace diag123(3, RationalMatrix::diagonal({Rational(1), Rational(2), Rational(3)}));
  Subspace d = Subspace::span(diag123, {vec({1, 1, 1})});
  CHECK(check_polarity_sample(diag123, {d}).all_pass);

  Subspace plane = Subspace::span(q3, {vec({1, 0, 0}), vec({0, 1, 0})});
  CHECK_THROWS_AS(check_polarity_sample(q3, {plane}), NotAnAtom);
}

TEST_CASE("modular law holds in subspace lattices") {
  std::mt19937_64 rng(31337);
  FormSpace q4 = FormSpace::with_identity_form(4);
  for (int it = 0; it < 40; ++it) {
    Subspace u0 = random_subspace(rng, q4);
    Subspace v = random_subspace(rng, q4);
    Subspace w = random_subspace(rng, q4);
    Subspace u = intersect(u0, w);  // force u <= w
    CHECK(modular_law_check(u, v, w));
    CHECK(modular_law_check(Subspace::zero(q4), v, w));
    CHECK(modular_law_check(w, v, w));
  }
}

TEST_CASE("MOL law suite on random subspaces under several forms") {
  std::mt19937_64 rng(2024);
  std::vector<FormSpace> spaces;
  spaces.push_back(FormSpace::with_identity_form(4));
  spaces.push_back(FormSpace(3, RationalMatrix::diagonal({Rational(1), Rational(2), Rational(3)})));
  spaces.push_back(FormSpace(
      4, RationalMatrix{{Rational(2), Rational(1), Rational(0), Rational(0)},
                        {Rational(1), Rational(2), Rational(0), Rational(0)},
                        {Rational(0), Rational(0), Rational(1), Rational(0)},
                        {Rational(0), Rational(0), Rational(0), Rational(5)}}));
  for (const FormSpace& sp : spaces) {
    for (int it = 0; it < 30; ++it) {
      Subspace u = random_subspace(rng, sp);
      Subspace v = random_subspace(rng, sp);
      // involution, anisotropy, dimension
      CHECK(ortho_complement(ortho_complement(u)) == u);
      CHECK(intersect(u, ortho_complement(u)).is_zero());
      CHECK(u.dim() + ortho_complement(u).dim() == sp.dimension());
      // DeMorgan
      CHECK(ortho_complement(sum(u, v)) ==
            intersect(ortho_complement(u), ortho_complement(v)));
      CHECK(ortho_complement(intersect(u, v)) ==
            sum(ortho_complement(u), ortho_complement(v)));
      // order reversal
      Subspace small = intersect(u, v);
      CHECK(leq(ortho_complement(u), ortho_complement(small)));
      // orthomodular instance: for small <= u, u = small + (u meet small^perp)
      CHECK(sum(small, intersect(u, ortho_complement(small))) == u);
    }
  }
}

TEST_CASE("subspace text format round trips") {
  FormSpace q3 = FormSpace::with_identity_form(3);
  Subspace u = Subspace::span(q3, {vec({1, 2, 3}), vec({0, 1, 7})});
  std::string t = to_text(u);
  CHECK(subspace_from_text(t, q3) == u);
  CHECK(to_text(subspace_from_text(t, q3)) == t);
}
