#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <random>

#include "molkit/frames.hpp"

using namespace molkit;

namespace {

std::shared_ptr<const Frame> frame3_q3(const FormSpace& sp) {
  return std::make_shared<const Frame>(Frame::canonical(3, 1, sp));
}

std::vector<Rational> rational_samples() {
  return {Rational(0),     Rational(1),  Rational(-1), Rational(2),     Rational(-2),
          Rational(1, 2),  Rational(-1, 2), Rational(3),  Rational(-3), Rational(5),
          Rational(1, 3)};
}

std::vector<RationalMatrix> block2_samples() {
  using M = RationalMatrix;
  return {M::zero(2, 2),
          M::identity(2),
          M{{Rational(1), Rational(1)}, {Rational(0), Rational(1)}},
          M{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}},
          M{{Rational(2), Rational(1)}, {Rational(1), Rational(2)}},
          M{{Rational(1), Rational(0)}, {Rational(0), Rational(0)}}};
}

Rational scalar(const RingElem& e) { return value_of(e).at(0, 0); }

}  // namespace

TEST_CASE("canonical frame flags and axiom violations") {
  FormSpace q3 = FormSpace::with_identity_form(3);
  Frame f = Frame::canonical(3, 1, q3);
  CHECK(f.spanning());
  CHECK(f.orthogonal());

  // replacing E_01 by the first axis breaks a_i + a_ij = a_i + a_j
  std::vector<Subspace> axes = {f.axis(0), f.axis(1), f.axis(2)};
  std::vector<std::vector<Subspace>> sides(3, std::vector<Subspace>(3, Subspace::zero(q3)));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) sides[i][j] = f.side(i, j);
  sides[0][1] = f.axis(0);
  sides[1][0] = f.axis(0);
  CHECK_THROWS_AS(Frame::check_frame(axes, sides), FrameAxiomViolation);

  CHECK_THROWS_AS(Frame::canonical(3, 2, q3), DimensionMismatch);
  CHECK_THROWS_AS(Frame::canonical(2, 1, FormSpace::with_identity_form(2)), FrameAxiomViolation);

  // block canonical frame in L(Q^6)
  Frame f6 = Frame::canonical(3, 2, FormSpace::with_identity_form(6));
  CHECK(f6.spanning());
  CHECK(f6.orthogonal());
  Frame f4 = Frame::canonical(4, 1, FormSpace::with_identity_form(4));
  CHECK(f4.spanning());
}

TEST_CASE("embedding and value extraction") {
  auto f = frame3_q3(FormSpace::with_identity_form(3));
  RingElem zero = embed_ring(Rational(0), f, 0, 1);
  CHECK(zero.carrier == f->axis(0));
  CHECK(zero == ring_zero(f, 0, 1));
  RingElem one = embed_ring(Rational(1), f, 0, 1);
  CHECK(one.carrier == f->side(0, 1));
  RingElem two = embed_ring(Rational(2), f, 0, 1);
  CHECK(two.carrier == Subspace::span(f->ambient(), {{Rational(1), Rational(-2), Rational(0)}}));
  for (const Rational& r : rational_samples())
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        CHECK(scalar(embed_ring(r, f, i, j)) == r);
      }
}

TEST_CASE("pi transfer moves elements and round trips") {
  auto f = frame3_q3(FormSpace::with_identity_form(3));
  RingElem two = embed_ring(Rational(2), f, 0, 1);
  RingElem moved = pi_transfer(two, 0, 2);
  CHECK(moved.carrier ==
        Subspace::span(f->ambient(), {{Rational(1), Rational(0), Rational(-2)}}));
  CHECK(pi_transfer(moved, 0, 1) == two);

  RingElem zero_moved = pi_transfer(embed_ring(Rational(0), f, 0, 1), 0, 2);
  CHECK(zero_moved.carrier == f->axis(0));

  for (const Rational& r : rational_samples()) {
    RingElem e = embed_ring(r, f, 0, 1);
    CHECK(scalar(pi_transfer(e, 0, 2)) == r);
    CHECK(scalar(pi_transfer(e, 2, 1)) == r);
    CHECK(pi_transfer(pi_transfer(e, 2, 1), 0, 1) == e);
  }
  CHECK_THROWS_AS(pi_transfer(two, 1, 0), BadIndexPattern);
  CHECK_THROWS_AS(pi_transfer(two, 2, 0), BadIndexPattern);
}

TEST_CASE("ring operations agree with rational arithmetic") {
  auto f = frame3_q3(FormSpace::with_identity_form(3));
  std::vector<Rational> s = rational_samples();
  for (const Rational& a : s) {
    RingElem ea = embed_ring(a, f, 0, 1);
    CHECK(scalar(ring_neg(ea)) == -a);
    std::optional<RingElem> inv = ring_inverse(ea);
    if (a.is_zero()) {
      CHECK_FALSE(inv.has_value());
    } else {
      REQUIRE(inv.has_value());
      CHECK(scalar(*inv) == a.inverse());
      CHECK(scalar(ring_mul(ea, *inv)) == Rational(1));
    }
    for (const Rational& b : s) {
      RingElem eb = embed_ring(b, f, 0, 1);
      CHECK(scalar(ring_add(ea, eb)) == a + b);
      CHECK(scalar(ring_mul(ea, eb)) == a * b);
      CHECK(scalar(ring_sub(ea, eb)) == a - b);
    }
  }
  // worked example: 2 (x) 3 lands on span{(1,0,-6)} when computed toward (0,2)
  RingElem r12 = embed_ring(Rational(2), f, 0, 1);
  RingElem s23 = embed_ring(Rational(3), f, 1, 2);
  Subspace prod = intersect(sum(r12.carrier, s23.carrier), sum(f->axis(0), f->axis(2)));
  CHECK(prod == Subspace::span(f->ambient(), {{Rational(1), Rational(0), Rational(-6)}}));
  // 2 (+) 3 = 5 in R_01
  CHECK(ring_add(embed_ring(Rational(2), f, 0, 1), embed_ring(Rational(3), f, 0, 1)).carrier ==
        Subspace::span(f->ambient(), {{Rational(1), Rational(-5), Rational(0)}}));
  // (-1) (+) 1 = 0
  CHECK(ring_add(ring_neg(embed_ring(Rational(1), f, 0, 1)), embed_ring(Rational(1), f, 0, 1)) ==
        ring_zero(f, 0, 1));
}

TEST_CASE("ring operations at block size 2 follow matrix arithmetic") {
  auto f6 = std::make_shared<const Frame>(
      Frame::canonical(3, 2, FormSpace::with_identity_form(6)));
  std::vector<RationalMatrix> s = block2_samples();
  for (const auto& a : s) {
    RingElem ea = embed_ring(a, f6, 0, 1);
    CHECK(value_of(ea) == a);
    CHECK(value_of(ring_neg(ea)) == -a);
    std::optional<RingElem> inv = ring_inverse(ea);
    CHECK(inv.has_value() == is_invertible(a));
    if (inv) CHECK(value_of(*inv) == inverse(a));
    for (const auto& b : s) {
      RingElem eb = embed_ring(b, f6, 0, 1);
      CHECK(value_of(ring_add(ea, eb)) == a + b);
      CHECK(value_of(ring_mul(ea, eb)) == a * b);  // x on the left, exactly
      CHECK(value_of(ring_sub(ea, eb)) == a - b);
    }
  }
  // a genuinely noncommuting pair pins the multiplication order
  RationalMatrix p{{Rational(1), Rational(1)}, {Rational(0), Rational(1)}};
  RationalMatrix q{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
  REQUIRE(p * q != q * p);
  CHECK(value_of(ring_mul(embed_ring(p, f6, 0, 1), embed_ring(q, f6, 0, 1))) == p * q);
  CHECK(value_of(ring_mul(embed_ring(q, f6, 0, 1), embed_ring(p, f6, 0, 1))) == q * p);
}

TEST_CASE("auxiliary index choice does not change the operations") {
  auto f4 = std::make_shared<const Frame>(
      Frame::canonical(4, 1, FormSpace::with_identity_form(4)));
  std::vector<Rational> s = rational_samples();
  for (const Rational& a : s)
    for (const Rational& b : s) {
      RingElem ea = embed_ring(a, f4, 0, 1);
      RingElem eb = embed_ring(b, f4, 0, 1);
      CHECK(ring_add(ea, eb, 2) == ring_add(ea, eb, 3));
      CHECK(ring_mul(ea, eb, 2) == ring_mul(ea, eb, 3));
      CHECK(ring_neg(ea, 2) == ring_neg(ea, 3));
    }
}

TEST_CASE("transfers are ring isomorphisms on samples") {
  auto f = frame3_q3(FormSpace::with_identity_form(3));
  std::vector<Rational> s = rational_samples();
  for (const Rational& a : s)
    for (const Rational& b : s) {
      RingElem ea02 = pi_transfer(embed_ring(a, f, 0, 1), 0, 2);
      RingElem eb02 = pi_transfer(embed_ring(b, f, 0, 1), 0, 2);
      CHECK(scalar(ring_add(ea02, eb02)) == a + b);
      CHECK(scalar(ring_mul(ea02, eb02)) == a * b);
    }
}

TEST_CASE("t polynomial lands in the coordinate domain and fixes it") {
  for (const RationalMatrix& gram :
       {RationalMatrix::identity(3),
        RationalMatrix::diagonal({Rational(1), Rational(2), Rational(3)})}) {
    FormSpace sp(3, gram);
    auto f = frame3_q3(sp);
    for (const Rational& r : rational_samples()) {
      RingElem e = embed_ring(r, f, 0, 1);
      CHECK(t_polynomial(e.carrier, f) == e);
    }
    CHECK_NOTHROW(t_polynomial(f->axis(0), f));
    CHECK_NOTHROW(t_polynomial(Subspace::zero(sp), f));
    CHECK_NOTHROW(t_polynomial(Subspace::span(sp, {{Rational(1), Rational(2), Rational(3)}}), f));
  }
}

TEST_CASE("star polynomial: scalar forms") {
  // with a diagonal form the polynomial must reproduce the base involution,
  // which is the identity on Q, for every diagonal form
  for (const RationalMatrix& gram :
       {RationalMatrix::identity(3),
        RationalMatrix::diagonal({Rational(1), Rational(2), Rational(3)}),
        RationalMatrix::diagonal({Rational(1), Rational(1, 2), Rational(5)})}) {
    FormSpace sp(3, gram);
    auto f = frame3_q3(sp);
    Rational alpha2 = gram.at(1, 1);
    for (const Rational& r : rational_samples()) {
      RingElem e = embed_ring(r, f, 0, 1);
      RingElem st = star_polynomial(e);
      CHECK(st == e);                        // base involution on Q is the identity
      CHECK(star_polynomial(st) == e);       // involutory
      // the (1,0) witness read off the orthocomplement is -r* alpha_2
      Subspace w = intersect(ortho_complement(e.carrier), sum(f->axis(0), f->axis(1)));
      CHECK(w == embed_ring(-(r * alpha2), f, 1, 0).carrier);
    }
    // the unit's witness is -alpha_2 itself
    Subspace wu = intersect(ortho_complement(f->side(0, 1)), sum(f->axis(0), f->axis(1)));
    CHECK(wu == embed_ring(-alpha2, f, 1, 0).carrier);
  }
  auto f = frame3_q3(FormSpace::with_identity_form(3));
  CHECK_THROWS_AS(star_polynomial(embed_ring(Rational(2), f, 0, 2)), IndexMismatch);
}

TEST_CASE("star polynomial: block forms give the base transpose") {
  RationalMatrix a2{{Rational(2), Rational(1)}, {Rational(1), Rational(2)}};
  RationalMatrix a3 = RationalMatrix::diagonal({Rational(1), Rational(5)});
  FormSpace sp(6, RationalMatrix::block_diagonal({RationalMatrix::identity(2), a2, a3}));
  auto f = std::make_shared<const Frame>(Frame::canonical(3, 2, sp));
  REQUIRE(f->orthogonal());
  for (const RationalMatrix& r : block2_samples()) {
    RingElem e = embed_ring(r, f, 0, 1);
    RingElem st = star_polynomial(e);
    CHECK(value_of(st) == r.transpose());
    CHECK(star_polynomial(st) == e);
    Subspace w = intersect(ortho_complement(e.carrier), sum(f->axis(0), f->axis(1)));
    CHECK(w == embed_ring(-(r.transpose() * a2), f, 1, 0).carrier);
  }
  // anti-automorphism: (r s)* = s* r*
  RationalMatrix p{{Rational(1), Rational(1)}, {Rational(0), Rational(1)}};
  RationalMatrix q{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
  RingElem prod = ring_mul(embed_ring(p, f, 0, 1), embed_ring(q, f, 0, 1));
  CHECK(value_of(star_polynomial(prod)) ==
        value_of(star_polynomial(embed_ring(q, f, 0, 1))) *
            value_of(star_polynomial(embed_ring(p, f, 0, 1))));
}

TEST_CASE("matrix involution") {
  // identity blocks: plain transpose
  std::vector<RationalMatrix> id = {RationalMatrix::identity(1), RationalMatrix::identity(1)};
  RationalMatrix x{{Rational(1), Rational(2)}, {Rational(3), Rational(4)}};
  CHECK(matrix_involution(id, x) == x.transpose());

  // alpha = (1,2): entry (i,j) of x* is alpha_i^-1 x_ji alpha_j
  std::vector<RationalMatrix> a12;
  a12.push_back(RationalMatrix::diagonal({Rational(1)}));
  a12.push_back(RationalMatrix::diagonal({Rational(2)}));
  RationalMatrix e12{{Rational(0), Rational(3)}, {Rational(0), Rational(0)}};
  RationalMatrix want{{Rational(0), Rational(0)}, {Rational(3, 2), Rational(0)}};
  CHECK(matrix_involution(a12, e12) == want);

  // involutory anti-automorphism on random samples
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> d(-4, 4);
  std::vector<RationalMatrix> alphas;
  alphas.push_back(RationalMatrix::identity(2));
  alphas.push_back(RationalMatrix{{Rational(2), Rational(1)}, {Rational(1), Rational(2)}});
  alphas.push_back(RationalMatrix::diagonal({Rational(1), Rational(1, 3)}));
  auto rnd = [&] {
    RationalMatrix m(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) m.at(i, j) = Rational(d(rng));
    return m;
  };
  for (int it = 0; it < 15; ++it) {
    RationalMatrix u = rnd(), v = rnd();
    CHECK(matrix_involution(alphas, matrix_involution(alphas, u)) == u);
    CHECK(matrix_involution(alphas, u + v) ==
          matrix_involution(alphas, u) + matrix_involution(alphas, v));
    CHECK(matrix_involution(alphas, u * v) ==
          matrix_involution(alphas, v) * matrix_involution(alphas, u));
  }

  // consistency with the two-block computation: the involution of the
  // matrix unit E_12 is beta E_21 with beta = alpha^-1 = beta*
  std::vector<RationalMatrix> two;
  two.push_back(RationalMatrix::diagonal({Rational(1)}));
  two.push_back(RationalMatrix::diagonal({Rational(7)}));
  RationalMatrix unit{{Rational(0), Rational(1)}, {Rational(0), Rational(0)}};
  RationalMatrix invol = matrix_involution(two, unit);
  CHECK(invol.at(1, 0) == Rational(1, 7));  // beta = alpha^-1
  CHECK(invol.at(0, 1).is_zero());

  CHECK_THROWS_AS(matrix_involution({RationalMatrix::zero(1, 1)}, RationalMatrix::identity(1)),
                  SingularAlpha);
  CHECK_THROWS_AS(
      matrix_involution({RationalMatrix{{Rational(1), Rational(2)}, {Rational(0), Rational(1)}},
                         RationalMatrix::identity(2)},
                        RationalMatrix::identity(4)),
      NotSymmetric);
  CHECK_THROWS_AS(matrix_involution(id, RationalMatrix::identity(3)), DimensionMismatch);
}

TEST_CASE("idempotent ideal calculus through subspace images") {
  // eR + fR = (e+g)R with g = f - ef, via column spans over Q and Q_2
  auto colspace = [](const FormSpace& sp, const RationalMatrix& m) {
    std::vector<std::vector<Rational>> rows;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::vector<Rational> v(m.rows());
      for (std::size_t r = 0; r < m.rows(); ++r) v[r] = m.at(r, c);
      rows.push_back(v);
    }
    return Subspace::span(sp, rows);
  };
  FormSpace q2 = FormSpace::with_identity_form(2);
  std::vector<RationalMatrix> idems = {
      RationalMatrix::zero(2, 2), RationalMatrix::identity(2),
      RationalMatrix::diagonal({Rational(1), Rational(0)}),
      RationalMatrix::diagonal({Rational(0), Rational(1)}),
      RationalMatrix{{Rational(1, 2), Rational(1, 2)}, {Rational(1, 2), Rational(1, 2)}},
      RationalMatrix{{Rational(1, 5), Rational(2, 5)}, {Rational(2, 5), Rational(4, 5)}}};
  for (const auto& e : idems) {
    REQUIRE(e * e == e);
    REQUIRE(e.transpose() == e);
    for (const auto& fm : idems) {
      RationalMatrix g = fm - e * fm;
      CHECK(sum(colspace(q2, e), colspace(q2, fm)) == colspace(q2, e + g));
    }
  }
}

TEST_CASE("star regularity witness over matrix rings") {
  // r^T r = 0 implies r = 0, exactly
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int it = 0; it < 50; ++it) {
    RationalMatrix r(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) r.at(i, j) = Rational(d(rng));
    if ((r.transpose() * r).is_zero()) CHECK(r.is_zero());
    if (!r.is_zero()) CHECK_FALSE((r.transpose() * r).is_zero());
  }
}
