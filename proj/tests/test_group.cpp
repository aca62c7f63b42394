// Tests for exponential-coordinate group calculus: BCH products, inverses,
// conjugation, dilations, and the central quotient by the top layer. The
// step-3 products are cross-checked against a triangular matrix model that
// multiplies honest 15x15 matrices instead of evaluating any series.
#include "doctest.h"

#include <vector>

#include "carnot/algebra.hpp"
#include "carnot/bch.hpp"
#include "carnot/error.hpp"
#include "carnot/group.hpp"

#include "oracles.hpp"
#include "support.hpp"

using carnot::basis_vector;
using carnot::bch_log;
using carnot::bch_product;
using carnot::build_free_nilpotent;
using carnot::conjugate;
using carnot::dilate;
using carnot::dilate_vector;
using carnot::ErrorCode;
using carnot::exp_point;
using carnot::GroupPoint;
using carnot::identity;
using carnot::invert;
using carnot::layer_component;
using carnot::LieVector;
using carnot::quotient_map;
using carnot::Rational;
using carnot::zero_vector;

TEST_CASE("Heisenberg products follow the closed polarization formula") {
  // At step 2 the series stops after one correction term:
  // log(exp u exp v) = u + v + [u,v]/2.
  auto algebra = build_free_nilpotent(2, 2);
  testutil::TestRng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    auto u = rng.vector(algebra);
    auto v = rng.vector(algebra);
    auto expected = LieVector(u + v) + Rational(1, 2) * carnot::bracket(u, v);
    CHECK(bch_log(u, v) == expected);
    CHECK(bch_product(exp_point(u), exp_point(v)) == exp_point(expected));
  }

  auto x = basis_vector(algebra, 0);
  auto y = basis_vector(algebra, 1);
  auto z = basis_vector(algebra, 2);
  // the generators do not commute; their commutator is exp of the center
  auto p = bch_product(exp_point(x), exp_point(y));
  auto q = bch_product(exp_point(y), exp_point(x));
  CHECK_FALSE(p == q);
  auto commutator = bch_product(p, invert(q));
  CHECK(commutator == exp_point(z));
}

TEST_CASE("step-3 products agree with the matrix model") {
  auto algebra = build_free_nilpotent(2, 3);
  testutil::TestRng rng(303);
  for (int trial = 0; trial < 100; ++trial) {
    auto u = rng.vector(algebra);
    auto v = rng.vector(algebra);
    bool triangular = false;
    auto expected = oracles::matrix_bch(u, v, &triangular);
    CHECK(triangular);
    CHECK(oracles::expand_vector(bch_log(u, v)) == expected);
  }
}

TEST_CASE("the two-letter series carries the classical low coefficients") {
  const auto& series = carnot::detail::bch_series(3);
  auto coefficient = [&](int index) {
    for (const auto& [i, c] : series.terms) {
      if (i == index) return c;
    }
    return Rational(0);
  };
  CHECK(coefficient(0) == 1);
  CHECK(coefficient(1) == 1);
  CHECK(coefficient(2) == Rational(1, 2));    // [1,2]
  CHECK(coefficient(3) == Rational(1, 12));   // [1,[1,2]]
  CHECK(coefficient(4) == Rational(1, 12));   // [[1,2],2]
}

TEST_CASE("group laws hold exactly at every step") {
  testutil::TestRng rng(777);
  for (int step = 2; step <= 5; ++step) {
    auto algebra = build_free_nilpotent(2, step);
    auto e = identity(algebra);
    CHECK(e.is_identity());
    for (int trial = 0; trial < 25; ++trial) {
      auto a = rng.point(algebra);
      auto b = rng.point(algebra);
      auto c = rng.point(algebra);
      CHECK(bch_product(bch_product(a, b), c) == bch_product(a, bch_product(b, c)));
      CHECK(bch_product(a, e) == a);
      CHECK(bch_product(e, a) == a);
      CHECK(bch_product(a, invert(a)).is_identity());
      CHECK(bch_product(invert(a), a).is_identity());
      CHECK(invert(invert(a)) == a);
      CHECK(invert(bch_product(a, b)) == bch_product(invert(b), invert(a)));
    }
  }

  // a fully worked fixed case at step 3
  auto algebra = build_free_nilpotent(2, 3);
  auto a = exp_point(basis_vector(algebra, 0));
  auto b = exp_point(basis_vector(algebra, 1));
  CHECK(bch_product(bch_product(a, b), a) == bch_product(a, bch_product(b, a)));
}

TEST_CASE("conjugation fixes the identity and the center") {
  testutil::TestRng rng(55);
  for (int step : {3, 4, 5}) {
    auto algebra = build_free_nilpotent(2, step);
    for (int trial = 0; trial < 20; ++trial) {
      auto p = rng.point(algebra);
      CHECK(conjugate(p, identity(algebra)).is_identity());
      CHECK(conjugate(identity(algebra), p) == p);

      // the top layer is central
      auto z = exp_point(rng.layer_vector(algebra, step));
      CHECK(conjugate(p, z) == z);

      // one layer below the top, only the first correction survives:
      // p exp(Y) p^{-1} = exp(Y + [X, Y]) for p = exp(X)
      auto y = rng.layer_vector(algebra, step - 1);
      auto expected = y + carnot::bracket(p.log, y);
      CHECK(conjugate(p, exp_point(y)) == exp_point(expected));
    }
  }
}

TEST_CASE("dilations are the grading automorphisms") {
  auto algebra = build_free_nilpotent(2, 3);
  testutil::TestRng rng(909);

  auto v = rng.vector(algebra);
  CHECK(dilate_vector(Rational(1), v) == v);

  // layer j scales by epsilon^j: at epsilon = 1/4 the third layer shrinks
  // by 64
  auto z = basis_vector(algebra, 3);
  CHECK(dilate_vector(Rational(1, 4), z) == LieVector(Rational(1, 64) * z));

  for (int trial = 0; trial < 40; ++trial) {
    auto a = rng.point(algebra);
    auto b = rng.point(algebra);
    auto eps = rng.positive_rational(9, 7);
    auto delta = rng.positive_rational(9, 7);
    // group homomorphism
    CHECK(dilate(eps, bch_product(a, b)) == bch_product(dilate(eps, a), dilate(eps, b)));
    // composition law
    CHECK(dilate(eps, dilate(delta, a)) == dilate(Rational(eps * delta), a));
    // linear on the algebra, layer by layer
    for (int layer = 1; layer <= 3; ++layer) {
      auto piece = layer_component(a.log, layer);
      CHECK(dilate_vector(eps, piece) ==
            LieVector(carnot::pow_rational(eps, static_cast<unsigned>(layer)) * piece));
    }
  }

  CHECK(testutil::error_code_of([&] { dilate_vector(Rational(0), v); }) ==
        ErrorCode::EpsilonOutOfRange);
  CHECK(testutil::error_code_of([&] { dilate_vector(Rational(-1, 2), v); }) ==
        ErrorCode::EpsilonOutOfRange);
}

TEST_CASE("the top two layers commute with each other") {
  testutil::TestRng rng(13);
  for (int step : {3, 4, 5}) {
    auto algebra = build_free_nilpotent(2, step);
    for (int trial = 0; trial < 15; ++trial) {
      auto u = rng.layer_vector(algebra, step - 1);
      auto v = rng.layer_vector(algebra, step - 1) + rng.layer_vector(algebra, step);
      auto p = exp_point(u);
      auto q = exp_point(v);
      CHECK(bch_product(p, q) == bch_product(q, p));
      CHECK(bch_product(p, q) == exp_point(u + v));
    }
  }
}

TEST_CASE("the central quotient deletes the top layer") {
  for (int step : {2, 3, 4, 5}) {
    auto algebra = build_free_nilpotent(2, step);
    auto map = quotient_map(algebra);
    CHECK(map.source() == algebra);
    CHECK(map.target()->step() == step - 1);
    for (int layer = 1; layer < step; ++layer) {
      CHECK(map.target()->layer_dim(layer) == algebra->layer_dim(layer));
    }

    testutil::TestRng rng(1000 + step);
    for (int trial = 0; trial < 25; ++trial) {
      auto a = rng.point(algebra);
      auto b = rng.point(algebra);

      // group homomorphism onto the quotient
      CHECK(map.project(bch_product(a, b)) == bch_product(map.project(a), map.project(b)));

      // kernel = central top layer
      auto z = rng.layer_vector(algebra, step);
      CHECK(map.project(exp_point(z)).is_identity());
      CHECK(map.project(bch_product(a, exp_point(z))) == map.project(a));

      // the section is a right inverse and tops out below the deleted layer
      auto down = map.project(a);
      CHECK(map.project(map.lift(down)) == down);
      CHECK(map.lift(down).log.highest_layer() <= step - 1);
    }
  }

  auto abelian = build_free_nilpotent(2, 1);
  CHECK(testutil::error_code_of([&] { quotient_map(abelian); }) == ErrorCode::MalformedInput);
}
