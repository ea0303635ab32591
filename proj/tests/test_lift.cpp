#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qvf/lift.hpp"

using namespace qvf;
using lift::Int;
using lift::IntegerForm;
using lift::LiftedPoint;

namespace {

Int pow_int(Int b, std::uint32_t e) {
  Int r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r *= b;
  return r;
}

// x1^5 + x2^5 + 9 x3^5
IntegerForm demo_form() {
  return IntegerForm::from_terms(
      3, 5, {{{5, 0, 0}, 1}, {{0, 5, 0}, 1}, {{0, 0, 5}, 9}});
}

}  // namespace

TEST_CASE("an exact zero lifts to itself") {
  IntegerForm F = IntegerForm::from_terms(2, 5, {{{5, 0}, 1}, {{0, 5}, -1}});
  LiftedPoint x = lift::hensel_lift(F, 11, {1, 1}, 6);
  CHECK(x.coords == std::vector<Int>{1, 1});
  CHECK(F.evaluate(x.coords) == 0);
}

TEST_CASE("a genuine Newton step occurs for the demonstration form") {
  IntegerForm F = demo_form();
  // F(1,10,0) = 100001: divisible by 11 but not by 121, so the start point is
  // not already a zero at higher precision
  CHECK(F.evaluate({1, 10, 0}) == 100001);
  CHECK(100001 % 11 == 0);
  CHECK(100001 % 121 != 0);
  LiftedPoint x = lift::hensel_lift(F, 11, {1, 10, 0}, 3);
  CHECK(F.evaluate(x.coords) % pow_int(11, 3) == 0);
  for (int i = 0; i < 3; ++i) {
    CHECK(x.coords[i] >= 0);
    CHECK(x.coords[i] < pow_int(11, 3));
  }
}

TEST_CASE("the demonstration lift reaches precision 8") {
  IntegerForm F = demo_form();
  std::vector<Int> x0 = {1, 10, 0};
  LiftedPoint x = lift::hensel_lift(F, 11, x0, 8);
  CHECK(x.p == 11);
  CHECK(x.precision == 8);
  CHECK(F.evaluate(x.coords) % pow_int(11, 8) == 0);
  // congruent to the start point mod p, and not the trivial class
  bool unit = false;
  for (int i = 0; i < 3; ++i) {
    CHECK((x.coords[i] - x0[i]) % 11 == 0);
    if (x.coords[i] % 11 != 0) unit = true;
  }
  CHECK(unit);
}

TEST_CASE("nested precisions agree: the lift is deterministic") {
  IntegerForm F = demo_form();
  LiftedPoint x2 = lift::hensel_lift(F, 11, {1, 10, 0}, 2);
  LiftedPoint x4 = lift::hensel_lift(F, 11, {1, 10, 0}, 4);
  LiftedPoint x8 = lift::hensel_lift(F, 11, {1, 10, 0}, 8);
  for (int i = 0; i < 3; ++i) {
    CHECK((x4.coords[i] - x2.coords[i]) % pow_int(11, 2) == 0);
    CHECK((x8.coords[i] - x4.coords[i]) % pow_int(11, 4) == 0);
  }
}

TEST_CASE("a brute-force zero of a second form lifts to precision 8") {
  // x1^5 + 2 x2^5 + 3 x3^5
  IntegerForm F = IntegerForm::from_terms(
      3, 5, {{{5, 0, 0}, 1}, {{0, 5, 0}, 2}, {{0, 0, 5}, 3}});
  gf::FieldSpec Fp = gf::FieldSpec::build(11, 1);
  forms::Form red = lift::reduce_mod_p(F, Fp);
  auto z = forms::find_nonsingular_zero(red);
  REQUIRE(z.has_value());
  std::vector<Int> x0;
  for (int i = 0; i < 3; ++i) x0.push_back(z->coords[i]);
  LiftedPoint x = lift::hensel_lift(F, 11, x0, 8);
  CHECK(F.evaluate(x.coords) % pow_int(11, 8) == 0);
  for (int i = 0; i < 3; ++i) CHECK((x.coords[i] - x0[i]) % 11 == 0);
}

TEST_CASE("reduction drops multiples of p and preserves homogeneity") {
  IntegerForm F = IntegerForm::from_terms(2, 5, {{{5, 0}, 11}, {{0, 5}, 1}});
  gf::FieldSpec Fp = gf::FieldSpec::build(11, 1);
  forms::Form red = lift::reduce_mod_p(F, Fp);
  forms::Form expect =
      forms::Form::from_terms(Fp, 2, 5, {{{0, 5}, 1}});
  CHECK(red == expect);

  // negative coefficients reduce into [0, p)
  IntegerForm G = IntegerForm::from_terms(2, 5, {{{5, 0}, -1}, {{0, 5}, 23}});
  forms::Form gred = lift::reduce_mod_p(G, Fp);
  CHECK(gred.coefficient({5, 0}) == 10);
  CHECK(gred.coefficient({0, 5}) == 1);
}

TEST_CASE("reduce-then-lift round trip on the demonstration form") {
  IntegerForm F = demo_form();
  gf::FieldSpec Fp = gf::FieldSpec::build(11, 1);
  forms::Form red = lift::reduce_mod_p(F, Fp);
  // the start point is a non-singular zero of the reduction
  forms::ProjectivePoint p0{3, {1, 10, 0}};
  CHECK(forms::is_nonsingular_zero(red, p0));
  LiftedPoint x = lift::hensel_lift(F, 11, {1, 10, 0}, 4);
  CHECK(F.evaluate(x.coords) % pow_int(11, 4) == 0);
}

TEST_CASE("precondition violations are rejected") {
  IntegerForm F = demo_form();
  // F(1,1,0) = 2: not a zero mod 11
  CHECK_THROWS_AS(lift::hensel_lift(F, 11, {1, 1, 0}, 3), std::invalid_argument);
  // characteristic 5 kills every partial of a quintic: singular reduction
  IntegerForm G = IntegerForm::from_terms(2, 5, {{{5, 0}, 1}, {{0, 5}, 1}});
  CHECK(G.evaluate({1, 4}) % 5 == 0);
  CHECK_THROWS_AS(lift::hensel_lift(G, 5, {1, 4}, 3), std::invalid_argument);
  // precision must be positive
  CHECK_THROWS_AS(lift::hensel_lift(F, 11, {1, 10, 0}, 0), std::invalid_argument);
  // non-homogeneous forms are rejected at construction
  CHECK_THROWS_AS(IntegerForm::from_terms(2, 5, {{{4, 0}, 1}}),
                  std::invalid_argument);
}
