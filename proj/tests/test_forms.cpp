#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <stdexcept>

#include "paper_example.hpp"
#include "qvf/form_io.hpp"
#include "qvf/forms.hpp"

using namespace qvf;
using forms::Coords;
using forms::Exponents;
using forms::Form;
using forms::ProjectivePoint;
using forms::Term;
using gf::Elem;
using gf::FieldSpec;

namespace {

Form random_form(const FieldSpec& F, int n, int d, std::mt19937& rng, int terms) {
  std::uniform_int_distribution<int> coeff(0, int(F.q()) - 1);
  std::uniform_int_distribution<int> var(0, n - 1);
  std::vector<Term> ts;
  for (int t = 0; t < terms; ++t) {
    Exponents e{};
    for (int i = 0; i < d; ++i) ++e[var(rng)];
    ts.push_back({e, Elem(coeff(rng))});
  }
  return Form::from_terms(F, n, d, std::move(ts));
}

Coords random_point(const FieldSpec& F, int n, std::mt19937& rng) {
  std::uniform_int_distribution<int> el(0, int(F.q()) - 1);
  Coords c{};
  for (int i = 0; i < n; ++i) c[i] = Elem(el(rng));
  return c;
}

}  // namespace

TEST_CASE("projective point enumeration") {
  FieldSpec F = FieldSpec::build(5, 1);
  auto pts = forms::projective_points(3, F);
  CHECK(pts.size() == 31);  // (5^3 - 1) / 4
  for (size_t i = 0; i < pts.size(); ++i) {
    int first = -1;
    for (int c = 0; c < 3; ++c)
      if (pts[i].coords[c] != 0) {
        first = c;
        break;
      }
    REQUIRE(first >= 0);
    CHECK(pts[i].coords[first] == 1);
    if (i) CHECK(pts[i - 1] < pts[i]);
  }
}

TEST_CASE("reference quintic over GF(7)") {
  FieldSpec F = FieldSpec::build(7, 1);
  Form f = paper_example_form(F);

  CHECK(forms::evaluate(f, {1, 1, 1}) == 3);

  forms::ZeroCensus census = forms::count_projective_zeros(f, true);
  CHECK(census.total == 4);
  CHECK(census.singular == 4);
  CHECK(census.nonsingular == 0);
  CHECK(census.witnesses == paper_example_zeros());
  CHECK(!forms::find_nonsingular_zero(f).has_value());
}

TEST_CASE("partial derivative in characteristic p") {
  // over GF(25), d/dx x^5 = 5x^4 = 0
  FieldSpec F = FieldSpec::build(5, 2);
  Form f = Form::from_terms(F, 2, 5, {{{5, 0}, 1}});
  CHECK(forms::partial_derivative(f, 0).is_zero());
  // d/dx x^3 y^2 = 3 x^2 y^2
  Form g = Form::from_terms(F, 2, 5, {{{3, 2}, 1}});
  Form expect = Form::from_terms(F, 2, 4, {{{2, 2}, 3}});
  CHECK(forms::partial_derivative(g, 0) == expect);
}

TEST_CASE("euler identity on random quintics") {
  std::mt19937 rng(42);
  for (std::uint32_t p : {7u, 5u}) {
    FieldSpec F = FieldSpec::build(p, p == 5 ? 2 : 1);
    for (int it = 0; it < 50; ++it) {
      Form f = random_form(F, 3, 5, rng, 6);
      Coords x = random_point(F, 3, rng);
      Elem lhs = 0;
      for (int i = 0; i < 3; ++i)
        lhs = F.add(lhs, F.mul(x[i], forms::evaluate(forms::partial_derivative(f, i), x)));
      Elem rhs = F.mul(Elem(5 % p), forms::evaluate(f, x));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("restriction commutes with evaluation") {
  std::mt19937 rng(7);
  FieldSpec F = FieldSpec::build(7, 1);
  for (int it = 0; it < 30; ++it) {
    Form f = random_form(F, 4, 5, rng, 8);
    std::array<Coords, 2> basis = {random_point(F, 4, rng), random_point(F, 4, rng)};
    Form r = forms::restrict(f, basis);
    for (int y0 = 0; y0 < 7; ++y0)
      for (int y1 = 0; y1 < 7; ++y1) {
        Coords x{};
        for (int i = 0; i < 4; ++i)
          x[i] = F.add(F.mul(Elem(y0), basis[0][i]), F.mul(Elem(y1), basis[1][i]));
        CHECK(forms::evaluate(r, {Elem(y0), Elem(y1)}) ==
              forms::evaluate(f, x));
      }
  }
}

TEST_CASE("two-zero restriction shape on the reference quintic") {
  FieldSpec F = FieldSpec::build(7, 1);
  Form f = paper_example_form(F);
  auto zeros = paper_example_zeros();
  for (size_t i = 0; i < zeros.size(); ++i)
    for (size_t j = i + 1; j < zeros.size(); ++j) {
      forms::Lemma5Verdict v = forms::lemma5_shape_check(f, zeros[i], zeros[j]);
      CHECK(v.shape_ok);
      CHECK(F.mul(v.c12, v.c21) == 0);
    }
  // both arguments must be zeros of f
  CHECK_THROWS_AS(forms::lemma5_shape_check(f, {3, {1, 1, 1}}, zeros[0]),
                  std::invalid_argument);
}

TEST_CASE("zero count bound in more variables than the degree") {
  std::mt19937 rng(11);
  FieldSpec F = FieldSpec::build(3, 1);
  for (int it = 0; it < 20; ++it) {
    Form f = random_form(F, 6, 5, rng, 10);
    CHECK(forms::chevalley_warning_check(f));
  }
  // requires n > d
  Form small = random_form(F, 3, 5, rng, 4);
  CHECK_THROWS_AS(forms::chevalley_warning_check(small), std::invalid_argument);
}

TEST_CASE("form text round-trip") {
  FieldSpec F = FieldSpec::build(7, 1);
  Form f = paper_example_form(F);
  std::string text = forms::serialize_form(f);
  forms::LoadedForm loaded = forms::parse_form(text);
  CHECK(loaded.form == f);
  CHECK(loaded.field->q() == 7);
}

TEST_CASE("form text parse rejections") {
  FieldSpec F = FieldSpec::build(7, 1);
  std::string good = forms::serialize_form(paper_example_form(F));
  // corrupt one exponent line into a non-homogeneous term
  std::string bad = good;
  auto pos = bad.find("3 2 0");
  REQUIRE(pos != std::string::npos);
  bad.replace(pos, 5, "3 2 1");
  CHECK_THROWS_AS(forms::parse_form(bad), std::invalid_argument);
}
