#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>
#include <set>

#include "paper_example.hpp"
#include "qvf/shapes.hpp"

using namespace qvf;
using gf::Elem;
using gf::FieldSpec;
using shapes::ShapeTemplate;
using shapes::Slot;
using shapes::SlotKind;
using shapes::SlotStatus;
using shapes::Tournament;
using shapes::TripleShape;

TEST_CASE("pair indexing") {
  CHECK(Tournament::pair_index(0, 1, 4) == 0);
  CHECK(Tournament::pair_index(0, 2, 4) == 1);
  CHECK(Tournament::pair_index(0, 3, 4) == 2);
  CHECK(Tournament::pair_index(1, 2, 4) == 3);
  CHECK(Tournament::pair_index(1, 3, 4) == 4);
  CHECK(Tournament::pair_index(2, 3, 4) == 5);
  CHECK(Tournament::pair_index(2, 1, 4) == 3);  // unordered
}

TEST_CASE("every ternary tournament classifies onto its canonical pattern") {
  for (int bits = 0; bits < 8; ++bits) {
    Tournament t;
    t.m = 3;
    for (int i = 0; i < 3; ++i) t.forward[i] = bits & (1 << i);
    shapes::TripleClass cls = shapes::classify_triple(t, {0, 1, 2});
    Tournament canon = shapes::canonical_ternary(cls.shape);
    auto beats = [](const Tournament& tt, int a, int b) {
      return tt.direction(a, b).first == a;
    };
    // the relabeling carries the canonical pattern onto t
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b)
          CHECK(beats(canon, a, b) ==
                beats(t, cls.canon_to_orig[a], cls.canon_to_orig[b]));
    if (cls.shape == TripleShape::Cyclic) CHECK(cls.canon_to_orig[0] == 0);
  }
}

TEST_CASE("quaternary families have the right score sequences and pins") {
  FieldSpec F = FieldSpec::build(7, 1);
  const std::multiset<int> expected[4] = {
      {0, 1, 2, 3}, {0, 2, 2, 2}, {1, 1, 2, 2}, {1, 1, 1, 3}};
  std::set<std::multiset<int>> seen;
  for (int g = 1; g <= 4; ++g) {
    ShapeTemplate t = shapes::g_template(g, F);
    CHECK(t.m == 4);
    CHECK(t.slots.size() == 34);  // 6 a + 12 b + 12 c + 4 d
    std::multiset<int> scores;
    for (int v = 0; v < 4; ++v) {
      int out = 0;
      for (int w = 0; w < 4; ++w)
        if (v != w && t.tournament.direction(v, w).first == v) ++out;
      scores.insert(out);
    }
    CHECK(scores == expected[g - 1]);
    seen.insert(scores);
    int pinned = 0, free_a = 0, free_d = 0;
    for (const Slot& s : t.slots) {
      if (s.status == SlotStatus::Pinned) {
        ++pinned;
        CHECK(s.kind == SlotKind::A);
        CHECK(s.pin == 1);
      }
      if (s.kind == SlotKind::A && s.status == SlotStatus::Free) ++free_a;
      if (s.kind == SlotKind::D) {
        CHECK(s.status == SlotStatus::Free);
        ++free_d;
      }
    }
    CHECK(pinned == 3);
    CHECK(free_a == 3);
    CHECK(free_d == 4);
  }
  CHECK(seen.size() == 4);  // pairwise non-isomorphic
}

TEST_CASE("descriptor round-trip") {
  FieldSpec F = FieldSpec::build(11, 1);
  std::vector<ShapeTemplate> cases;
  cases.push_back(shapes::ternary_template(TripleShape::Transitive, {}, F));
  cases.push_back(shapes::ternary_template(TripleShape::Cyclic, {{{0, 1}, 3}}, F));
  for (int g = 1; g <= 4; ++g) cases.push_back(shapes::g_template(g, F));
  Tournament odd;
  odd.m = 3;
  odd.forward = {false, true, false};
  cases.push_back(shapes::custom_template(odd));
  for (const ShapeTemplate& t : cases) {
    ShapeTemplate back = shapes::template_from_descriptor(t.descriptor(), F);
    CHECK(back.descriptor() == t.descriptor());
    CHECK(back.tournament == t.tournament);
    REQUIRE(back.slots.size() == t.slots.size());
    for (size_t i = 0; i < t.slots.size(); ++i) {
      CHECK(back.slots[i].status == t.slots[i].status);
      CHECK(back.slots[i].pin == t.slots[i].pin);
    }
  }
}

TEST_CASE("the reference quintic is a transitive-shape instantiation") {
  FieldSpec F = FieldSpec::build(7, 1);
  ShapeTemplate t1 = shapes::ternary_template(TripleShape::Transitive, {}, F);
  std::vector<Elem> values = {2, 2, 4, 2, 6, 5, 1, 1, 1};
  CHECK(shapes::instantiate(t1, values, F) == paper_example_form(F));
}

TEST_CASE("instantiate rejections") {
  FieldSpec F = FieldSpec::build(7, 1);
  ShapeTemplate t1 = shapes::ternary_template(TripleShape::Transitive, {}, F);
  std::vector<Elem> zero_a = {0, 2, 4, 2, 6, 5, 1, 1, 1};
  CHECK_THROWS_AS(shapes::instantiate(t1, zero_a, F), std::invalid_argument);
  std::vector<Elem> short_v = {2, 2, 4};
  CHECK_THROWS_AS(shapes::instantiate(t1, short_v, F), std::invalid_argument);
}

TEST_CASE("scaling acts by substitution") {
  FieldSpec F = FieldSpec::build(7, 1);
  forms::Form f = paper_example_form(F);
  shapes::ScalingElement g{3, {2, 5, 1, 1}};
  forms::Form fg = shapes::apply_scaling(f, g);
  for (Elem x = 0; x < 7; ++x)
    for (Elem y = 0; y < 7; ++y)
      for (Elem z = 0; z < 7; ++z) {
        forms::Coords scaled = {F.mul(2, x), F.mul(5, y), F.mul(1, z)};
        CHECK(forms::evaluate(fg, {x, y, z}) ==
              F.mul(3, forms::evaluate(f, scaled)));
      }
}

TEST_CASE("scaling preserves the zero census") {
  FieldSpec F = FieldSpec::build(7, 1);
  forms::Form f = paper_example_form(F);
  forms::ZeroCensus base = forms::count_projective_zeros(f, false);
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> nz(1, 6);
  for (int it = 0; it < 20; ++it) {
    shapes::ScalingElement g{Elem(nz(rng)),
                             {Elem(nz(rng)), Elem(nz(rng)), Elem(nz(rng)), 1}};
    forms::ZeroCensus c = forms::count_projective_zeros(shapes::apply_scaling(f, g), false);
    CHECK(c.total == base.total);
    CHECK(c.singular == base.singular);
    CHECK(c.nonsingular == base.nonsingular);
  }
}

TEST_CASE("scaling orbits partition the a-tuples") {
  FieldSpec F = FieldSpec::build(7, 1);
  ShapeTemplate t1 = shapes::ternary_template(TripleShape::Transitive, {}, F);
  std::vector<Slot> a_slots(t1.slots.begin(), t1.slots.begin() + 3);
  shapes::ScalingOrbits orbits(F, a_slots, 3);
  const auto& reps = orbits.representatives();
  REQUIRE(!reps.empty());
  CHECK(reps[0] == std::vector<Elem>{1, 1, 1});
  for (size_t i = 1; i < reps.size(); ++i) CHECK(reps[i - 1] < reps[i]);

  // every tuple maps to its representative via the returned group element
  std::array<forms::Exponents, 3> w = {a_slots[0].exponents(), a_slots[1].exponents(),
                                       a_slots[2].exponents()};
  for (Elem a = 1; a < 7; ++a)
    for (Elem b = 1; b < 7; ++b)
      for (Elem c = 1; c < 7; ++c) {
        std::vector<Elem> tuple = {a, b, c};
        int id = orbits.orbit_of(tuple);
        REQUIRE(id >= 0);
        REQUIRE(id < int(reps.size()));
        shapes::ScalingElement g = orbits.to_representative(tuple);
        std::vector<Elem> img(3);
        for (int i = 0; i < 3; ++i)
          img[i] = F.mul(tuple[i], shapes::scaling_factor(F, g, w[i]));
        CHECK(img == reps[id]);
        // the representative is minimal in its orbit
        CHECK(reps[id] <= tuple);
      }
}
