#pragma once

// The GF(7) ternary quintic used as the worked reference case:
//   2x1^3x2^2 + 2x1^3x3^2 + 4x2^3x3^2
//   + x1x2x3(5x1^2 + 6x2^2 + 2x3^2 + x1x2 + x1x3 + x2x3)
// It has exactly four projective zeros, all singular.

#include <vector>

#include "qvf/forms.hpp"

inline qvf::forms::Form paper_example_form(const qvf::gf::FieldSpec& F) {
  using qvf::forms::Term;
  std::vector<Term> terms = {
      {{3, 2, 0}, 2}, {{3, 0, 2}, 2}, {{0, 3, 2}, 4},
      {{3, 1, 1}, 5}, {{1, 3, 1}, 6}, {{1, 1, 3}, 2},
      {{2, 2, 1}, 1}, {{2, 1, 2}, 1}, {{1, 2, 2}, 1},
  };
  return qvf::forms::Form::from_terms(F, 3, 5, std::move(terms));
}

inline std::vector<qvf::forms::ProjectivePoint> paper_example_zeros() {
  return {{3, {0, 0, 1}}, {3, {0, 1, 0}}, {3, {1, 0, 0}}, {3, {1, 6, 2}}};
}
