#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <vector>

#include "qvf/forms.hpp"

namespace qvf::lift {

using Int = boost::multiprecision::cpp_int;
using forms::Exponents;

// Homogeneous form with integer coefficients.
struct IntegerForm {
  int n = 0;
  int degree = 0;
  std::map<Exponents, Int> coefficients;

  static IntegerForm from_terms(int n, int degree,
                                std::vector<std::pair<Exponents, Int>> terms);
  Int evaluate(const std::vector<Int>& point) const;
  Int evaluate_partial(int var, const std::vector<Int>& point) const;
};

struct LiftedPoint {
  std::uint64_t p = 0;
  std::uint32_t precision = 0;  // k: the zero holds mod p^k
  std::vector<Int> coords;      // in [0, p^k)
};

// Coefficient-wise reduction theta(F) of F over GF(p).
forms::Form reduce_mod_p(const IntegerForm& F, const gf::FieldSpec& field);

// Newton iteration on the single coordinate with the smallest unit partial.
// Requires F(x0) == 0 mod p and a non-singular reduction at x0; doubles the
// precision each step, so at most ceil(log2 k) iterations.
LiftedPoint hensel_lift(const IntegerForm& F, std::uint64_t p,
                        const std::vector<Int>& x0, std::uint32_t k);

}  // namespace qvf::lift
