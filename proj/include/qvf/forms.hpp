#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qvf/gf.hpp"

namespace qvf::forms {

using gf::Elem;
using gf::FieldSpec;

inline constexpr int kMaxVars = 6;

using Exponents = std::array<std::uint8_t, kMaxVars>;
using Coords = std::array<Elem, kMaxVars>;

struct Term {
  Exponents exps{};
  Elem coeff = 0;
  bool operator==(const Term&) const = default;
};

// Descending-lexicographic exponent order; the on-disk monomial order.
bool exp_less_desc(const Exponents& a, const Exponents& b);

// Homogeneous multivariate polynomial over GF(q). Immutable value; terms are
// kept sorted descending-lex with nonzero coefficients only.
class Form {
 public:
  Form(const FieldSpec& field, int n, int degree);
  static Form from_terms(const FieldSpec& field, int n, int degree,
                         std::vector<Term> terms);

  int vars() const { return n_; }
  int degree() const { return d_; }
  const FieldSpec& field() const { return *field_; }
  const std::vector<Term>& terms() const { return terms_; }
  Elem coefficient(const Exponents& e) const;
  bool is_zero() const { return terms_.empty(); }

  bool operator==(const Form& o) const {
    return n_ == o.n_ && d_ == o.d_ && terms_ == o.terms_;
  }

 private:
  const FieldSpec* field_;
  int n_, d_;
  std::vector<Term> terms_;
};

// Not all zero; first nonzero coordinate normalized to 1.
struct ProjectivePoint {
  int n = 0;
  Coords coords{};
  bool operator==(const ProjectivePoint& o) const {
    return n == o.n && coords == o.coords;
  }
  bool operator<(const ProjectivePoint& o) const { return coords < o.coords; }
};

struct ZeroCensus {
  long total = 0;
  long singular = 0;
  long nonsingular = 0;
  std::vector<ProjectivePoint> witnesses;  // all zeros, when collected
};

Elem evaluate(const Form& f, const Coords& point);

// Formal derivative with respect to variable `var` (0-based); exponents are
// reduced into GF(q) through the prime subfield, so characteristic-p
// degeneracies fall out of the rule itself.
Form partial_derivative(const Form& f, int var);

bool is_zero_at(const Form& f, const Coords& point);
// True iff the point is a zero and some partial derivative is nonzero there.
bool is_nonsingular_zero(const Form& f, const ProjectivePoint& point);

// All (q^n - 1)/(q - 1) normalized representatives, ascending lexicographic in
// the coordinate encodings.
std::vector<ProjectivePoint> projective_points(int n, const FieldSpec& field);

ZeroCensus count_projective_zeros(const Form& f, bool collect_witnesses);

// First non-singular zero in projective_points order, or nullopt.
std::optional<ProjectivePoint> find_nonsingular_zero(const Form& f);

// The form y -> f(sum_i y_i * basis_i) in basis.size() variables.
Form restrict(const Form& f, std::span<const Coords> basis);

struct Lemma5Verdict {
  Elem c12 = 0;  // coefficient of x1^3 x2^2 in the restriction to <z1, z2>
  Elem c21 = 0;  // coefficient of x1^2 x2^3
  bool shape_ok = false;  // support within those two monomials, product zero
};

// Requires z1 != z2 and both zeros of f (throws otherwise).
Lemma5Verdict lemma5_shape_check(const Form& f, const ProjectivePoint& z1,
                                 const ProjectivePoint& z2);

// Requires n > d (throws otherwise): |Z(f)| >= (q^{n-d} - 1)/(q - 1).
bool chevalley_warning_check(const Form& f);

}  // namespace qvf::forms
