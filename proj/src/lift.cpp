#include "qvf/lift.hpp"

#include <stdexcept>

namespace qvf::lift {

namespace {

Int pow_int(const Int& base, unsigned e) {
  Int r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

Int mod(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

// inverse of a mod m by extended gcd; a must be a unit
Int inv_mod(const Int& a, const Int& m) {
  Int old_r = mod(a, m), r = m;
  Int old_s = 1, s = 0;
  while (r != 0) {
    Int quot = old_r / r;
    Int tmp = old_r - quot * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quot * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw std::domain_error("not invertible in Z/m");
  return mod(old_s, m);
}

}  // namespace

IntegerForm IntegerForm::from_terms(int n, int degree,
                                    std::vector<std::pair<Exponents, Int>> terms) {
  if (n < 1 || n > forms::kMaxVars) throw std::invalid_argument("bad variable count");
  IntegerForm F;
  F.n = n;
  F.degree = degree;
  for (auto& [e, c] : terms) {
    int sum = 0;
    for (int i = 0; i < forms::kMaxVars; ++i) sum += e[i];
    if (sum != degree) throw std::invalid_argument("non-homogeneous term");
    F.coefficients[e] += c;
  }
  std::erase_if(F.coefficients, [](const auto& kv) { return kv.second == 0; });
  return F;
}

Int IntegerForm::evaluate(const std::vector<Int>& point) const {
  if (int(point.size()) != n) throw std::invalid_argument("dimension mismatch");
  Int acc = 0;
  for (const auto& [e, c] : coefficients) {
    Int v = c;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < e[i]; ++j) v *= point[i];
    acc += v;
  }
  return acc;
}

Int IntegerForm::evaluate_partial(int var, const std::vector<Int>& point) const {
  if (var < 0 || var >= n) throw std::out_of_range("variable index");
  Int acc = 0;
  for (const auto& [e, c] : coefficients) {
    if (e[var] == 0) continue;
    Int v = c * e[var];
    for (int i = 0; i < n; ++i) {
      int exp = e[i] - (i == var ? 1 : 0);
      for (int j = 0; j < exp; ++j) v *= point[i];
    }
    acc += v;
  }
  return acc;
}

forms::Form reduce_mod_p(const IntegerForm& F, const gf::FieldSpec& field) {
  if (field.k() != 1) throw std::invalid_argument("reduction targets a prime field");
  std::vector<forms::Term> terms;
  for (const auto& [e, c] : F.coefficients) {
    Int r = mod(c, Int(field.p()));
    if (r != 0) terms.push_back({e, gf::Elem(r.convert_to<std::uint32_t>())});
  }
  return forms::Form::from_terms(field, F.n, F.degree, std::move(terms));
}

LiftedPoint hensel_lift(const IntegerForm& F, std::uint64_t p,
                        const std::vector<Int>& x0, std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("target precision must be >= 1");
  Int P(p);
  if (mod(F.evaluate(x0), P) != 0)
    throw std::invalid_argument("x0 is not a zero of F mod p");
  int j = -1;
  for (int i = 0; i < F.n; ++i) {
    if (mod(F.evaluate_partial(i, x0), P) != 0) {
      j = i;
      break;
    }
  }
  if (j < 0) throw std::invalid_argument("reduction of F is singular at x0");

  std::vector<Int> x = x0;
  for (Int& c : x) c = mod(c, P);

  // Newton on coordinate j, doubling the working precision each step
  std::uint32_t prec = 1;
  while (prec < k) {
    prec = std::min(2 * prec, k);
    Int modulus = pow_int(P, prec);
    Int deriv = mod(F.evaluate_partial(j, x), modulus);
    Int correction = mod(F.evaluate(x), modulus) * inv_mod(deriv, modulus);
    x[j] = mod(x[j] - correction, modulus);
    if (mod(F.evaluate(x), modulus) != 0)
      throw std::logic_error("Newton step failed to reach target precision");
  }

  LiftedPoint out;
  out.p = p;
  out.precision = k;
  out.coords = std::move(x);
  return out;
}

}  // namespace qvf::lift
