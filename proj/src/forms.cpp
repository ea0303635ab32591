#include "qvf/forms.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qvf::forms {

bool exp_less_desc(const Exponents& a, const Exponents& b) { return b < a; }

Form::Form(const FieldSpec& field, int n, int degree)
    : field_(&field), n_(n), d_(degree) {
  if (n < 1 || n > kMaxVars) throw std::invalid_argument("unsupported variable count");
}

Form Form::from_terms(const FieldSpec& field, int n, int degree,
                      std::vector<Term> terms) {
  Form f(field, n, degree);
  std::map<Exponents, Elem> acc;
  for (const Term& t : terms) {
    int sum = 0;
    for (int i = 0; i < kMaxVars; ++i) {
      if (i >= n && t.exps[i] != 0)
        throw std::invalid_argument("exponent on unused variable");
      sum += t.exps[i];
    }
    if (sum != degree) throw std::invalid_argument("non-homogeneous term");
    acc[t.exps] = field.add(acc[t.exps], t.coeff);
  }
  for (const auto& [e, c] : acc)
    if (c != 0) f.terms_.push_back({e, c});
  std::sort(f.terms_.begin(), f.terms_.end(),
            [](const Term& a, const Term& b) { return exp_less_desc(a.exps, b.exps); });
  return f;
}

Elem Form::coefficient(const Exponents& e) const {
  for (const Term& t : terms_)
    if (t.exps == e) return t.coeff;
  return 0;
}

Elem evaluate(const Form& f, const Coords& point) {
  const FieldSpec& F = f.field();
  Elem acc = 0;
  for (const Term& t : f.terms()) {
    Elem v = t.coeff;
    for (int i = 0; i < f.vars(); ++i) {
      if (t.exps[i] == 0) continue;
      Elem x = point[i];
      if (x == 0) {
        v = 0;
        break;
      }
      v = F.mul(v, F.pow(x, t.exps[i]));
    }
    acc = F.add(acc, v);
  }
  return acc;
}

Form partial_derivative(const Form& f, int var) {
  if (var < 0 || var >= f.vars()) throw std::out_of_range("variable index");
  const FieldSpec& F = f.field();
  std::vector<Term> out;
  for (const Term& t : f.terms()) {
    if (t.exps[var] == 0) continue;
    Elem factor = Elem(t.exps[var] % F.p());
    if (factor == 0) continue;
    Term d = t;
    d.coeff = F.mul(t.coeff, factor);
    d.exps[var] -= 1;
    out.push_back(d);
  }
  return Form::from_terms(F, f.vars(), f.degree() - 1, std::move(out));
}

bool is_zero_at(const Form& f, const Coords& point) {
  return evaluate(f, point) == 0;
}

bool is_nonsingular_zero(const Form& f, const ProjectivePoint& point) {
  if (point.n != f.vars()) throw std::invalid_argument("dimension mismatch");
  if (evaluate(f, point.coords) != 0) return false;
  for (int i = 0; i < f.vars(); ++i)
    if (evaluate(partial_derivative(f, i), point.coords) != 0) return true;
  return false;
}

namespace {

void gen_points(int n, int total, const FieldSpec& F,
                std::vector<ProjectivePoint>& out, Coords prefix, int pos) {
  // leading zeros first, then the normalized 1 followed by a free tail
  if (pos == total) return;
  // branch 1: this coordinate zero, point lives in the remaining coordinates
  if (pos + 1 < total) {
    Coords c = prefix;
    c[pos] = 0;
    gen_points(n, total, F, out, c, pos + 1);
  }
  // branch 2: this coordinate is the first nonzero one, normalized to 1
  Coords c = prefix;
  c[pos] = 1;
  int tail = total - pos - 1;
  std::vector<std::uint32_t> odo(tail, 0);
  while (true) {
    for (int i = 0; i < tail; ++i) c[pos + 1 + i] = Elem(odo[i]);
    ProjectivePoint pt;
    pt.n = n;
    pt.coords = c;
    out.push_back(pt);
    int i = tail - 1;
    while (i >= 0 && ++odo[i] == F.q()) odo[i--] = 0;
    if (i < 0) break;
  }
}

}  // namespace

std::vector<ProjectivePoint> projective_points(int n, const FieldSpec& F) {
  if (n < 1 || n > kMaxVars) throw std::invalid_argument("unsupported variable count");
  std::vector<ProjectivePoint> out;
  std::uint64_t count = 1, qn = 1;
  for (int i = 0; i < n; ++i) qn *= F.q();
  count = (qn - 1) / (F.q() - 1);
  out.reserve(count);
  gen_points(n, n, F, out, Coords{}, 0);
  if (out.size() != count) throw std::logic_error("projective point count mismatch");
  return out;
}

ZeroCensus count_projective_zeros(const Form& f, bool collect_witnesses) {
  ZeroCensus census;
  std::vector<Form> partials;
  partials.reserve(f.vars());
  for (int i = 0; i < f.vars(); ++i) partials.push_back(partial_derivative(f, i));
  for (const ProjectivePoint& pt : projective_points(f.vars(), f.field())) {
    if (evaluate(f, pt.coords) != 0) continue;
    ++census.total;
    bool nonsing = false;
    for (const Form& d : partials) {
      if (evaluate(d, pt.coords) != 0) {
        nonsing = true;
        break;
      }
    }
    if (nonsing)
      ++census.nonsingular;
    else
      ++census.singular;
    if (collect_witnesses) census.witnesses.push_back(pt);
  }
  return census;
}

std::optional<ProjectivePoint> find_nonsingular_zero(const Form& f) {
  std::vector<Form> partials;
  partials.reserve(f.vars());
  for (int i = 0; i < f.vars(); ++i) partials.push_back(partial_derivative(f, i));
  for (const ProjectivePoint& pt : projective_points(f.vars(), f.field())) {
    if (evaluate(f, pt.coords) != 0) continue;
    for (const Form& d : partials)
      if (evaluate(d, pt.coords) != 0) return pt;
  }
  return std::nullopt;
}

namespace {

// sparse multivariate polynomial accumulator used by restrict()
using PolyMap = std::map<Exponents, Elem>;

PolyMap poly_mul(const PolyMap& a, const PolyMap& b, const FieldSpec& F, int m) {
  PolyMap r;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      Exponents e{};
      for (int i = 0; i < m; ++i) e[i] = std::uint8_t(ea[i] + eb[i]);
      Elem prod = F.mul(ca, cb);
      auto it = r.find(e);
      Elem sum = F.add(it == r.end() ? 0 : it->second, prod);
      if (sum == 0) {
        if (it != r.end()) r.erase(it);
      } else {
        r[e] = sum;
      }
    }
  }
  return r;
}

}  // namespace

Form restrict(const Form& f, std::span<const Coords> basis) {
  const FieldSpec& F = f.field();
  int m = int(basis.size());
  if (m < 1 || m > f.vars()) throw std::invalid_argument("bad basis size");

  // linear forms l_i(y) = sum_j basis[j][i] * y_j, one per original variable
  std::vector<PolyMap> linear(f.vars());
  for (int i = 0; i < f.vars(); ++i) {
    for (int j = 0; j < m; ++j) {
      Elem c = basis[j][i];
      if (c == 0) continue;
      Exponents e{};
      e[j] = 1;
      linear[i][e] = F.add(linear[i].count(e) ? linear[i][e] : 0, c);
    }
  }

  PolyMap acc;
  for (const Term& t : f.terms()) {
    PolyMap prod;
    prod[Exponents{}] = t.coeff;
    for (int i = 0; i < f.vars(); ++i)
      for (int e = 0; e < t.exps[i]; ++e) prod = poly_mul(prod, linear[i], F, m);
    for (const auto& [e, c] : prod) {
      auto it = acc.find(e);
      Elem sum = F.add(it == acc.end() ? 0 : it->second, c);
      if (sum == 0) {
        if (it != acc.end()) acc.erase(it);
      } else {
        acc[e] = sum;
      }
    }
  }

  std::vector<Term> terms;
  for (const auto& [e, c] : acc) terms.push_back({e, c});
  return Form::from_terms(F, m, f.degree(), std::move(terms));
}

Lemma5Verdict lemma5_shape_check(const Form& f, const ProjectivePoint& z1,
                                 const ProjectivePoint& z2) {
  if (z1 == z2) throw std::invalid_argument("zeros must be distinct");
  if (evaluate(f, z1.coords) != 0 || evaluate(f, z2.coords) != 0)
    throw std::invalid_argument("inputs are not zeros of the form");
  std::array<Coords, 2> basis = {z1.coords, z2.coords};
  Form r = restrict(f, std::span<const Coords>(basis.data(), 2));
  Lemma5Verdict v;
  v.shape_ok = true;
  for (const Term& t : r.terms()) {
    if (t.exps[0] == 3 && t.exps[1] == 2)
      v.c12 = t.coeff;
    else if (t.exps[0] == 2 && t.exps[1] == 3)
      v.c21 = t.coeff;
    else
      v.shape_ok = false;
  }
  if (f.field().mul(v.c12, v.c21) != 0) v.shape_ok = false;
  return v;
}

bool chevalley_warning_check(const Form& f) {
  if (f.vars() <= f.degree())
    throw std::invalid_argument("Chevalley-Warning requires n > d");
  const FieldSpec& F = f.field();
  std::uint64_t bound = 1, pw = 1;
  for (int i = 0; i < f.vars() - f.degree(); ++i) pw *= F.q();
  bound = (pw - 1) / (F.q() - 1);
  return std::uint64_t(count_projective_zeros(f, false).total) >= bound;
}

}  // namespace qvf::forms
