#include "qvf/gf.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qvf::gf {

namespace {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Polynomials over GF(p) as digit vectors, low degree first, no trailing zeros.
using Poly = std::vector<std::uint32_t>;

Poly trim(Poly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return trim(r);
}

// Remainder of a mod m; m monic.
Poly poly_mod(Poly a, const Poly& m, std::uint32_t p) {
  a = trim(a);
  while (a.size() >= m.size()) {
    std::uint32_t lead = a.back();
    size_t shift = a.size() - m.size();
    for (size_t i = 0; i < m.size(); ++i) {
      std::uint32_t sub = (lead * m[i]) % p;
      a[i + shift] = (a[i + shift] + p - sub) % p;
    }
    a = trim(a);
  }
  return a;
}

Elem poly_to_elem(const Poly& a, std::uint32_t p) {
  std::uint32_t e = 0, mult = 1;
  for (std::uint32_t d : a) {
    e += d * mult;
    mult *= p;
  }
  return Elem(e);
}

Poly elem_to_poly(Elem e, std::uint32_t p) {
  Poly a;
  std::uint32_t v = e;
  while (v) {
    a.push_back(v % p);
    v /= p;
  }
  return a;
}

// Trial division against every monic polynomial of lower degree >= 1.
bool is_irreducible(const Poly& m, std::uint32_t p) {
  std::uint32_t deg = std::uint32_t(m.size()) - 1;
  for (std::uint32_t d = 1; d < deg; ++d) {
    // all monic degree-d polynomials: p^d choices of lower coefficients
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t c = 0; c < count; ++c) {
      Poly div(d + 1, 0);
      std::uint64_t v = c;
      for (std::uint32_t i = 0; i < d; ++i) {
        div[i] = std::uint32_t(v % p);
        v /= p;
      }
      div[d] = 1;
      if (poly_mod(m, div, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

FieldSpec FieldSpec::build(std::uint32_t p, std::uint32_t k,
                           std::optional<std::vector<Elem>> modulus,
                           std::uint32_t bound) {
  if (!is_prime(p)) throw std::invalid_argument("p is not prime: " + std::to_string(p));
  if (k < 1) throw std::invalid_argument("extension degree must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q *= p;
    if (q > bound)
      throw std::invalid_argument("field order exceeds bound " + std::to_string(bound));
  }

  FieldSpec f;
  f.p_ = p;
  f.k_ = k;
  f.q_ = std::uint32_t(q);

  Poly mod;
  if (modulus) {
    if (modulus->size() != k + 1 || modulus->back() != 1)
      throw std::invalid_argument("modulus must be monic of degree k");
    for (Elem d : *modulus)
      if (d >= p) throw std::invalid_argument("modulus digit out of range");
    mod.assign(modulus->begin(), modulus->end());
    if (k > 1 && !is_irreducible(mod, p))
      throw std::invalid_argument("modulus is reducible");
  } else if (k == 1) {
    mod = {0, 1};  // x; unused for prime fields
  } else {
    // lexicographically smallest monic irreducible, low-degree-first compare
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < k; ++i) count *= p;
    bool found = false;
    for (std::uint64_t c = 0; c < count && !found; ++c) {
      Poly cand(k + 1, 0);
      // digit 0 is the most significant position of the lex compare
      for (std::uint32_t i = 0; i < k; ++i) {
        std::uint64_t div = 1;
        for (std::uint32_t j = i + 1; j < k; ++j) div *= p;
        cand[i] = std::uint32_t((c / div) % p);
      }
      cand[k] = 1;
      if (is_irreducible(cand, p)) {
        mod = cand;
        found = true;
      }
    }
    if (!found) throw std::logic_error("no irreducible polynomial found");
  }
  f.modulus_.assign(mod.begin(), mod.end());

  // multiplication via polynomial arithmetic, used to bootstrap the tables
  auto raw_mul = [&](Elem a, Elem b) -> Elem {
    Poly r = poly_mod(poly_mul(elem_to_poly(a, p), elem_to_poly(b, p), p), mod, p);
    return poly_to_elem(r, p);
  };

  auto mult_order = [&](Elem a) -> std::uint32_t {
    Elem x = a;
    std::uint32_t ord = 1;
    while (x != 1) {
      x = raw_mul(x, a);
      ++ord;
      if (ord > f.q_) throw std::logic_error("order computation diverged");
    }
    return ord;
  };

  // smallest-encoding primitive element
  Elem gen = 0;
  for (Elem a = 1; a < f.q_; ++a) {
    if (mult_order(a) == f.q_ - 1) {
      gen = a;
      break;
    }
  }
  if (gen == 0 && f.q_ != 2) throw std::logic_error("no generator found");
  if (f.q_ == 2) gen = 1;
  f.generator_ = gen;

  f.exp_.assign(f.q_ - 1, 0);
  f.log_.assign(f.q_, 0);
  Elem x = 1;
  for (std::uint32_t i = 0; i < f.q_ - 1; ++i) {
    f.exp_[i] = x;
    f.log_[x] = Elem(i);
    x = raw_mul(x, gen);
  }
  if (x != 1) throw std::logic_error("generator order mismatch");
  for (Elem a = 1; a < f.q_; ++a)
    if (f.exp_[f.log_[a]] != a) throw std::logic_error("exp/log tables inconsistent");
  return f;
}

Elem FieldSpec::add_digits(Elem a, Elem b) const {
  std::uint32_t r = 0, mult = 1, av = a, bv = b;
  while (av || bv) {
    r += ((av % p_ + bv % p_) % p_) * mult;
    av /= p_;
    bv /= p_;
    mult *= p_;
  }
  return Elem(r);
}

Elem FieldSpec::neg_digits(Elem a) const {
  std::uint32_t r = 0, mult = 1, av = a;
  while (av) {
    std::uint32_t d = av % p_;
    r += (d == 0 ? 0 : p_ - d) * mult;
    av /= p_;
    mult *= p_;
  }
  return Elem(r);
}

Elem FieldSpec::inv(Elem a) const {
  if (a == 0) throw std::domain_error("division by zero in GF(q)");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Elem FieldSpec::pow(Elem a, std::uint64_t n) const {
  if (n == 0) return 1;
  if (a == 0) return 0;
  std::uint64_t e = (std::uint64_t(log_[a]) * (n % (q_ - 1))) % (q_ - 1);
  return exp_[e];
}

std::vector<Elem> FieldSpec::elements() const {
  std::vector<Elem> v(q_);
  for (std::uint32_t i = 0; i < q_; ++i) v[i] = Elem(i);
  return v;
}

std::vector<Elem> FieldSpec::nonzero_elements() const {
  std::vector<Elem> v(q_ - 1);
  for (std::uint32_t i = 1; i < q_; ++i) v[i - 1] = Elem(i);
  return v;
}

std::string FieldSpec::header() const {
  std::ostringstream os;
  os << "q=" << q_ << " p=" << p_ << " k=" << k_ << " modulus=";
  for (size_t i = 0; i < modulus_.size(); ++i) {
    if (i) os << ",";
    os << modulus_[i];
  }
  return os.str();
}

FieldSpec FieldSpec::from_header(const std::string& header, std::uint32_t bound) {
  std::istringstream is(header);
  std::string tok;
  std::uint32_t q = 0, p = 0, k = 0;
  std::vector<Elem> mod;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad field header: " + header);
    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "q") q = std::uint32_t(std::stoul(val));
    else if (key == "p") p = std::uint32_t(std::stoul(val));
    else if (key == "k") k = std::uint32_t(std::stoul(val));
    else if (key == "modulus") {
      std::istringstream ms(val);
      std::string digit;
      while (std::getline(ms, digit, ',')) mod.push_back(Elem(std::stoul(digit)));
    } else {
      throw std::invalid_argument("unknown field header key: " + key);
    }
  }
  if (p == 0 || k == 0) throw std::invalid_argument("incomplete field header: " + header);
  FieldSpec f = build(p, k, mod.empty() ? std::nullopt : std::optional(mod), bound);
  if (f.q() != q) throw std::invalid_argument("field header q mismatch");
  return f;
}

}  // namespace qvf::gf
