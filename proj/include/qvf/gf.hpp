#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qvf::gf {

// Canonical element encoding: e in [0, q), base-p digits of e are the
// coefficients of the polynomial representative (digit i = coefficient of x^i).
using Elem = std::uint16_t;

// Exact arithmetic in GF(p^k), table-backed. Immutable after construction and
// safe for unrestricted concurrent reads.
class FieldSpec {
 public:
  static constexpr std::uint32_t kDefaultBound = 4096;

  // Builds a validated field. If `modulus` is omitted and k > 1, the
  // lexicographically smallest monic irreducible degree-k polynomial over
  // GF(p) is selected (coefficients compared low-degree-first). The modulus is
  // given as k+1 digits, low degree first, leading digit 1.
  // Throws std::invalid_argument on composite p, reducible modulus or q > bound.
  static FieldSpec build(std::uint32_t p, std::uint32_t k,
                         std::optional<std::vector<Elem>> modulus = std::nullopt,
                         std::uint32_t bound = kDefaultBound);

  std::uint32_t p() const { return p_; }
  std::uint32_t k() const { return k_; }
  std::uint32_t q() const { return q_; }
  const std::vector<Elem>& modulus() const { return modulus_; }
  Elem generator() const { return generator_; }
  const std::vector<Elem>& exp_table() const { return exp_; }
  const std::vector<Elem>& log_table() const { return log_; }

  Elem add(Elem a, Elem b) const {
    if (p_ == 2) return a ^ b;
    if (k_ == 1) {
      std::uint32_t s = std::uint32_t(a) + b;
      return Elem(s >= q_ ? s - q_ : s);
    }
    return add_digits(a, b);
  }
  Elem neg(Elem a) const {
    if (p_ == 2) return a;
    if (k_ == 1) return Elem(a == 0 ? 0 : q_ - a);
    return neg_digits(a);
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    std::uint32_t s = std::uint32_t(log_[a]) + log_[b];
    if (s >= q_ - 1) s -= q_ - 1;
    return exp_[s];
  }
  // Throws std::domain_error on a == 0.
  Elem inv(Elem a) const;
  Elem pow(Elem a, std::uint64_t n) const;

  std::vector<Elem> elements() const;
  std::vector<Elem> nonzero_elements() const;

  // "q=<q> p=<p> k=<k> modulus=<digits low degree first>"
  std::string header() const;
  // Rebuilds a field from a header string; validates it.
  static FieldSpec from_header(const std::string& header,
                               std::uint32_t bound = kDefaultBound);

 private:
  FieldSpec() = default;
  Elem add_digits(Elem a, Elem b) const;
  Elem neg_digits(Elem a) const;

  std::uint32_t p_ = 0, k_ = 0, q_ = 0;
  std::vector<Elem> modulus_;
  Elem generator_ = 0;
  std::vector<Elem> exp_, log_;
};

}  // namespace qvf::gf
