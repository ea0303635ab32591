#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qvf/gf.hpp"

namespace qvf::detail {

inline constexpr std::uint32_t kSmallTableBound = 64;

// flat uint8 operation tables for small fields; the search inner loops run on
// these only
struct SmallTables {
  std::uint32_t q;
  std::vector<std::uint8_t> add, mul;  // q*q
  std::vector<std::uint8_t> neg, inv;  // q (inv[0] unused)

  explicit SmallTables(const gf::FieldSpec& F) : q(F.q()) {
    if (q > kSmallTableBound)
      throw std::invalid_argument("field too large for table engine");
    add.resize(q * q);
    mul.resize(q * q);
    neg.resize(q);
    inv.resize(q);
    for (std::uint32_t a = 0; a < q; ++a) {
      neg[a] = std::uint8_t(F.neg(gf::Elem(a)));
      if (a) inv[a] = std::uint8_t(F.inv(gf::Elem(a)));
      for (std::uint32_t b = 0; b < q; ++b) {
        add[a * q + b] = std::uint8_t(F.add(gf::Elem(a), gf::Elem(b)));
        mul[a * q + b] = std::uint8_t(F.mul(gf::Elem(a), gf::Elem(b)));
      }
    }
  }
  std::uint8_t ad(std::uint8_t a, std::uint8_t b) const { return add[a * q + b]; }
  std::uint8_t ml(std::uint8_t a, std::uint8_t b) const { return mul[a * q + b]; }
  std::uint8_t sb(std::uint8_t a, std::uint8_t b) const { return add[a * q + neg[b]]; }
};

}  // namespace qvf::detail
