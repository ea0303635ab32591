#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qvf/forms.hpp"

namespace qvf::shapes {

using forms::Exponents;
using forms::Form;
using gf::Elem;
using gf::FieldSpec;

enum class TripleShape { Transitive, Cyclic };

// Direction pattern over the unordered pairs of {0..m-1}: direction i->j means
// the monomial x_i^3 x_j^2 is the (potentially) nonzero one of the pair.
struct Tournament {
  int m = 3;
  // forward[pair] == true: for the lex pair (i, j) with i < j the direction is
  // i->j; false: j->i. Pairs in lex order.
  std::array<bool, 6> forward{};

  static int pair_index(int i, int j, int m);
  int pair_count() const { return m * (m - 1) / 2; }
  // source and squared variable of the kept monomial for lex pair (i, j)
  std::pair<int, int> direction(int i, int j) const;
  bool operator==(const Tournament&) const = default;
};

// canonical t1 pattern: 0->1, 0->2, 1->2; t2 pattern: 0->1, 2->0, 1->2
Tournament canonical_ternary(TripleShape shape);

struct TripleClass {
  TripleShape shape;
  // canon_to_orig[c] = vertex of the triple sitting at canonical position c
  std::array<int, 3> canon_to_orig;
};

// Classification and relabeling of a 3-subset of a 4-vertex tournament onto
// the canonical t1/t2 pattern. For cyclic triples the rotation placing the
// smallest vertex at canonical position 0 is chosen.
TripleClass classify_triple(const Tournament& t, std::array<int, 3> triple);

enum class SlotStatus { Pinned, Free, Zero };
enum class SlotKind { A, B, C, D };

// One monomial slot of a shape family. Indices are 0-based:
//   A(i,j)     = x_i^3 x_j^2          B(i,j,k)   = x_i x_j x_k^3 (i<j)
//   C(i,j,k)   = x_i x_j^2 x_k^2 (j<k) D(i,j,k,l) = x_i x_j x_k x_l^2 (i<j<k)
struct Slot {
  SlotKind kind;
  std::array<int, 4> idx{-1, -1, -1, -1};
  SlotStatus status = SlotStatus::Free;
  Elem pin = 0;

  Exponents exponents() const;
  std::string name() const;  // 1-based external name, e.g. "a(1,2)"
  bool nonzero_domain() const { return kind == SlotKind::A; }
};

struct ShapeTemplate {
  int m = 3;
  Tournament tournament;
  std::string shape_name;  // t1, t2, g1..g4, custom
  std::vector<Slot> slots;  // canonical order: a (pair lex), then b, c, d

  std::vector<int> free_slots() const;
  // `shape=<name> pins=<slot:value,...> free=<slot,...>`
  std::string descriptor() const;
  // number of instantiations of the free slots
  std::uint64_t assignment_space(const FieldSpec& F) const;
};

// Ternary template for the given shape; pins map directed pairs (i, j) in the
// tournament direction to nonzero values. Throws on a pin against the
// direction pattern or a zero pin.
ShapeTemplate ternary_template(TripleShape shape,
                               const std::map<std::pair<int, int>, Elem>& pins,
                               const FieldSpec& F);

// The four quaternary families with the common tail h and the
// rescaling pins a(1,2)=1 (g1-g3) or a(2,1)=1 (g4), a(2,3)=1, a(3,4)=1.
ShapeTemplate g_template(int index, const FieldSpec& F);

// Template over an arbitrary tournament, every slot free. shape_name encodes
// the pattern ("custom<m>:<forward bits per lex pair>") so the descriptor
// round-trips.
ShapeTemplate custom_template(const Tournament& t);

// Reconstructs a t1/t2/g1..g4/custom template from its descriptor string.
ShapeTemplate template_from_descriptor(const std::string& descriptor,
                                       const FieldSpec& F);

// f(x) -> c * f(lambda_1 x_1, ..., lambda_m x_m)
struct ScalingElement {
  Elem c = 1;
  std::array<Elem, 4> lambda{1, 1, 1, 1};
};

Form apply_scaling(const Form& f, const ScalingElement& g);
// slot-wise coefficient scale factor of g on a slot monomial
Elem scaling_factor(const FieldSpec& F, const ScalingElement& g, const Exponents& e);

// Brute-force orbit decomposition of the nonzero a-coefficient tuples under
// the (q-1)^{m+1}-element scaling group.
class ScalingOrbits {
 public:
  ScalingOrbits(const FieldSpec& F, std::span<const Slot> a_slots, int m);

  // orbit representatives (lexicographically smallest member), sorted
  const std::vector<std::vector<Elem>>& representatives() const { return reps_; }
  int orbit_of(std::span<const Elem> tuple) const;
  // group element carrying `tuple` to its representative
  ScalingElement to_representative(std::span<const Elem> tuple) const;

 private:
  std::size_t tuple_index(std::span<const Elem> tuple) const;
  const FieldSpec* F_;
  int m_, s_;
  std::vector<std::vector<Elem>> reps_;
  std::vector<int> orbit_id_;
  std::vector<ScalingElement> to_rep_;
};

// Concrete form from the template plus values for its free slots, given in
// canonical slot order. Throws on a zero value for an a-slot.
Form instantiate(const ShapeTemplate& t, std::span<const Elem> free_values,
                 const FieldSpec& F);

}  // namespace qvf::shapes
