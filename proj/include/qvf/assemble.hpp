#pragma once

#include <array>
#include <string>
#include <vector>

#include "qvf/search.hpp"

namespace qvf::assemble {

using forms::ProjectivePoint;
using gf::Elem;
using gf::FieldSpec;
using search::ShardSpec;
using search::SurvivorDB;
using search::SurvivorRecord;
using shapes::ShapeTemplate;

// Ternary template obtained from a quaternary one by setting the variable
// outside `triple` (ascending vertices) to zero and renumbering the rest
// order-preservingly to 0..2. Slot statuses carry over.
ShapeTemplate restrict_template(const ShapeTemplate& g, std::array<int, 3> triple);

// Survivors of one restricted ternary family, with each row's values lifted
// back to the quaternary slot indices it covers.
struct TripleArray {
  std::array<int, 3> triple;
  ShapeTemplate tmpl;  // restricted template, local variables 0..2
  SurvivorDB db;
  // row r, quaternary slot s (support within the triple) -> value; slots
  // outside the triple hold 0
  std::vector<std::vector<Elem>> slot_values;
  // local zero points of row r mapped to quaternary coordinates
  std::vector<std::vector<ProjectivePoint>> zero_points;
};

enum class ArrayMethod {
  Expand,  // rescale the orbit-normalized ternary survivor DB onto the pins
  Direct,  // re-enumerate the restricted family from scratch (oracle path)
};

// One array per 3-subset of {0..3} in ascending triple order. The orbit DBs
// must be complete runs of the canonical t1/t2 families over the same field.
std::array<TripleArray, 4> build_arrays(const FieldSpec& F, const ShapeTemplate& g,
                                        const SurvivorDB& t1_orbit,
                                        const SurvivorDB& t2_orbit,
                                        ArrayMethod method);

// Row quadruples (one row per array, ascending lex) that agree on every shared
// a-slot value. Each candidate pins all non-d coefficients of the family.
// A nonzero limit truncates the stream; the full join can be astronomically
// large for small q.
std::vector<std::array<int, 4>> join_candidates(const std::array<TripleArray, 4>& arrays,
                                                const ShapeTemplate& g,
                                                std::size_t limit = 0);

struct QuaternaryReport {
  std::uint32_t q = 0;
  std::string g_shape;
  std::array<std::size_t, 4> array_sizes{};
  std::uint64_t candidate_count = 0;      // join outputs enumerated this run
  std::uint64_t candidates_scanned = 0;   // subset in this shard slice
  bool exhausted = true;                  // false when a cap cut the stream short
  std::uint64_t dterm_space = 0;
  std::vector<SurvivorRecord> survivors;  // free-slot assignments of g
  std::vector<std::string> survivor_forms;  // same survivors, full form text
  bool pass = false;  // no survivors
  ShardSpec shard;
  double seconds = 0.0;

  std::string to_json() const;
};

// Full scan of one quaternary family: arrays, join, then the d-coefficient
// space of every candidate (shard slices by candidate index). Survivor records
// are re-censused against the complete projective point set and confirmed by
// audit_counterexample before the report is returned.
// stop_after_survivors > 0 ends the run once that many survivors are found;
// max_candidates > 0 bounds the join stream. Both are for counterexample
// hunting at small q; leave them 0 for a complete certificate.
// With reduce_join the free a-coefficients are normalized modulo the residual
// scaling subgroup fixing the pins, one representative per orbit; survivor
// existence is scaling-invariant, so the verdict is unchanged while the
// candidate stream shrinks by roughly (q-1)^2. Disable it to scan the raw
// join stream (the order join_candidates produces).
QuaternaryReport verify_quaternary(const FieldSpec& F, int g_index,
                                   const SurvivorDB& t1_orbit,
                                   const SurvivorDB& t2_orbit,
                                   ArrayMethod method = ArrayMethod::Expand,
                                   ShardSpec shard = {},
                                   std::uint64_t stop_after_survivors = 0,
                                   std::uint64_t max_candidates = 0,
                                   bool reduce_join = true);

// Independent confirmation of a survivor record by brute force over all
// nonzero affine points: no non-singular zero, and the affine zero count
// matches the recorded projective one.
bool audit_counterexample(const FieldSpec& F, const ShapeTemplate& g,
                          const SurvivorRecord& rec);

}  // namespace qvf::assemble
