#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qvf/shapes.hpp"

namespace qvf::search {

using forms::ProjectivePoint;
using gf::Elem;
using gf::FieldSpec;
using shapes::ShapeTemplate;

enum class Normalization { Orbit, Pinned };
enum class EngineMode { Fast, Naive };

struct ShardSpec {
  std::uint32_t index = 0;
  std::uint32_t count = 1;
};

// A form from the template's family with no non-singular zero, keyed by the
// values of the free slots in canonical slot order.
struct SurvivorRecord {
  std::vector<Elem> assignment;
  long zero_total = 0;
  std::vector<ProjectivePoint> zero_points;
  bool operator==(const SurvivorRecord&) const = default;
};

struct SurvivorDB {
  std::string field_header;
  std::string template_descriptor;
  Normalization normalization = Normalization::Pinned;
  std::uint32_t shards_done = 1;
  std::uint32_t shards_total = 1;
  bool complete = true;
  std::vector<SurvivorRecord> records;  // ascending by assignment tuple

  std::string serialize() const;
  static SurvivorDB parse(const std::string& text);
  bool operator==(const SurvivorDB&) const = default;
};

// Scans the template's free-slot assignment space in canonical lexicographic
// order (restricted to the shard slice) and records every instantiation with
// no non-singular zero, together with its full projective zero list. With
// Normalization::Orbit the a-slots must all be free and run over the
// lexicographically smallest scaling-orbit representatives instead of the full
// (q-1)^3 range. The fast engine and the naive one produce identical DBs.
SurvivorDB enumerate_survivors(const FieldSpec& F, const ShapeTemplate& tmpl,
                               Normalization normalization, ShardSpec shard = {},
                               EngineMode mode = EngineMode::Fast);

// Deterministic sorted union; headers must match. Marks the DB complete when
// every shard of the layout reported.
SurvivorDB merge_shards(const std::vector<SurvivorDB>& parts);

// Re-derives the survivor set of a pinned template from an orbit-normalized DB
// of the same (possibly relabeled) tournament shape: every scaling of every
// survivor that satisfies the target pins, deduped, re-censused and sorted.
SurvivorDB expand_orbit_survivors(const SurvivorDB& orbit_db, const FieldSpec& F,
                                  const ShapeTemplate& target);

// Checks every survivor pair of zeros against the Lemma-5 restriction shape:
// support within {x1^3 x2^2, x1^2 x2^3} with vanishing coefficient product,
// and no line through two zeros inside Z(f) unless the restriction vanishes.
bool survivor_lemma5_audit(const SurvivorDB& db, const FieldSpec& F);

struct ShapeOutcome {
  std::string shape;  // t1 or t2
  SurvivorDB db;
  std::uint64_t forms_scanned = 0;
  int orbit_count = 0;
  double seconds = 0.0;
};

struct Lemma8Report {
  std::uint32_t q = 0;
  std::string claim;  // the applied zero-count clause
  std::vector<ShapeOutcome> outcomes;
  std::map<long, long> zero_histogram;  // zero_total -> survivor count
  long survivor_count = 0;
  bool pass = false;
  ShardSpec shard;
  double seconds = 0.0;

  std::string to_json() const;
};

// Runs the ternary certificate for both shapes over all scaling-orbit
// representatives and checks the zero-count clause for q:
//   q >= 17: no survivors; 11 <= q < 17: every survivor has exactly 3 zeros;
//   q < 11:  every survivor has at most 4 zeros.
Lemma8Report verify_lemma8(const FieldSpec& F, ShardSpec shard = {},
                           EngineMode mode = EngineMode::Fast);

}  // namespace qvf::search
