#include "qvf/search.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qvf/small_tables.hpp"

namespace qvf::search {

using detail::SmallTables;
using shapes::ScalingElement;
using shapes::Slot;
using shapes::SlotKind;
using shapes::SlotStatus;

namespace {

constexpr std::uint32_t kTableBound = detail::kSmallTableBound;

// Shared view of the enumeration problem: which slots are fixed, which a-slot
// tuples to visit, which b/c slots are free.
struct EnumPlan {
  const ShapeTemplate* tmpl = nullptr;
  std::vector<int> a_slots;              // template indices of the a-slots
  std::vector<int> free_a;               // subset of a_slots with Free status
  std::vector<int> free_bc;              // free b/c slot indices, canonical order
  std::vector<std::vector<Elem>> a_tuples;  // values for all a-slots, in order
  bool orbit = false;
  int orbit_count = 0;

  // shard unit: a-tuple index, refined by the first free b/c slot value when
  // at least three of them exist (so both engines slice identically)
  std::uint32_t shard_stride_q = 1;
};

EnumPlan make_plan(const FieldSpec& F, const ShapeTemplate& tmpl,
                   Normalization normalization) {
  EnumPlan plan;
  plan.tmpl = &tmpl;
  for (size_t i = 0; i < tmpl.slots.size(); ++i) {
    const Slot& s = tmpl.slots[i];
    if (s.kind == SlotKind::A) {
      plan.a_slots.push_back(int(i));
      if (s.status == SlotStatus::Free) plan.free_a.push_back(int(i));
    } else if (s.status == SlotStatus::Free) {
      plan.free_bc.push_back(int(i));
    }
  }

  if (normalization == Normalization::Orbit) {
    if (plan.free_a.size() != plan.a_slots.size())
      throw std::invalid_argument("orbit normalization needs all a-slots free");
    plan.orbit = true;
    std::vector<Slot> a_slot_objs;
    for (int i : plan.a_slots) a_slot_objs.push_back(tmpl.slots[i]);
    shapes::ScalingOrbits orbits(F, a_slot_objs, tmpl.m);
    plan.a_tuples = orbits.representatives();
    plan.orbit_count = int(plan.a_tuples.size());
  } else {
    // odometer over the free a-slots (nonzero values), pinned ones fixed
    std::vector<Elem> base(plan.a_slots.size());
    std::vector<size_t> free_pos;
    for (size_t i = 0; i < plan.a_slots.size(); ++i) {
      const Slot& s = tmpl.slots[plan.a_slots[i]];
      if (s.status == SlotStatus::Pinned)
        base[i] = s.pin;
      else
        free_pos.push_back(i);
    }
    std::vector<std::uint32_t> odo(free_pos.size(), 1);
    while (true) {
      for (size_t i = 0; i < free_pos.size(); ++i) base[free_pos[i]] = Elem(odo[i]);
      plan.a_tuples.push_back(base);
      if (free_pos.empty()) break;
      int i = int(free_pos.size()) - 1;
      while (i >= 0 && ++odo[i] == F.q()) odo[i--] = 1;
      if (i < 0) break;
    }
  }
  plan.shard_stride_q = plan.free_bc.size() >= 3 ? F.q() : 1;
  return plan;
}

bool in_shard(const EnumPlan& plan, ShardSpec shard, std::size_t a_idx,
              std::uint32_t first_bc_value) {
  std::uint64_t unit = std::uint64_t(a_idx) * plan.shard_stride_q +
                       (plan.shard_stride_q > 1 ? first_bc_value : 0);
  return unit % shard.count == shard.index;
}

// full assignment (free slots, canonical order) from the pieces
std::vector<Elem> record_assignment(const EnumPlan& plan,
                                    const std::vector<Elem>& a_tuple,
                                    const std::vector<Elem>& bc_values) {
  std::vector<Elem> out;
  size_t bc = 0, a = 0;
  for (size_t i = 0; i < plan.tmpl->slots.size(); ++i) {
    const Slot& s = plan.tmpl->slots[i];
    if (s.kind == SlotKind::A) {
      Elem v = a_tuple[a++];
      if (s.status == SlotStatus::Free) out.push_back(v);
    } else if (s.status == SlotStatus::Free) {
      out.push_back(bc_values[bc++]);
    }
  }
  return out;
}

SurvivorRecord make_record(const FieldSpec& F, const ShapeTemplate& tmpl,
                           std::vector<Elem> assignment) {
  forms::Form f = shapes::instantiate(tmpl, assignment, F);
  forms::ZeroCensus census = forms::count_projective_zeros(f, true);
  if (census.nonsingular != 0)
    throw std::logic_error("survivor candidate re-census found a non-singular zero");
  SurvivorRecord rec;
  rec.assignment = std::move(assignment);
  rec.zero_total = census.total;
  rec.zero_points = std::move(census.witnesses);
  return rec;
}

// ---------------------------------------------------------------------------
// fast ternary engine: interior projective points (1, y, z) with y, z != 0
// carry every template monomial with a nonzero value, so the two innermost
// free slots can be solved for analytically per point. Boundary points never
// discriminate: points with one zero coordinate evaluate to a nonzero a-term,
// and the unit points are singular zeros of every member of the family.
// ---------------------------------------------------------------------------
void run_fast_ternary(const FieldSpec& F, const EnumPlan& plan, ShardSpec shard,
                      SurvivorDB& db) {
  const ShapeTemplate& tmpl = *plan.tmpl;
  const std::uint32_t q = F.q();
  SmallTables T(F);

  // interior points and per-slot monomial/gradient value tables
  struct PointData {
    forms::Coords coords;
  };
  std::vector<forms::Coords> pts;
  for (std::uint32_t y = 1; y < q; ++y)
    for (std::uint32_t z = 1; z < q; ++z)
      pts.push_back({1, Elem(y), Elem(z)});
  const std::size_t np = pts.size();

  const std::size_t ns = tmpl.slots.size();
  // sv[s][P], sg[s][i][P]
  std::vector<std::vector<std::uint8_t>> sv(ns, std::vector<std::uint8_t>(np));
  std::vector<std::array<std::vector<std::uint8_t>, 3>> sg(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    forms::Exponents e = tmpl.slots[s].exponents();
    forms::Form mono = forms::Form::from_terms(F, 3, 5, {{e, 1}});
    std::array<forms::Form, 3> dmono = {forms::partial_derivative(mono, 0),
                                        forms::partial_derivative(mono, 1),
                                        forms::partial_derivative(mono, 2)};
    for (int i = 0; i < 3; ++i) sg[s][i].resize(np);
    for (std::size_t P = 0; P < np; ++P) {
      sv[s][P] = std::uint8_t(forms::evaluate(mono, pts[P]));
      for (int i = 0; i < 3; ++i)
        sg[s][i][P] = std::uint8_t(forms::evaluate(dmono[i], pts[P]));
    }
  }

  const int nb = int(plan.free_bc.size());
  const int s5 = plan.free_bc[nb - 2], s6 = plan.free_bc[nb - 1];
  const int nouter = nb - 2;

  // fixed contribution of pinned b/c slots (a-slots handled per tuple)
  std::vector<std::uint8_t> pin_v(np, 0);
  std::array<std::vector<std::uint8_t>, 3> pin_g;
  for (int i = 0; i < 3; ++i) pin_g[i].assign(np, 0);
  for (std::size_t s = 0; s < ns; ++s) {
    const Slot& slot = tmpl.slots[s];
    if (slot.kind == SlotKind::A || slot.status != SlotStatus::Pinned) continue;
    for (std::size_t P = 0; P < np; ++P) {
      pin_v[P] = T.ad(pin_v[P], T.ml(std::uint8_t(slot.pin), sv[s][P]));
      for (int i = 0; i < 3; ++i)
        pin_g[i][P] = T.ad(pin_g[i][P], T.ml(std::uint8_t(slot.pin), sg[s][i][P]));
    }
  }

  std::vector<std::uint8_t> abase(np);
  std::array<std::vector<std::uint8_t>, 3> agrad;
  for (int i = 0; i < 3; ++i) agrad[i].resize(np);

  std::vector<std::uint8_t> alive(std::size_t(q) * q);
  std::vector<Elem> bc_values(nb);
  std::vector<std::uint32_t> outer(nouter, 0);

  for (std::size_t a_idx = 0; a_idx < plan.a_tuples.size(); ++a_idx) {
    const std::vector<Elem>& a_tuple = plan.a_tuples[a_idx];
    if (plan.shard_stride_q == 1 && !in_shard(plan, shard, a_idx, 0)) continue;

    // base value/gradient of the fixed part (a-slots + pinned slots)
    for (std::size_t P = 0; P < np; ++P) {
      std::uint8_t v = pin_v[P];
      std::array<std::uint8_t, 3> g = {pin_g[0][P], pin_g[1][P], pin_g[2][P]};
      for (size_t a = 0; a < plan.a_slots.size(); ++a) {
        std::uint8_t c = std::uint8_t(a_tuple[a]);
        int s = plan.a_slots[a];
        v = T.ad(v, T.ml(c, sv[s][P]));
        for (int i = 0; i < 3; ++i) g[i] = T.ad(g[i], T.ml(c, sg[s][i][P]));
      }
      abase[P] = v;
      for (int i = 0; i < 3; ++i) agrad[i][P] = g[i];
    }

    std::fill(outer.begin(), outer.end(), 0);
    while (true) {
      if (nouter == 0 || in_shard(plan, shard, a_idx, outer[0])) {
        std::fill(alive.begin(), alive.end(), 1);
        std::uint32_t remaining = q * q;

        for (std::size_t P = 0; P < np && remaining; ++P) {
          std::uint8_t b = abase[P];
          std::uint8_t gb0 = agrad[0][P], gb1 = agrad[1][P], gb2 = agrad[2][P];
          for (int o = 0; o < nouter; ++o) {
            std::uint8_t v = std::uint8_t(outer[o]);
            int s = plan.free_bc[o];
            b = T.ad(b, T.ml(v, sv[s][P]));
            gb0 = T.ad(gb0, T.ml(v, sg[s][0][P]));
            gb1 = T.ad(gb1, T.ml(v, sg[s][1][P]));
            gb2 = T.ad(gb2, T.ml(v, sg[s][2][P]));
          }
          const std::uint8_t m5 = sv[s5][P], m6 = sv[s6][P];
          const std::uint8_t im6 = T.inv[m6];
          const std::uint8_t slope = T.ml(m5, im6);
          const std::uint8_t v6_0 = T.ml(T.neg[b], im6);
          // gradient along the zero line, affine in v5: A_i + v5 * B_i
          std::uint8_t A[3], B[3];
          const std::uint8_t gm5[3] = {sg[s5][0][P], sg[s5][1][P], sg[s5][2][P]};
          const std::uint8_t gm6[3] = {sg[s6][0][P], sg[s6][1][P], sg[s6][2][P]};
          const std::uint8_t gb[3] = {gb0, gb1, gb2};
          for (int i = 0; i < 3; ++i) {
            A[i] = T.ad(gb[i], T.ml(v6_0, gm6[i]));
            B[i] = T.sb(gm5[i], T.ml(slope, gm6[i]));
          }
          // v5 values where the zero on the line is singular: none, one, or all
          std::uint32_t skip = q;  // sentinel: no singular v5
          bool clear_nothing = false;
          int pivot = -1;
          for (int i = 0; i < 3; ++i)
            if (B[i] != 0) {
              pivot = i;
              break;
            }
          if (pivot < 0) {
            if (A[0] == 0 && A[1] == 0 && A[2] == 0) clear_nothing = true;
          } else {
            std::uint8_t v5x = T.ml(T.neg[A[pivot]], T.inv[B[pivot]]);
            bool consistent = true;
            for (int i = 0; i < 3; ++i)
              if (T.ad(A[i], T.ml(v5x, B[i])) != 0) {
                consistent = false;
                break;
              }
            if (consistent) skip = v5x;
          }
          if (clear_nothing) continue;
          for (std::uint32_t v5 = 0; v5 < q; ++v5) {
            if (v5 == skip) continue;
            std::uint8_t v6 = T.sb(v6_0, T.ml(std::uint8_t(v5), slope));
            std::uint8_t& cell = alive[v5 * q + v6];
            if (cell) {
              cell = 0;
              --remaining;
            }
          }
        }

        if (remaining) {
          for (std::uint32_t v5 = 0; v5 < q; ++v5)
            for (std::uint32_t v6 = 0; v6 < q; ++v6) {
              if (!alive[v5 * q + v6]) continue;
              for (int o = 0; o < nouter; ++o) bc_values[o] = Elem(outer[o]);
              bc_values[nb - 2] = Elem(v5);
              bc_values[nb - 1] = Elem(v6);
              db.records.push_back(
                  make_record(F, tmpl, record_assignment(plan, a_tuple, bc_values)));
            }
        }
      }
      if (nouter == 0) break;
      int i = nouter - 1;
      while (i >= 0 && ++outer[i] == q) outer[i--] = 0;
      if (i < 0) break;
    }
  }
}

void run_naive(const FieldSpec& F, const EnumPlan& plan, ShardSpec shard,
               SurvivorDB& db) {
  const ShapeTemplate& tmpl = *plan.tmpl;
  const std::uint32_t q = F.q();
  const int nb = int(plan.free_bc.size());
  std::vector<std::uint32_t> odo(nb, 0);
  std::vector<Elem> bc_values(nb);

  for (std::size_t a_idx = 0; a_idx < plan.a_tuples.size(); ++a_idx) {
    const std::vector<Elem>& a_tuple = plan.a_tuples[a_idx];
    std::fill(odo.begin(), odo.end(), 0);
    while (true) {
      if (in_shard(plan, shard, a_idx, nb > 0 ? odo[0] : 0)) {
        for (int i = 0; i < nb; ++i) bc_values[i] = Elem(odo[i]);
        std::vector<Elem> assignment = record_assignment(plan, a_tuple, bc_values);
        forms::Form f = shapes::instantiate(tmpl, assignment, F);
        if (!forms::find_nonsingular_zero(f))
          db.records.push_back(make_record(F, tmpl, std::move(assignment)));
      }
      if (nb == 0) break;
      int i = nb - 1;
      while (i >= 0 && ++odo[i] == q) odo[i--] = 0;
      if (i < 0) break;
    }
  }
}

}  // namespace

SurvivorDB enumerate_survivors(const FieldSpec& F, const ShapeTemplate& tmpl,
                               Normalization normalization, ShardSpec shard,
                               EngineMode mode) {
  if (shard.count < 1 || shard.index >= shard.count)
    throw std::invalid_argument("invalid shard spec");
  EnumPlan plan = make_plan(F, tmpl, normalization);

  SurvivorDB db;
  db.field_header = F.header();
  db.template_descriptor = tmpl.descriptor();
  db.normalization = normalization;
  db.shards_done = 1;
  db.shards_total = shard.count;
  db.complete = shard.count == 1;

  bool fast_capable = tmpl.m == 3 && plan.free_bc.size() >= 2 && F.q() <= kTableBound;
  if (mode == EngineMode::Fast && fast_capable)
    run_fast_ternary(F, plan, shard, db);
  else
    run_naive(F, plan, shard, db);
  return db;
}

SurvivorDB merge_shards(const std::vector<SurvivorDB>& parts) {
  if (parts.empty()) throw std::invalid_argument("nothing to merge");
  SurvivorDB out = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) {
    const SurvivorDB& p = parts[i];
    if (p.field_header != out.field_header ||
        p.template_descriptor != out.template_descriptor ||
        p.normalization != out.normalization || p.shards_total != out.shards_total)
      throw std::invalid_argument("shard header mismatch");
    out.shards_done += p.shards_done;
    out.records.insert(out.records.end(), p.records.begin(), p.records.end());
  }
  std::sort(out.records.begin(), out.records.end(),
            [](const SurvivorRecord& a, const SurvivorRecord& b) {
              return a.assignment < b.assignment;
            });
  for (size_t i = 1; i < out.records.size(); ++i)
    if (out.records[i].assignment == out.records[i - 1].assignment)
      throw std::invalid_argument("duplicate record across shards");
  out.complete = out.shards_done == out.shards_total;
  return out;
}

SurvivorDB expand_orbit_survivors(const SurvivorDB& orbit_db, const FieldSpec& F,
                                  const ShapeTemplate& target) {
  if (!orbit_db.complete) throw std::invalid_argument("orbit DB incomplete");
  if (orbit_db.normalization != Normalization::Orbit)
    throw std::invalid_argument("source DB is not orbit-normalized");
  if (target.m != 3) throw std::invalid_argument("target must be ternary");

  ShapeTemplate source = shapes::template_from_descriptor(orbit_db.template_descriptor, F);
  shapes::TripleClass cls = shapes::classify_triple(target.tournament, {0, 1, 2});
  shapes::TripleClass src_cls = shapes::classify_triple(source.tournament, {0, 1, 2});
  if (cls.shape != src_cls.shape)
    throw std::invalid_argument("tournament shape mismatch between DBs");

  // canonical variable c of the source maps to target variable perm[c]
  const std::array<int, 3>& perm = cls.canon_to_orig;

  // source slot -> target slot through the variable relabeling
  std::vector<int> slot_map(source.slots.size(), -1);
  for (size_t s = 0; s < source.slots.size(); ++s) {
    forms::Exponents e = source.slots[s].exponents();
    forms::Exponents te{};
    for (int c = 0; c < 3; ++c) te[perm[c]] = e[c];
    for (size_t t = 0; t < target.slots.size(); ++t)
      if (target.slots[t].exponents() == te) slot_map[s] = int(t);
    if (slot_map[s] < 0)
      throw std::invalid_argument("target template lacks a slot of the source shape");
  }

  std::vector<Elem> nz = F.nonzero_elements();
  std::set<std::vector<Elem>> seen;
  SurvivorDB out;
  out.field_header = F.header();
  out.template_descriptor = target.descriptor();
  out.normalization = Normalization::Pinned;

  std::vector<int> src_free = source.free_slots();
  for (const SurvivorRecord& rec : orbit_db.records) {
    if (rec.assignment.size() != src_free.size())
      throw std::invalid_argument("record arity mismatch");
    // values per target slot, before scaling
    std::vector<Elem> tv(target.slots.size(), 0);
    for (size_t i = 0; i < src_free.size(); ++i)
      tv[slot_map[src_free[i]]] = rec.assignment[i];

    ScalingElement g;
    for (Elem c : nz) {
      g.c = c;
      for (Elem l0 : nz) {
        g.lambda[0] = l0;
        for (Elem l1 : nz) {
          g.lambda[1] = l1;
          for (Elem l2 : nz) {
            g.lambda[2] = l2;
            bool ok = true;
            std::vector<Elem> assignment;
            for (size_t t = 0; t < target.slots.size() && ok; ++t) {
              const Slot& slot = target.slots[t];
              Elem v = tv[t] == 0
                           ? Elem(0)
                           : F.mul(tv[t], shapes::scaling_factor(F, g, slot.exponents()));
              switch (slot.status) {
                case SlotStatus::Pinned:
                  if (v != slot.pin) ok = false;
                  break;
                case SlotStatus::Zero:
                  if (v != 0) ok = false;
                  break;
                case SlotStatus::Free:
                  assignment.push_back(v);
                  break;
              }
            }
            if (ok && seen.insert(assignment).second)
              out.records.push_back(make_record(F, target, assignment));
          }
        }
      }
    }
  }
  std::sort(out.records.begin(), out.records.end(),
            [](const SurvivorRecord& a, const SurvivorRecord& b) {
              return a.assignment < b.assignment;
            });
  return out;
}

bool survivor_lemma5_audit(const SurvivorDB& db, const FieldSpec& F) {
  ShapeTemplate tmpl = shapes::template_from_descriptor(db.template_descriptor, F);
  for (const SurvivorRecord& rec : db.records) {
    forms::Form f = shapes::instantiate(tmpl, rec.assignment, F);
    forms::ZeroCensus census = forms::count_projective_zeros(f, true);
    if (census.nonsingular != 0 || census.total != rec.zero_total) return false;
    if (census.witnesses != rec.zero_points) return false;
    for (size_t i = 0; i < rec.zero_points.size(); ++i)
      for (size_t j = i + 1; j < rec.zero_points.size(); ++j) {
        forms::Lemma5Verdict v =
            forms::lemma5_shape_check(f, rec.zero_points[i], rec.zero_points[j]);
        if (!v.shape_ok) return false;
        // a line through two zeros stays outside Z(f) unless the whole
        // restriction vanishes
        if (v.c12 == 0 && v.c21 == 0) {
          std::array<forms::Coords, 2> basis = {rec.zero_points[i].coords,
                                                rec.zero_points[j].coords};
          if (!forms::restrict(f, basis).is_zero()) return false;
        }
      }
  }
  return true;
}

namespace {

std::string claim_for_q(std::uint32_t q) {
  if (q >= 17) return "no survivors";
  if (q >= 11) return "every survivor has exactly 3 zeros";
  return "every survivor has at most 4 zeros";
}

}  // namespace

Lemma8Report verify_lemma8(const FieldSpec& F, ShardSpec shard, EngineMode mode) {
  if (F.q() < 5) throw std::invalid_argument("verify_lemma8 requires q >= 5");
  auto t0 = std::chrono::steady_clock::now();
  Lemma8Report report;
  report.q = F.q();
  report.claim = claim_for_q(F.q());
  report.shard = shard;

  for (shapes::TripleShape shape :
       {shapes::TripleShape::Transitive, shapes::TripleShape::Cyclic}) {
    ShapeTemplate tmpl = shapes::ternary_template(shape, {}, F);
    auto s0 = std::chrono::steady_clock::now();
    ShapeOutcome outcome;
    outcome.shape = tmpl.shape_name;
    outcome.db = enumerate_survivors(F, tmpl, Normalization::Orbit, shard, mode);
    EnumPlan plan = make_plan(F, tmpl, Normalization::Orbit);
    outcome.orbit_count = plan.orbit_count;
    std::uint64_t bc_space = 1;
    for (size_t i = 0; i < plan.free_bc.size(); ++i) bc_space *= F.q();
    outcome.forms_scanned = std::uint64_t(plan.a_tuples.size()) * bc_space / shard.count;
    outcome.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - s0).count();
    for (const SurvivorRecord& r : outcome.db.records) {
      ++report.zero_histogram[r.zero_total];
      ++report.survivor_count;
    }
    report.outcomes.push_back(std::move(outcome));
  }

  bool ok = true;
  for (const auto& [zeros, count] : report.zero_histogram) {
    if (F.q() >= 17)
      ok = false;  // any survivor violates the claim
    else if (F.q() >= 11)
      ok = ok && zeros == 3;
    else
      ok = ok && zeros <= 4;
  }
  report.pass = ok;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

// ---------------------------------------------------------------------------
// persistence
// ---------------------------------------------------------------------------

std::string SurvivorDB::serialize() const {
  std::ostringstream os;
  os << "# qvf-survivors v1\n";
  os << field_header << "\n";
  os << template_descriptor << "\n";
  os << "normalization=" << (normalization == Normalization::Orbit ? "orbit" : "pinned")
     << "\n";
  os << "shards=" << shards_done << "/" << shards_total << "\n";
  for (const SurvivorRecord& r : records) {
    os << "assignment=";
    for (size_t i = 0; i < r.assignment.size(); ++i) {
      if (i) os << ",";
      os << r.assignment[i];
    }
    os << " zeros=" << r.zero_total << " points=";
    for (size_t i = 0; i < r.zero_points.size(); ++i) {
      if (i) os << ";";
      for (int c = 0; c < r.zero_points[i].n; ++c) {
        if (c) os << ",";
        os << r.zero_points[i].coords[c];
      }
    }
    os << "\n";
  }
  if (complete) os << "# complete\n";
  return os.str();
}

SurvivorDB SurvivorDB::parse(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "# qvf-survivors v1")
    throw std::invalid_argument("bad survivor DB magic");
  SurvivorDB db;
  db.complete = false;
  if (!std::getline(is, db.field_header)) throw std::invalid_argument("missing field header");
  if (!std::getline(is, db.template_descriptor))
    throw std::invalid_argument("missing template descriptor");
  if (!std::getline(is, line) || line.rfind("normalization=", 0) != 0)
    throw std::invalid_argument("missing normalization");
  std::string norm = line.substr(14);
  if (norm == "orbit")
    db.normalization = Normalization::Orbit;
  else if (norm == "pinned")
    db.normalization = Normalization::Pinned;
  else
    throw std::invalid_argument("bad normalization: " + norm);
  if (!std::getline(is, line) || line.rfind("shards=", 0) != 0)
    throw std::invalid_argument("missing shard layout");
  if (sscanf(line.c_str(), "shards=%u/%u", &db.shards_done, &db.shards_total) != 2)
    throw std::invalid_argument("bad shard layout: " + line);

  // record dimension comes from the field header, needed to size points
  FieldSpec F = FieldSpec::from_header(db.field_header);
  (void)F;

  while (std::getline(is, line)) {
    if (line == "# complete") {
      db.complete = true;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    SurvivorRecord rec;
    std::string points_str;
    while (ls >> tok) {
      if (tok.rfind("assignment=", 0) == 0) {
        std::istringstream vs(tok.substr(11));
        std::string v;
        while (std::getline(vs, v, ',')) rec.assignment.push_back(Elem(std::stoul(v)));
      } else if (tok.rfind("zeros=", 0) == 0) {
        rec.zero_total = std::stol(tok.substr(6));
      } else if (tok.rfind("points=", 0) == 0) {
        points_str = tok.substr(7);
      } else {
        throw std::invalid_argument("bad record token: " + tok);
      }
    }
    std::istringstream ps(points_str);
    std::string pt;
    while (std::getline(ps, pt, ';')) {
      ProjectivePoint p;
      std::istringstream cs(pt);
      std::string c;
      while (std::getline(cs, c, ',')) {
        if (p.n >= forms::kMaxVars) throw std::invalid_argument("point too long");
        p.coords[p.n++] = Elem(std::stoul(c));
      }
      rec.zero_points.push_back(p);
    }
    db.records.push_back(std::move(rec));
  }
  return db;
}

std::string Lemma8Report::to_json() const {
  nlohmann::json j;
  j["claim_id"] = "lemma8/q=" + std::to_string(q);
  j["q"] = q;
  j["claim"] = claim;
  j["survivor_count"] = survivor_count;
  j["verdict"] = pass ? "pass" : "fail";
  j["shards"] = std::to_string(shard.index) + "/" + std::to_string(shard.count);
  j["elapsed_seconds"] = seconds;
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [zeros, count] : zero_histogram)
    hist[std::to_string(zeros)] = count;
  j["zero_histogram"] = hist;
  for (const ShapeOutcome& o : outcomes) {
    nlohmann::json jo;
    jo["shape"] = o.shape;
    jo["survivors"] = o.db.records.size();
    jo["orbit_count"] = o.orbit_count;
    jo["forms_scanned"] = o.forms_scanned;
    jo["elapsed_seconds"] = o.seconds;
    j["shapes"].push_back(jo);
  }
  return j.dump(2);
}

}  // namespace qvf::search
