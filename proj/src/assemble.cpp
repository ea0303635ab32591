#include "qvf/assemble.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qvf/form_io.hpp"
#include "qvf/small_tables.hpp"

namespace qvf::assemble {

using detail::SmallTables;
using forms::Coords;
using forms::Exponents;
using forms::Form;
using shapes::Slot;
using shapes::SlotKind;
using shapes::SlotStatus;
using shapes::Tournament;

namespace {

constexpr std::array<std::array<int, 3>, 4> kTriples = {
    {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};

// global slot exponents of a local (triple-variable) exponent vector
Exponents lift_exponents(const Exponents& local, const std::array<int, 3>& triple) {
  Exponents e{};
  for (int l = 0; l < 3; ++l) e[triple[l]] = local[l];
  return e;
}

int find_slot_by_exponents(const ShapeTemplate& g, const Exponents& e) {
  for (size_t s = 0; s < g.slots.size(); ++s)
    if (g.slots[s].exponents() == e) return int(s);
  return -1;
}

SurvivorRecord make_record(const FieldSpec& F, const ShapeTemplate& g,
                           std::vector<Elem> assignment) {
  Form f = shapes::instantiate(g, assignment, F);
  forms::ZeroCensus census = forms::count_projective_zeros(f, true);
  if (census.nonsingular != 0)
    throw std::logic_error("quaternary survivor re-census found a non-singular zero");
  SurvivorRecord rec;
  rec.assignment = std::move(assignment);
  rec.zero_total = census.total;
  rec.zero_points = std::move(census.witnesses);
  return rec;
}

// affine-constraint system over the d-coefficients: rows of (coeffs | rhs)
struct LinearSystem {
  int nvars = 0;
  std::vector<std::vector<Elem>> rows;  // each of size nvars + 1
};

struct SolutionSpace {
  bool feasible = false;
  std::vector<Elem> particular;
  std::vector<std::vector<Elem>> basis;  // null space vectors
};

SolutionSpace solve(const FieldSpec& F, LinearSystem sys) {
  const int n = sys.nvars;
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < n && rank < int(sys.rows.size()); ++col) {
    int pr = -1;
    for (int r = rank; r < int(sys.rows.size()); ++r)
      if (sys.rows[r][col] != 0) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    std::swap(sys.rows[rank], sys.rows[pr]);
    Elem inv = F.inv(sys.rows[rank][col]);
    for (int c = col; c <= n; ++c) sys.rows[rank][c] = F.mul(sys.rows[rank][c], inv);
    for (int r = 0; r < int(sys.rows.size()); ++r) {
      if (r == rank || sys.rows[r][col] == 0) continue;
      Elem factor = sys.rows[r][col];
      for (int c = col; c <= n; ++c)
        sys.rows[r][c] = F.sub(sys.rows[r][c], F.mul(factor, sys.rows[rank][c]));
    }
    pivot_col.push_back(col);
    ++rank;
  }
  SolutionSpace out;
  for (int r = rank; r < int(sys.rows.size()); ++r)
    if (sys.rows[r][n] != 0) return out;  // inconsistent
  out.feasible = true;
  out.particular.assign(n, 0);
  for (int r = 0; r < rank; ++r) out.particular[pivot_col[r]] = sys.rows[r][n];
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col) is_pivot[c] = true;
  for (int c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    std::vector<Elem> v(n, 0);
    v[c] = 1;
    for (int r = 0; r < rank; ++r)
      v[pivot_col[r]] = F.neg(sys.rows[r][c]);
    out.basis.push_back(std::move(v));
  }
  return out;
}

}  // namespace

ShapeTemplate restrict_template(const ShapeTemplate& g, std::array<int, 3> triple) {
  if (g.m != 4) throw std::invalid_argument("restriction starts from a quaternary template");
  std::sort(triple.begin(), triple.end());
  Tournament local;
  local.m = 3;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      auto [src, sq] = g.tournament.direction(triple[i], triple[j]);
      local.forward[Tournament::pair_index(i, j, 3)] = src == triple[i];
      (void)sq;
    }
  ShapeTemplate rt = shapes::custom_template(local);
  for (Slot& s : rt.slots) {
    int gs = find_slot_by_exponents(g, lift_exponents(s.exponents(), triple));
    if (gs < 0) throw std::logic_error("restricted slot missing from source template");
    s.status = g.slots[gs].status;
    s.pin = g.slots[gs].pin;
  }
  return rt;
}

std::array<TripleArray, 4> build_arrays(const FieldSpec& F, const ShapeTemplate& g,
                                        const SurvivorDB& t1_orbit,
                                        const SurvivorDB& t2_orbit,
                                        ArrayMethod method) {
  for (const SurvivorDB* db : {&t1_orbit, &t2_orbit}) {
    if (db->field_header != F.header())
      throw std::invalid_argument("orbit DB field mismatch");
    if (!db->complete) throw std::invalid_argument("orbit DB incomplete");
  }

  std::array<TripleArray, 4> arrays;
  for (int t = 0; t < 4; ++t) {
    TripleArray& arr = arrays[t];
    arr.triple = kTriples[t];
    arr.tmpl = restrict_template(g, arr.triple);
    shapes::TripleClass cls = shapes::classify_triple(g.tournament, arr.triple);
    const SurvivorDB& source =
        cls.shape == shapes::TripleShape::Transitive ? t1_orbit : t2_orbit;
    if (method == ArrayMethod::Expand)
      arr.db = search::expand_orbit_survivors(source, F, arr.tmpl);
    else
      arr.db = search::enumerate_survivors(F, arr.tmpl, search::Normalization::Pinned,
                                           {}, search::EngineMode::Fast);

    // lift each row back to quaternary slot indices and coordinates
    std::vector<int> slot_of_local(arr.tmpl.slots.size());
    for (size_t ls = 0; ls < arr.tmpl.slots.size(); ++ls) {
      slot_of_local[ls] = find_slot_by_exponents(
          g, lift_exponents(arr.tmpl.slots[ls].exponents(), arr.triple));
      if (slot_of_local[ls] < 0) throw std::logic_error("slot lift failed");
    }
    std::vector<int> free_local = arr.tmpl.free_slots();
    for (const SurvivorRecord& rec : arr.db.records) {
      std::vector<Elem> values(g.slots.size(), 0);
      for (size_t ls = 0; ls < arr.tmpl.slots.size(); ++ls) {
        const Slot& s = arr.tmpl.slots[ls];
        if (s.status == SlotStatus::Pinned) values[slot_of_local[ls]] = s.pin;
      }
      for (size_t i = 0; i < free_local.size(); ++i)
        values[slot_of_local[free_local[i]]] = rec.assignment[i];
      arr.slot_values.push_back(std::move(values));

      std::vector<ProjectivePoint> pts;
      for (const ProjectivePoint& zp : rec.zero_points) {
        ProjectivePoint p;
        p.n = 4;
        for (int l = 0; l < 3; ++l) p.coords[arr.triple[l]] = zp.coords[l];
        pts.push_back(p);
      }
      arr.zero_points.push_back(std::move(pts));
    }
  }
  return arrays;
}

namespace {

// streams consistent row quadruples in ascending lex order; the visitor
// returns false to stop
template <typename Visitor>
void for_each_candidate(const std::array<TripleArray, 4>& arrays,
                        const ShapeTemplate& g, Visitor&& visit) {
  auto aslot = [&](int i, int j) { return Tournament::pair_index(i, j, g.m); };
  const int a01 = aslot(0, 1), a02 = aslot(0, 2), a03 = aslot(0, 3);
  const int a12 = aslot(1, 2), a13 = aslot(1, 3), a23 = aslot(2, 3);

  // arrays fix: [0]={0,1,2} [1]={0,1,3} [2]={0,2,3} [3]={1,2,3}; each a-pair is
  // shared by exactly two of them
  std::map<Elem, std::vector<int>> h1;  // key: a(0,1)
  for (size_t r = 0; r < arrays[1].slot_values.size(); ++r)
    h1[arrays[1].slot_values[r][a01]].push_back(int(r));
  std::map<std::array<Elem, 2>, std::vector<int>> h2;  // key: a(0,2), a(0,3)
  for (size_t r = 0; r < arrays[2].slot_values.size(); ++r)
    h2[{arrays[2].slot_values[r][a02], arrays[2].slot_values[r][a03]}].push_back(int(r));
  std::map<std::array<Elem, 3>, std::vector<int>> h3;  // key: a(1,2), a(1,3), a(2,3)
  for (size_t r = 0; r < arrays[3].slot_values.size(); ++r)
    h3[{arrays[3].slot_values[r][a12], arrays[3].slot_values[r][a13],
        arrays[3].slot_values[r][a23]}]
        .push_back(int(r));

  for (size_t r0 = 0; r0 < arrays[0].slot_values.size(); ++r0) {
    const auto& v0 = arrays[0].slot_values[r0];
    auto it1 = h1.find(v0[a01]);
    if (it1 == h1.end()) continue;
    for (int r1 : it1->second) {
      const auto& v1 = arrays[1].slot_values[r1];
      auto it2 = h2.find({v0[a02], v1[a03]});
      if (it2 == h2.end()) continue;
      for (int r2 : it2->second) {
        auto it3 = h3.find({v0[a12], v1[a13], arrays[2].slot_values[r2][a23]});
        if (it3 == h3.end()) continue;
        for (int r3 : it3->second)
          if (!visit(std::array<int, 4>{int(r0), r1, r2, int(r3)})) return;
      }
    }
  }
}

// The three a-slot pins do not exhaust the scaling freedom: the subgroup
// fixing all pinned coefficients still acts on the remaining coefficients.
// Each element is recorded by its factor on every slot; duplicates (elements
// acting identically on all slots) are dropped.
std::vector<std::vector<Elem>> residual_subgroup(const FieldSpec& F,
                                                 const ShapeTemplate& g) {
  std::vector<Exponents> pinned_e;
  for (const Slot& s : g.slots)
    if (s.status == SlotStatus::Pinned) pinned_e.push_back(s.exponents());

  std::set<std::vector<Elem>> actions;
  std::vector<Elem> nz = F.nonzero_elements();
  shapes::ScalingElement h;
  for (Elem c : nz) {
    h.c = c;
    for (Elem l0 : nz) {
      h.lambda[0] = l0;
      for (Elem l1 : nz) {
        h.lambda[1] = l1;
        for (Elem l2 : nz) {
          h.lambda[2] = l2;
          for (Elem l3 : nz) {
            h.lambda[3] = l3;
            bool fixes = true;
            for (const Exponents& e : pinned_e)
              if (shapes::scaling_factor(F, h, e) != 1) {
                fixes = false;
                break;
              }
            if (!fixes) continue;
            std::vector<Elem> act;
            act.reserve(g.slots.size());
            for (const Slot& s : g.slots)
              act.push_back(shapes::scaling_factor(F, h, s.exponents()));
            actions.insert(std::move(act));
          }
        }
      }
    }
  }
  return {actions.begin(), actions.end()};
}

// lexicographically smallest representative per orbit of the free a-tuples
std::vector<std::array<Elem, 3>> free_a_orbit_reps(
    const FieldSpec& F, const std::vector<std::array<Elem, 3>>& actions) {
  const std::uint32_t n = F.q() - 1;
  auto index = [&](const std::array<Elem, 3>& t) {
    return (std::size_t(t[0]) - 1) * n * n + (std::size_t(t[1]) - 1) * n + t[2] - 1;
  };
  std::vector<bool> seen(n * n * n, false);
  std::vector<std::array<Elem, 3>> reps;
  std::vector<Elem> nz = F.nonzero_elements();
  for (Elem a : nz)
    for (Elem b : nz)
      for (Elem c : nz) {
        std::array<Elem, 3> t = {a, b, c};
        if (seen[index(t)]) continue;
        reps.push_back(t);
        for (const auto& act : actions) {
          std::array<Elem, 3> img = {F.mul(t[0], act[0]), F.mul(t[1], act[1]),
                                     F.mul(t[2], act[2])};
          seen[index(img)] = true;
        }
      }
  return reps;
}

// streams candidates reduced modulo the residual scaling subgroup: one
// representative free a-tuple per orbit, then, within each a-tuple, one row
// quadruple per orbit of the a-tuple stabilizer (which permutes the rows of
// each bucket). Every candidate of the raw join is equivalent, by a scaling
// fixing the pins, to exactly one streamed candidate.
template <typename Visitor>
void for_each_candidate_reduced(const FieldSpec& F,
                                const std::array<TripleArray, 4>& arrays,
                                const ShapeTemplate& g, Visitor&& visit) {
  std::array<int, 3> free_a{};
  int nf = 0;
  for (size_t s = 0; s < g.slots.size(); ++s)
    if (g.slots[s].kind == SlotKind::A && g.slots[s].status == SlotStatus::Free)
      free_a[nf++] = int(s);
  if (nf != 3) throw std::invalid_argument("expected three free a-slots");

  // bucket each array's rows by the values on the free a-slots it covers
  std::array<std::vector<int>, 4> covered;
  std::array<std::map<std::vector<Elem>, std::vector<int>>, 4> buckets;
  std::array<std::map<std::vector<Elem>, int>, 4> row_index;
  for (int t = 0; t < 4; ++t) {
    for (int fs = 0; fs < 3; ++fs) {
      const Slot& s = g.slots[free_a[fs]];
      bool in_triple = true;
      for (int c = 0; c < 4; ++c)
        if (s.exponents()[c] != 0 && c != arrays[t].triple[0] &&
            c != arrays[t].triple[1] && c != arrays[t].triple[2])
          in_triple = false;
      if (in_triple) covered[t].push_back(fs);
    }
    for (size_t r = 0; r < arrays[t].slot_values.size(); ++r) {
      std::vector<Elem> key;
      for (int fs : covered[t]) key.push_back(arrays[t].slot_values[r][free_a[fs]]);
      buckets[t][key].push_back(int(r));
      row_index[t][arrays[t].slot_values[r]] = int(r);
    }
  }

  std::vector<std::vector<Elem>> H = residual_subgroup(F, g);

  // orbit representatives of the free a-tuples under H
  std::set<std::array<Elem, 3>> action_triples;
  for (const auto& act : H)
    action_triples.insert({act[free_a[0]], act[free_a[1]], act[free_a[2]]});
  std::vector<std::array<Elem, 3>> reps = free_a_orbit_reps(
      F, {action_triples.begin(), action_triples.end()});

  // the a-tuple stabilizer acts on each array by permuting rows within a
  // bucket; identity actions are dropped
  std::vector<std::array<std::vector<int>, 4>> stab_perms;
  for (const auto& act : H) {
    if (act[free_a[0]] != 1 || act[free_a[1]] != 1 || act[free_a[2]] != 1) continue;
    bool identity = true;
    std::array<std::vector<int>, 4> perm;
    for (int t = 0; t < 4; ++t) {
      const auto& sv = arrays[t].slot_values;
      perm[t].resize(sv.size());
      for (size_t r = 0; r < sv.size(); ++r) {
        std::vector<Elem> img(sv[r].size(), 0);
        for (size_t s = 0; s < sv[r].size(); ++s)
          if (sv[r][s] != 0) img[s] = F.mul(sv[r][s], act[s]);
        auto it = row_index[t].find(img);
        if (it == row_index[t].end())
          throw std::logic_error("survivor array not closed under residual scaling");
        perm[t][r] = it->second;
        if (it->second != int(r)) identity = false;
      }
    }
    if (!identity) stab_perms.push_back(std::move(perm));
  }

  for (const auto& rep : reps) {
    std::array<const std::vector<int>*, 4> rows{};
    bool empty = false;
    for (int t = 0; t < 4; ++t) {
      std::vector<Elem> key;
      for (int fs : covered[t]) key.push_back(rep[fs]);
      auto it = buckets[t].find(key);
      if (it == buckets[t].end()) {
        empty = true;
        break;
      }
      rows[t] = &it->second;
    }
    if (empty) continue;
    for (int r0 : *rows[0])
      for (int r1 : *rows[1])
        for (int r2 : *rows[2])
          for (int r3 : *rows[3]) {
            std::array<int, 4> c{r0, r1, r2, r3};
            bool minimal = true;
            for (const auto& perm : stab_perms) {
              std::array<int, 4> img{perm[0][r0], perm[1][r1], perm[2][r2],
                                     perm[3][r3]};
              if (img < c) {
                minimal = false;
                break;
              }
            }
            if (minimal && !visit(c)) return;
          }
  }
}

}  // namespace

std::vector<std::array<int, 4>> join_candidates(const std::array<TripleArray, 4>& arrays,
                                                const ShapeTemplate& g,
                                                std::size_t limit) {
  std::vector<std::array<int, 4>> out;
  for_each_candidate(arrays, g, [&](const std::array<int, 4>& c) {
    out.push_back(c);
    return limit == 0 || out.size() < limit;
  });
  return out;
}

QuaternaryReport verify_quaternary(const FieldSpec& F, int g_index,
                                   const SurvivorDB& t1_orbit,
                                   const SurvivorDB& t2_orbit, ArrayMethod method,
                                   ShardSpec shard, std::uint64_t stop_after_survivors,
                                   std::uint64_t max_candidates, bool reduce_join) {
  if (shard.count < 1 || shard.index >= shard.count)
    throw std::invalid_argument("invalid shard spec");
  auto t0 = std::chrono::steady_clock::now();
  const std::uint32_t q = F.q();
  ShapeTemplate g = shapes::g_template(g_index, F);

  QuaternaryReport report;
  report.q = q;
  report.g_shape = g.shape_name;
  report.shard = shard;

  std::array<TripleArray, 4> arrays = build_arrays(F, g, t1_orbit, t2_orbit, method);
  for (int t = 0; t < 4; ++t) report.array_sizes[t] = arrays[t].db.records.size();

  // free d-slots, canonical (ascending) order
  std::vector<int> dslots;
  for (size_t s = 0; s < g.slots.size(); ++s)
    if (g.slots[s].kind == SlotKind::D && g.slots[s].status == SlotStatus::Free)
      dslots.push_back(int(s));
  if (dslots.size() != 4) throw std::invalid_argument("expected four free d-slots");
  report.dterm_space = std::uint64_t(q) * q * q * q;

  SmallTables T(F);
  std::vector<Coords> pts;  // interior points (1, y, z, w)
  for (std::uint32_t y = 1; y < q; ++y)
    for (std::uint32_t z = 1; z < q; ++z)
      for (std::uint32_t w = 1; w < q; ++w) pts.push_back({1, Elem(y), Elem(z), Elem(w)});
  const std::size_t np = pts.size();

  const std::size_t ns = g.slots.size();
  std::vector<Form> slot_mono, slot_partial[4];
  std::vector<std::vector<std::uint8_t>> sv(ns, std::vector<std::uint8_t>(np));
  std::vector<std::array<std::vector<std::uint8_t>, 4>> sg(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    Form mono = Form::from_terms(F, 4, 5, {{g.slots[s].exponents(), 1}});
    slot_mono.push_back(mono);
    for (int i = 0; i < 4; ++i) {
      slot_partial[i].push_back(forms::partial_derivative(mono, i));
      sg[s][i].resize(np);
    }
    for (std::size_t P = 0; P < np; ++P) {
      sv[s][P] = std::uint8_t(forms::evaluate(mono, pts[P]));
      for (int i = 0; i < 4; ++i)
        sg[s][i][P] = std::uint8_t(forms::evaluate(slot_partial[i][s], pts[P]));
    }
  }

  // per-point constants of the two analytic d-slots: the zero line in the
  // (v5, v6)-plane has candidate-independent slope, and the gradient direction
  // along it is candidate-independent too
  const int s5 = dslots[2], s6 = dslots[3];
  std::vector<std::uint8_t> im6(np), slope(np);
  std::array<std::vector<std::uint8_t>, 4> Bv;
  for (int i = 0; i < 4; ++i) Bv[i].resize(np);
  std::vector<std::int8_t> pivB(np);
  std::vector<std::uint8_t> ipivB(np);
  for (std::size_t P = 0; P < np; ++P) {
    im6[P] = T.inv[sv[s6][P]];
    slope[P] = T.ml(sv[s5][P], im6[P]);
    pivB[P] = -1;
    ipivB[P] = 0;
    for (int i = 0; i < 4; ++i) {
      Bv[i][P] = T.sb(sg[s5][i][P], T.ml(slope[P], sg[s6][i][P]));
      if (Bv[i][P] != 0 && pivB[P] < 0) {
        pivB[P] = std::int8_t(i);
        ipivB[P] = T.inv[Bv[i][P]];
      }
    }
  }

  // bitset line masks: for each point and intercept v6_0, the q cells
  // (v5, v6_0 - v5 * slope) of the zero line in the (v5, v6)-plane
  const int W = int((std::size_t(q) * q + 63) / 64);
  std::vector<std::uint64_t> linemask(np * q * W, 0);
  for (std::size_t P = 0; P < np; ++P)
    for (std::uint32_t v60 = 0; v60 < q; ++v60) {
      std::uint64_t* m = &linemask[(P * q + v60) * W];
      for (std::uint32_t v5 = 0; v5 < q; ++v5) {
        std::uint32_t bit = v5 * q + T.sb(std::uint8_t(v60), T.ml(std::uint8_t(v5), slope[P]));
        m[bit >> 6] |= std::uint64_t(1) << (bit & 63);
      }
    }

  // slots a candidate fixes: everything except the free d-slots
  std::vector<int> fixed_slots;
  for (size_t s = 0; s < ns; ++s)
    if (g.slots[s].kind != SlotKind::D || g.slots[s].status != SlotStatus::Free)
      fixed_slots.push_back(int(s));

  // per-row value and gradient contributions at every interior point, so a
  // candidate's base data is a four-way add instead of a 30-slot sum. Each
  // fixed slot is charged to the first array whose triple covers it (shared
  // a-slots agree across arrays by the join, so once is enough).
  std::array<std::vector<int>, 4> owned;
  for (int s : fixed_slots)
    for (int t = 0; t < 4; ++t) {
      bool in_triple = true;
      for (int c = 0; c < 4; ++c)
        if (g.slots[s].exponents()[c] != 0 && c != arrays[t].triple[0] &&
            c != arrays[t].triple[1] && c != arrays[t].triple[2])
          in_triple = false;
      if (in_triple) {
        owned[t].push_back(s);
        break;
      }
    }
  struct RowTab {
    std::vector<std::uint8_t> val;                 // row * np + P
    std::array<std::vector<std::uint8_t>, 4> grad;
  };
  std::array<RowTab, 4> rowtab;
  for (int t = 0; t < 4; ++t) {
    const std::size_t nr = arrays[t].slot_values.size();
    rowtab[t].val.assign(nr * np, 0);
    for (int i = 0; i < 4; ++i) rowtab[t].grad[i].assign(nr * np, 0);
    for (std::size_t r = 0; r < nr; ++r) {
      const std::vector<Elem>& v = arrays[t].slot_values[r];
      std::uint8_t* vp = &rowtab[t].val[r * np];
      for (int s : owned[t]) {
        if (v[s] == 0) continue;
        const std::uint8_t c = std::uint8_t(v[s]);
        const std::uint8_t* svp = sv[s].data();
        for (std::size_t P = 0; P < np; ++P) vp[P] = T.ad(vp[P], T.ml(c, svp[P]));
        for (int i = 0; i < 4; ++i) {
          std::uint8_t* gp = &rowtab[t].grad[i][r * np];
          const std::uint8_t* sgp = sg[s][i].data();
          for (std::size_t P = 0; P < np; ++P) gp[P] = T.ad(gp[P], T.ml(c, sgp[P]));
        }
      }
    }
  }

  std::vector<std::uint8_t> base(np);
  std::array<std::vector<std::uint8_t>, 4> bgrad;
  for (int i = 0; i < 4; ++i) bgrad[i].resize(np);
  std::vector<std::uint8_t> alive(std::size_t(q) * q);
  std::vector<Elem> qvals(ns, 0);

  auto assignment_for = [&](const std::array<Elem, 4>& d) {
    std::vector<Elem> out;
    size_t di = 0;
    for (size_t s = 0; s < ns; ++s) {
      if (g.slots[s].status != SlotStatus::Free) continue;
      if (g.slots[s].kind == SlotKind::D)
        out.push_back(d[di++]);
      else
        out.push_back(qvals[s]);
    }
    return out;
  };

  auto scan_candidate = [&](const std::array<int, 4>& rows) {
    if (max_candidates && report.candidate_count >= max_candidates) {
      report.exhausted = false;
      return false;
    }
    std::uint64_t ci = report.candidate_count++;
    if (ci % shard.count != shard.index) return true;
    ++report.candidates_scanned;

    std::fill(qvals.begin(), qvals.end(), 0);
    for (int t = 0; t < 4; ++t) {
      const std::vector<Elem>& v = arrays[t].slot_values[rows[t]];
      for (size_t s = 0; s < ns; ++s)
        if (v[s] != 0) qvals[s] = v[s];
    }

    // d-space constraints from one-zero-coordinate points: at a boundary zero
    // every in-triple partial vanishes, so survival forces the cross partial
    // to vanish too
    LinearSystem sys;
    sys.nvars = 4;
    bool have_constraints = false;
    std::array<std::optional<Form>, 4> cand_partial;
    for (int t = 0; t < 4 && sys.nvars; ++t) {
      int z = 6 - arrays[t].triple[0] - arrays[t].triple[1] - arrays[t].triple[2];
      for (const ProjectivePoint& P : arrays[t].zero_points[rows[t]]) {
        int nonzero = 0;
        for (int c = 0; c < 4; ++c)
          if (P.coords[c] != 0) ++nonzero;
        if (nonzero != 3) continue;  // unit zeros stay singular for every d
        if (!have_constraints) {
          std::vector<forms::Term> terms;
          for (int s : fixed_slots)
            if (qvals[s] != 0) terms.push_back({g.slots[s].exponents(), qvals[s]});
          Form cand = Form::from_terms(F, 4, 5, std::move(terms));
          for (int i = 0; i < 4; ++i) cand_partial[i] = forms::partial_derivative(cand, i);
          have_constraints = true;
        }
        std::vector<Elem> row(5, 0);
        for (int di = 0; di < 4; ++di)
          row[di] = forms::evaluate(slot_partial[z][dslots[di]], P.coords);
        row[4] = F.neg(forms::evaluate(*cand_partial[z], P.coords));
        sys.rows.push_back(std::move(row));
      }
    }

    SolutionSpace sol;
    if (have_constraints) {
      sol = solve(F, sys);
      // infeasible: every d leaves a non-singular boundary zero
      if (!sol.feasible) return true;
    }

    // candidate part of value and gradient on every interior point
    {
      const std::uint8_t* v0 = &rowtab[0].val[std::size_t(rows[0]) * np];
      const std::uint8_t* v1 = &rowtab[1].val[std::size_t(rows[1]) * np];
      const std::uint8_t* v2 = &rowtab[2].val[std::size_t(rows[2]) * np];
      const std::uint8_t* v3 = &rowtab[3].val[std::size_t(rows[3]) * np];
      for (std::size_t P = 0; P < np; ++P)
        base[P] = T.ad(T.ad(v0[P], v1[P]), T.ad(v2[P], v3[P]));
      for (int i = 0; i < 4; ++i) {
        const std::uint8_t* g0 = &rowtab[0].grad[i][std::size_t(rows[0]) * np];
        const std::uint8_t* g1 = &rowtab[1].grad[i][std::size_t(rows[1]) * np];
        const std::uint8_t* g2 = &rowtab[2].grad[i][std::size_t(rows[2]) * np];
        const std::uint8_t* g3 = &rowtab[3].grad[i][std::size_t(rows[3]) * np];
        for (std::size_t P = 0; P < np; ++P)
          bgrad[i][P] = T.ad(T.ad(g0[P], g1[P]), T.ad(g2[P], g3[P]));
      }
    }

    if (!have_constraints) {
      // full d-space: outer two d-slots explicit, inner two analytic per point
      const std::uint8_t* sv0 = sv[dslots[0]].data();
      const std::uint8_t* sv1 = sv[dslots[1]].data();
      const std::uint8_t* sg0[4], *sg1[4], *sg6[4];
      for (int i = 0; i < 4; ++i) {
        sg0[i] = sg[dslots[0]][i].data();
        sg1[i] = sg[dslots[1]][i].data();
        sg6[i] = sg[s6][i].data();
      }
      const std::uint32_t ncells = q * q;
      for (std::uint32_t d0 = 0; d0 < q; ++d0)
        for (std::uint32_t d1 = 0; d1 < q; ++d1) {
          const std::uint8_t e0 = std::uint8_t(d0), e1 = std::uint8_t(d1);
          std::uint64_t alv[4] = {};
          for (int w = 0; w < W; ++w) alv[w] = ~std::uint64_t(0);
          if (ncells & 63) alv[W - 1] = (std::uint64_t(1) << (ncells & 63)) - 1;
          std::uint32_t remaining = ncells;
          for (std::size_t P = 0; P < np && remaining; ++P) {
            const std::uint8_t b = T.ad(
                base[P], T.ad(T.ml(e0, sv0[P]), T.ml(e1, sv1[P])));
            const std::uint8_t v6_0 = T.ml(T.neg[b], im6[P]);
            std::uint32_t skip = q;
            const int ip = pivB[P];
            auto a_comp = [&](int i) {
              const std::uint8_t gi = T.ad(
                  bgrad[i][P], T.ad(T.ml(e0, sg0[i][P]), T.ml(e1, sg1[i][P])));
              return T.ad(gi, T.ml(v6_0, sg6[i][P]));
            };
            if (ip >= 0) {
              const std::uint8_t v5x = T.ml(T.neg[a_comp(ip)], ipivB[P]);
              bool consistent = true;
              for (int i = 0; i < 4 && consistent; ++i)
                if (i != ip && T.ad(a_comp(i), T.ml(v5x, Bv[i][P])) != 0)
                  consistent = false;
              if (consistent) skip = v5x;
            } else {
              // gradient constant along the line; a fully singular line
              // clears nothing
              bool allz = true;
              for (int i = 0; i < 4 && allz; ++i)
                if (a_comp(i) != 0) allz = false;
              if (allz) continue;
            }
            const std::uint64_t* lm = &linemask[(P * q + v6_0) * W];
            if (skip < q) {
              const std::uint32_t sbit =
                  skip * q + T.sb(v6_0, T.ml(std::uint8_t(skip), slope[P]));
              for (int w = 0; w < W; ++w) {
                std::uint64_t m = lm[w];
                if (w == int(sbit >> 6)) m &= ~(std::uint64_t(1) << (sbit & 63));
                const std::uint64_t clr = alv[w] & m;
                alv[w] ^= clr;
                remaining -= std::uint32_t(__builtin_popcountll(clr));
              }
            } else {
              for (int w = 0; w < W; ++w) {
                const std::uint64_t clr = alv[w] & lm[w];
                alv[w] ^= clr;
                remaining -= std::uint32_t(__builtin_popcountll(clr));
              }
            }
          }
          if (remaining)
            for (std::uint32_t bit = 0; bit < ncells; ++bit)
              if (alv[bit >> 6] & (std::uint64_t(1) << (bit & 63)))
                report.survivors.push_back(make_record(
                    F, g,
                    assignment_for({Elem(d0), Elem(d1), Elem(bit / q),
                                    Elem(bit % q)})));
        }
    } else {
      // walk the solution space; interior scan with early exit per d
      const int dim = int(sol.basis.size());
      std::vector<std::uint32_t> odo(dim, 0);
      while (true) {
        std::array<Elem, 4> d;
        for (int i = 0; i < 4; ++i) {
          Elem v = sol.particular[i];
          for (int b = 0; b < dim; ++b)
            v = F.add(v, F.mul(Elem(odo[b]), sol.basis[b][i]));
          d[i] = v;
        }
        bool survives = true;
        for (std::size_t P = 0; P < np && survives; ++P) {
          std::uint8_t b = base[P];
          for (int di = 0; di < 4; ++di)
            b = T.ad(b, T.ml(std::uint8_t(d[di]), sv[dslots[di]][P]));
          if (b != 0) continue;
          for (int i = 0; i < 4; ++i) {
            std::uint8_t gi = bgrad[i][P];
            for (int di = 0; di < 4; ++di)
              gi = T.ad(gi, T.ml(std::uint8_t(d[di]), sg[dslots[di]][i][P]));
            if (gi != 0) {
              survives = false;
              break;
            }
          }
        }
        if (survives) report.survivors.push_back(make_record(F, g, assignment_for(d)));
        if (dim == 0) break;
        int i = dim - 1;
        while (i >= 0 && ++odo[i] == q) odo[i--] = 0;
        if (i < 0) break;
      }
    }
    if (stop_after_survivors && report.survivors.size() >= stop_after_survivors) {
      report.exhausted = false;
      return false;
    }
    return true;
  };
  if (reduce_join)
    for_each_candidate_reduced(F, arrays, g, scan_candidate);
  else
    for_each_candidate(arrays, g, scan_candidate);

  std::sort(report.survivors.begin(), report.survivors.end(),
            [](const SurvivorRecord& a, const SurvivorRecord& b) {
              return a.assignment < b.assignment;
            });
  // survivors are extraordinary claims; confirm each one independently before
  // reporting it
  for (const SurvivorRecord& r : report.survivors) {
    if (!audit_counterexample(F, g, r))
      throw std::logic_error("survivor failed the affine audit");
    report.survivor_forms.push_back(
        forms::serialize_form(shapes::instantiate(g, r.assignment, F)));
  }
  report.pass = report.survivors.empty() && report.exhausted;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

bool audit_counterexample(const FieldSpec& F, const ShapeTemplate& g,
                          const SurvivorRecord& rec) {
  Form f = shapes::instantiate(g, rec.assignment, F);
  std::array<Form, 4> partials = {
      forms::partial_derivative(f, 0), forms::partial_derivative(f, 1),
      forms::partial_derivative(f, 2), forms::partial_derivative(f, 3)};
  const std::uint32_t q = F.q();
  long zeros = 0;
  Coords v{};
  for (std::uint32_t x0 = 0; x0 < q; ++x0)
    for (std::uint32_t x1 = 0; x1 < q; ++x1)
      for (std::uint32_t x2 = 0; x2 < q; ++x2)
        for (std::uint32_t x3 = 0; x3 < q; ++x3) {
          if (x0 == 0 && x1 == 0 && x2 == 0 && x3 == 0) continue;
          v = {Elem(x0), Elem(x1), Elem(x2), Elem(x3)};
          if (forms::evaluate(f, v) != 0) continue;
          ++zeros;
          for (const Form& d : partials)
            if (forms::evaluate(d, v) != 0) return false;
        }
  return zeros == rec.zero_total * long(q - 1);
}

std::string QuaternaryReport::to_json() const {
  nlohmann::json j;
  j["claim_id"] = "quaternary/" + g_shape + "/q=" + std::to_string(q);
  j["q"] = q;
  j["g_shape"] = g_shape;
  j["array_sizes"] = array_sizes;
  j["candidate_count"] = candidate_count;
  j["candidates_scanned"] = candidates_scanned;
  j["exhausted"] = exhausted;
  j["dterm_space"] = dterm_space;
  j["survivor_count"] = survivors.size();
  j["verdict"] = pass ? "pass" : "fail";
  j["shards"] = std::to_string(shard.index) + "/" + std::to_string(shard.count);
  j["elapsed_seconds"] = seconds;
  for (size_t i = 0; i < survivors.size(); ++i) {
    nlohmann::json jr;
    jr["assignment"] = survivors[i].assignment;
    jr["zeros"] = survivors[i].zero_total;
    if (i < survivor_forms.size()) jr["form"] = survivor_forms[i];
    j["survivors"].push_back(jr);
  }
  return j.dump(2);
}

}  // namespace qvf::assemble
