#include "qvf/shapes.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qvf::shapes {

int Tournament::pair_index(int i, int j, int m) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= m || i == j) throw std::out_of_range("pair index");
  return i * (2 * m - i - 1) / 2 + (j - i - 1);
}

std::pair<int, int> Tournament::direction(int i, int j) const {
  if (i > j) std::swap(i, j);
  return forward[pair_index(i, j, m)] ? std::pair{i, j} : std::pair{j, i};
}

Tournament canonical_ternary(TripleShape shape) {
  Tournament t;
  t.m = 3;
  if (shape == TripleShape::Transitive) {
    t.forward = {true, true, true};  // 0->1, 0->2, 1->2
  } else {
    t.forward = {true, false, true};  // 0->1, 2->0, 1->2
  }
  return t;
}

TripleClass classify_triple(const Tournament& t, std::array<int, 3> triple) {
  std::sort(triple.begin(), triple.end());
  auto beats = [&](int a, int b) { return t.direction(a, b).first == a; };
  int out[3] = {0, 0, 0};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b && beats(triple[a], triple[b])) ++out[a];

  TripleClass cls{};
  if (out[0] + out[1] + out[2] != 3) throw std::logic_error("tournament corrupt");
  bool transitive = (out[0] == 2 || out[1] == 2 || out[2] == 2);
  if (transitive) {
    cls.shape = TripleShape::Transitive;
    for (int a = 0; a < 3; ++a) cls.canon_to_orig[2 - out[a]] = triple[a];
  } else {
    // 3-cycle; start the canonical rotation at the smallest vertex
    cls.shape = TripleShape::Cyclic;
    int v0 = triple[0];
    int v1 = beats(triple[0], triple[1]) ? triple[1] : triple[2];
    int v2 = triple[1] + triple[2] - v1;
    cls.canon_to_orig = {v0, v1, v2};
  }
  return cls;
}

Exponents Slot::exponents() const {
  Exponents e{};
  switch (kind) {
    case SlotKind::A:
      e[idx[0]] = 3;
      e[idx[1]] = 2;
      break;
    case SlotKind::B:
      e[idx[0]] = 1;
      e[idx[1]] = 1;
      e[idx[2]] = 3;
      break;
    case SlotKind::C:
      e[idx[0]] = 1;
      e[idx[1]] = 2;
      e[idx[2]] = 2;
      break;
    case SlotKind::D:
      e[idx[0]] = 1;
      e[idx[1]] = 1;
      e[idx[2]] = 1;
      e[idx[3]] = 2;
      break;
  }
  return e;
}

std::string Slot::name() const {
  static const char* prefix[] = {"a", "b", "c", "d"};
  std::ostringstream os;
  os << prefix[int(kind)] << "(";
  int arity = kind == SlotKind::A ? 2 : (kind == SlotKind::D ? 4 : 3);
  for (int i = 0; i < arity; ++i) {
    if (i) os << ",";
    os << idx[i] + 1;
  }
  os << ")";
  return os.str();
}

std::vector<int> ShapeTemplate::free_slots() const {
  std::vector<int> out;
  for (size_t i = 0; i < slots.size(); ++i)
    if (slots[i].status == SlotStatus::Free) out.push_back(int(i));
  return out;
}

std::string ShapeTemplate::descriptor() const {
  std::ostringstream pins, free;
  bool first_pin = true, first_free = true;
  for (const Slot& s : slots) {
    if (s.status == SlotStatus::Pinned) {
      if (!first_pin) pins << ",";
      pins << s.name() << ":" << s.pin;
      first_pin = false;
    } else if (s.status == SlotStatus::Free) {
      if (!first_free) free << ",";
      free << s.name();
      first_free = false;
    }
  }
  return "shape=" + shape_name + " pins=" + pins.str() + " free=" + free.str();
}

std::uint64_t ShapeTemplate::assignment_space(const FieldSpec& F) const {
  std::uint64_t n = 1;
  for (const Slot& s : slots)
    if (s.status == SlotStatus::Free) n *= s.nonzero_domain() ? F.q() - 1 : F.q();
  return n;
}

namespace {

// canonical slot list for an m-variable template: a-slots by pair lex
// (direction per tournament), then b, c and (m = 4) d slots by index tuple
std::vector<Slot> base_slots(const Tournament& t) {
  std::vector<Slot> slots;
  int m = t.m;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      auto [s, sq] = t.direction(i, j);
      slots.push_back({SlotKind::A, {s, sq, -1, -1}, SlotStatus::Free, 0});
    }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        if (k == i || k == j) continue;
        slots.push_back({SlotKind::B, {i, j, k, -1}, SlotStatus::Free, 0});
      }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        if (i == j || i == k) continue;
        slots.push_back({SlotKind::C, {i, j, k, -1}, SlotStatus::Free, 0});
      }
  if (m == 4)
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        for (int k = j + 1; k < m; ++k) {
          int l = 6 - i - j - k;
          slots.push_back({SlotKind::D, {i, j, k, l}, SlotStatus::Free, 0});
        }
  // a-slots are in pair-lex order; the b/c/d loops emit index tuples in
  // ascending lex order already, so the list is canonical as generated
  return slots;
}

void pin_slot(std::vector<Slot>& slots, SlotKind kind, std::array<int, 4> idx,
              Elem value) {
  for (Slot& s : slots) {
    if (s.kind == kind && s.idx == idx) {
      if (value == 0) throw std::invalid_argument("zero pin on slot " + s.name());
      s.status = SlotStatus::Pinned;
      s.pin = value;
      return;
    }
  }
  Slot probe{kind, idx, SlotStatus::Free, 0};
  throw std::invalid_argument("pin on absent slot " + probe.name());
}

}  // namespace

ShapeTemplate ternary_template(TripleShape shape,
                               const std::map<std::pair<int, int>, Elem>& pins,
                               const FieldSpec& F) {
  (void)F;
  ShapeTemplate t;
  t.m = 3;
  t.tournament = canonical_ternary(shape);
  t.shape_name = shape == TripleShape::Transitive ? "t1" : "t2";
  t.slots = base_slots(t.tournament);
  for (const auto& [pair, value] : pins)
    pin_slot(t.slots, SlotKind::A, {pair.first, pair.second, -1, -1}, value);
  return t;
}

ShapeTemplate g_template(int index, const FieldSpec& F) {
  (void)F;
  if (index < 1 || index > 4) throw std::invalid_argument("g index must be 1..4");
  ShapeTemplate t;
  t.m = 4;
  t.shape_name = "g" + std::to_string(index);
  Tournament& tour = t.tournament;
  tour.m = 4;
  // common tail h: 1->2, 1->3, 2->3 (0-based)
  tour.forward[Tournament::pair_index(1, 2, 4)] = true;
  tour.forward[Tournament::pair_index(1, 3, 4)] = true;
  tour.forward[Tournament::pair_index(2, 3, 4)] = true;
  // vertex-0 pairs per family
  bool f01, f02, f03;
  switch (index) {
    case 1: f01 = true; f02 = true; f03 = true; break;    // 0->1, 0->2, 0->3
    case 2: f01 = true; f02 = false; f03 = true; break;   // 0->1, 2->0, 0->3
    case 3: f01 = true; f02 = true; f03 = false; break;   // 0->1, 0->2, 3->0
    default: f01 = false; f02 = true; f03 = false; break; // 1->0, 0->2, 3->0
  }
  tour.forward[Tournament::pair_index(0, 1, 4)] = f01;
  tour.forward[Tournament::pair_index(0, 2, 4)] = f02;
  tour.forward[Tournament::pair_index(0, 3, 4)] = f03;

  t.slots = base_slots(tour);
  if (index == 4)
    pin_slot(t.slots, SlotKind::A, {1, 0, -1, -1}, 1);
  else
    pin_slot(t.slots, SlotKind::A, {0, 1, -1, -1}, 1);
  pin_slot(t.slots, SlotKind::A, {1, 2, -1, -1}, 1);
  pin_slot(t.slots, SlotKind::A, {2, 3, -1, -1}, 1);
  return t;
}

ShapeTemplate custom_template(const Tournament& t) {
  ShapeTemplate out;
  out.m = t.m;
  out.tournament = t;
  std::string bits;
  for (int i = 0; i < t.pair_count(); ++i) bits += t.forward[i] ? '1' : '0';
  out.shape_name = "custom" + std::to_string(t.m) + ":" + bits;
  out.slots = base_slots(t);
  return out;
}

ShapeTemplate template_from_descriptor(const std::string& descriptor,
                                       const FieldSpec& F) {
  std::istringstream is(descriptor);
  std::string tok, name, pins_str, free_str;
  while (is >> tok) {
    if (tok.rfind("shape=", 0) == 0) name = tok.substr(6);
    else if (tok.rfind("pins=", 0) == 0) pins_str = tok.substr(5);
    else if (tok.rfind("free=", 0) == 0) free_str = tok.substr(5);
    else throw std::invalid_argument("bad template descriptor token: " + tok);
  }
  ShapeTemplate t;
  if (name == "t1")
    t = ternary_template(TripleShape::Transitive, {}, F);
  else if (name == "t2")
    t = ternary_template(TripleShape::Cyclic, {}, F);
  else if (name.size() == 2 && name[0] == 'g')
    t = g_template(name[1] - '0', F);
  else if (name.rfind("custom", 0) == 0) {
    auto colon = name.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("bad custom shape name: " + name);
    Tournament tour;
    tour.m = std::stoi(name.substr(6, colon - 6));
    std::string bits = name.substr(colon + 1);
    if (tour.m < 3 || tour.m > 4 || int(bits.size()) != tour.pair_count())
      throw std::invalid_argument("bad custom shape name: " + name);
    for (int i = 0; i < tour.pair_count(); ++i) tour.forward[i] = bits[i] == '1';
    t = custom_template(tour);
  } else
    throw std::invalid_argument("unsupported template shape: " + name);
  // reset: statuses come entirely from the descriptor
  for (Slot& s : t.slots) {
    s.status = SlotStatus::Zero;
    s.pin = 0;
  }
  auto find_slot = [&](const std::string& n) -> Slot& {
    for (Slot& s : t.slots)
      if (s.name() == n) return s;
    throw std::invalid_argument("unknown slot in descriptor: " + n);
  };
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char ch : s) {
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if (ch == ',' && depth == 0) {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  };
  for (const std::string& p : split(pins_str)) {
    auto colon = p.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("bad pin: " + p);
    Slot& s = find_slot(p.substr(0, colon));
    s.status = SlotStatus::Pinned;
    s.pin = Elem(std::stoul(p.substr(colon + 1)));
    if (s.pin == 0 || s.pin >= F.q()) throw std::invalid_argument("bad pin value: " + p);
  }
  for (const std::string& n : split(free_str)) find_slot(n).status = SlotStatus::Free;
  for (const Slot& s : t.slots)
    if (s.kind == SlotKind::A && s.status == SlotStatus::Zero)
      throw std::invalid_argument("a-slot cannot be zero: " + s.name());
  return t;
}

Elem scaling_factor(const FieldSpec& F, const ScalingElement& g, const Exponents& e) {
  Elem f = g.c;
  for (int i = 0; i < 4; ++i)
    if (e[i] != 0) f = F.mul(f, F.pow(g.lambda[i], e[i]));
  return f;
}

Form apply_scaling(const Form& f, const ScalingElement& g) {
  const FieldSpec& F = f.field();
  if (g.c == 0) throw std::invalid_argument("zero scalar in scaling");
  for (int i = 0; i < f.vars(); ++i)
    if (g.lambda[i] == 0) throw std::invalid_argument("zero lambda in scaling");
  std::vector<forms::Term> terms;
  for (const forms::Term& t : f.terms())
    terms.push_back({t.exps, F.mul(t.coeff, scaling_factor(F, g, t.exps))});
  return Form::from_terms(F, f.vars(), f.degree(), std::move(terms));
}

std::size_t ScalingOrbits::tuple_index(std::span<const Elem> tuple) const {
  std::size_t idx = 0;
  for (int i = 0; i < s_; ++i) {
    if (tuple[i] == 0) throw std::invalid_argument("a-coefficients are nonzero");
    idx = idx * (F_->q() - 1) + (tuple[i] - 1);
  }
  return idx;
}

ScalingOrbits::ScalingOrbits(const FieldSpec& F, std::span<const Slot> a_slots, int m)
    : F_(&F), m_(m), s_(int(a_slots.size())) {
  std::size_t space = 1;
  for (int i = 0; i < s_; ++i) space *= F.q() - 1;
  if (space > (1u << 22)) throw std::invalid_argument("a-slot space too large");
  orbit_id_.assign(space, -1);
  to_rep_.assign(space, {});

  std::vector<Exponents> weights;
  for (const Slot& s : a_slots) weights.push_back(s.exponents());

  // all group elements, odometer over (c, lambda_0..lambda_{m-1})
  std::vector<ScalingElement> group;
  std::vector<Elem> nz = F.nonzero_elements();
  std::vector<std::size_t> odo(std::size_t(m) + 1, 0);
  while (true) {
    ScalingElement g;
    g.c = nz[odo[0]];
    for (int i = 0; i < m; ++i) g.lambda[i] = nz[odo[i + 1]];
    group.push_back(g);
    int i = m;
    while (i >= 0 && ++odo[i] == nz.size()) odo[i--] = 0;
    if (i < 0) break;
  }

  auto invert = [&](const ScalingElement& g) {
    ScalingElement inv;
    inv.c = F.inv(g.c);
    for (int i = 0; i < m; ++i) inv.lambda[i] = F.inv(g.lambda[i]);
    return inv;
  };

  // scan tuples in ascending lex order; each unassigned one opens a new orbit
  std::vector<Elem> tuple(s_);
  for (std::size_t t = 0; t < space; ++t) {
    std::size_t v = t;
    for (int i = s_ - 1; i >= 0; --i) {
      tuple[i] = Elem(v % (F.q() - 1) + 1);
      v /= F.q() - 1;
    }
    if (orbit_id_[t] != -1) continue;
    int id = int(reps_.size());
    reps_.push_back(tuple);
    for (const ScalingElement& g : group) {
      std::vector<Elem> img(s_);
      for (int i = 0; i < s_; ++i)
        img[i] = F.mul(tuple[i], scaling_factor(F, g, weights[i]));
      std::size_t ti = tuple_index(img);
      if (orbit_id_[ti] == -1) {
        orbit_id_[ti] = id;
        to_rep_[ti] = invert(g);
      }
    }
    if (orbit_id_[t] != id) throw std::logic_error("orbit scan inconsistent");
  }
}

int ScalingOrbits::orbit_of(std::span<const Elem> tuple) const {
  return orbit_id_[tuple_index(tuple)];
}

ScalingElement ScalingOrbits::to_representative(std::span<const Elem> tuple) const {
  return to_rep_[tuple_index(tuple)];
}

Form instantiate(const ShapeTemplate& t, std::span<const Elem> free_values,
                 const FieldSpec& F) {
  std::vector<forms::Term> terms;
  std::size_t next = 0;
  for (const Slot& s : t.slots) {
    Elem v = 0;
    switch (s.status) {
      case SlotStatus::Zero:
        continue;
      case SlotStatus::Pinned:
        v = s.pin;
        break;
      case SlotStatus::Free:
        if (next >= free_values.size())
          throw std::invalid_argument("missing free slot value");
        v = free_values[next++];
        if (v == 0 && s.nonzero_domain())
          throw std::invalid_argument("zero value for a-slot " + s.name());
        break;
    }
    if (v >= F.q()) throw std::invalid_argument("value out of field range");
    if (v != 0) terms.push_back({s.exponents(), v});
  }
  if (next != free_values.size())
    throw std::invalid_argument("extra free slot values");
  return Form::from_terms(F, t.m, 5, std::move(terms));
}

}  // namespace qvf::shapes
