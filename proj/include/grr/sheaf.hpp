#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grr/arith.hpp"
#include "grr/divisor.hpp"
#include "grr/error.hpp"
#include "grr/progression.hpp"

namespace grr {

// ---------------------------------------------------------------------------
// The five objects and four arrows of the category.

enum class Obj : int { A1 = 0, A2 = 1, B1 = 2, B2 = 3, B3 = 4 };
inline constexpr std::array<Obj, 5> kObjects{Obj::A1, Obj::A2, Obj::B1, Obj::B2, Obj::B3};

constexpr std::size_t idx(Obj o) { return static_cast<std::size_t>(o); }
constexpr bool is_a_object(Obj o) { return o == Obj::A1 || o == Obj::A2; }

inline const char* obj_name(Obj o) {
  static constexpr const char* names[] = {"A1", "A2", "B1", "B2", "B3"};
  return names[idx(o)];
}

inline Obj parse_obj(std::string_view s) {
  for (Obj o : kObjects)
    if (s == obj_name(o)) return o;
  throw InvalidArgument("unknown object '" + std::string(s) + "'");
}

/// Restriction arrows, named source->target (B -> A).
enum class Arrow : int { B1A1 = 0, B2A2 = 1, B3A1 = 2, B3A2 = 3 };
inline constexpr std::array<Arrow, 4> kArrows{Arrow::B1A1, Arrow::B2A2, Arrow::B3A1, Arrow::B3A2};

constexpr std::size_t idx(Arrow a) { return static_cast<std::size_t>(a); }

constexpr Obj arrow_source(Arrow a) {
  constexpr Obj src[] = {Obj::B1, Obj::B2, Obj::B3, Obj::B3};
  return src[idx(a)];
}
constexpr Obj arrow_target(Arrow a) {
  constexpr Obj tgt[] = {Obj::A1, Obj::A2, Obj::A1, Obj::A2};
  return tgt[idx(a)];
}

inline const char* arrow_name(Arrow a) {
  static constexpr const char* names[] = {"B1->A1", "B2->A2", "B3->A1", "B3->A2"};
  return names[idx(a)];
}

inline Arrow parse_arrow(std::string_view s) {
  for (Arrow a : kArrows)
    if (s == arrow_name(a)) return a;
  throw InvalidArgument("unknown arrow '" + std::string(s) + "'");
}

/// Exponent of the structure-sheaf restriction: y_i -> x_i^-1, v -> x1^r, v -> x2^-r.
constexpr std::int64_t o_exponent(Arrow a, std::int64_t r) {
  switch (a) {
    case Arrow::B1A1:
    case Arrow::B2A2: return -1;
    case Arrow::B3A1: return r;
    case Arrow::B3A2: return -r;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Graded spaces.

struct SlotSupport {
  enum class Kind { all, nonneg, finite, empty };
  Kind kind = Kind::empty;
  std::vector<std::int64_t> points;  ///< sorted, unique; only for `finite`

  static SlotSupport all() { return {Kind::all, {}}; }
  static SlotSupport nonneg() { return {Kind::nonneg, {}}; }
  static SlotSupport empty() { return {Kind::empty, {}}; }
  static SlotSupport finite(std::vector<std::int64_t> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.empty()) return empty();
    return {Kind::finite, std::move(pts)};
  }
  /// {0, ..., n-1}: the support of k[y]/(y^n).
  static SlotSupport range(std::int64_t n) {
    std::vector<std::int64_t> pts;
    for (std::int64_t i = 0; i < n; ++i) pts.push_back(i);
    return finite(std::move(pts));
  }

  bool contains(std::int64_t e) const {
    switch (kind) {
      case Kind::all: return true;
      case Kind::nonneg: return e >= 0;
      case Kind::finite: return std::binary_search(points.begin(), points.end(), e);
      case Kind::empty: return false;
    }
    return false;
  }
  bool infinite() const { return kind == Kind::all || kind == Kind::nonneg; }
  bool is_empty() const { return kind == Kind::empty; }
  std::int64_t max_abs_point() const {
    std::int64_t m = 0;
    for (auto p : points) m = std::max(m, abs64(p));
    return m;
  }
  /// Support elements in [lo, hi], ascending.
  std::vector<std::int64_t> elements_in(std::int64_t lo, std::int64_t hi) const {
    std::vector<std::int64_t> out;
    if (kind == Kind::finite) {
      for (auto p : points)
        if (p >= lo && p <= hi) out.push_back(p);
    } else if (infinite()) {
      for (auto e = (kind == Kind::nonneg ? std::max<std::int64_t>(lo, 0) : lo); e <= hi; ++e)
        out.push_back(e);
    }
    return out;
  }
  PeriodicSet as_set() const {
    switch (kind) {
      case Kind::all: return PeriodicSet::all();
      case Kind::nonneg: return PeriodicSet::above(-1);
      case Kind::finite: return PeriodicSet::points(points);
      case Kind::empty: return PeriodicSet::empty();
    }
    return {};
  }
  std::string describe() const {
    switch (kind) {
      case Kind::all: return "all";
      case Kind::nonneg: return "nonneg";
      case Kind::empty: return "empty";
      case Kind::finite: {
        std::string s = "{";
        for (std::size_t i = 0; i < points.size(); ++i) s += (i ? "," : "") + std::to_string(points[i]);
        return s + "}";
      }
    }
    return "?";
  }
  friend bool operator==(const SlotSupport&, const SlotSupport&) = default;
  friend auto operator<=>(const SlotSupport&, const SlotSupport&) = default;
};

/// One summand: a support and the exponent shift produced by the generator
/// of the local structure ring (x, y or v) acting on it.
struct Slot {
  SlotSupport support;
  std::int64_t step = 1;
  friend bool operator==(const Slot&, const Slot&) = default;
  friend auto operator<=>(const Slot&, const Slot&) = default;
};

struct BasisVec {
  std::size_t slot = 0;
  std::int64_t exp = 0;
  friend bool operator==(const BasisVec&, const BasisVec&) = default;
  friend auto operator<=>(const BasisVec&, const BasisVec&) = default;
};

struct GradedSpace {
  std::vector<Slot> slots;

  static GradedSpace zero() { return {}; }
  static GradedSpace single(SlotSupport s, std::int64_t step = 1) { return {{Slot{std::move(s), step}}}; }
  /// k[x,1/x]^n
  static GradedSpace laurent(std::size_t n = 1) { return {std::vector<Slot>(n, Slot{SlotSupport::all(), 1})}; }
  /// k[y]^n
  static GradedSpace polynomial(std::size_t n = 1) {
    return {std::vector<Slot>(n, Slot{SlotSupport::nonneg(), 1})};
  }
  /// k[y]/(y^n)
  static GradedSpace truncated(std::int64_t n) { return single(SlotSupport::range(n)); }

  std::size_t size() const { return slots.size(); }
  bool is_zero() const {
    return std::all_of(slots.begin(), slots.end(), [](const Slot& s) { return s.support.is_empty(); });
  }
  bool contains(BasisVec v) const { return v.slot < slots.size() && slots[v.slot].support.contains(v.exp); }
  /// Finite-dimensional (every slot finite or empty).
  bool finite() const {
    return std::none_of(slots.begin(), slots.end(), [](const Slot& s) { return s.support.infinite(); });
  }
  /// Basis vectors with exponent in [-w, w].
  std::vector<BasisVec> window(std::int64_t w) const {
    std::vector<BasisVec> out;
    for (std::size_t s = 0; s < slots.size(); ++s)
      for (auto e : slots[s].support.elements_in(-w, w)) out.push_back({s, e});
    return out;
  }
  /// The generator acting k times on a basis vector (nullopt when it leaves the support).
  std::optional<BasisVec> act(BasisVec v, std::int64_t k) const {
    BasisVec w{v.slot, v.exp + k * slots[v.slot].step};
    if (!contains(w)) return std::nullopt;
    return w;
  }
  friend bool operator==(const GradedSpace&, const GradedSpace&) = default;
};

inline GradedSpace operator+(const GradedSpace& a, const GradedSpace& b) {
  GradedSpace out = a;
  out.slots.insert(out.slots.end(), b.slots.begin(), b.slots.end());
  return out;
}

// ---------------------------------------------------------------------------
// Monomial maps.

/// (slot, e) |-> coeff * (target_slot, scale*e + offset)
struct MonomialTerm {
  std::size_t target_slot = 0;
  std::int64_t scale = 1;
  std::int64_t offset = 0;
  std::int64_t coeff = 1;
  friend bool operator==(const MonomialTerm&, const MonomialTerm&) = default;
  friend auto operator<=>(const MonomialTerm&, const MonomialTerm&) = default;
};

using IntCombo = std::map<BasisVec, std::int64_t>;

struct MonomialMap {
  GradedSpace source;
  GradedSpace target;
  std::vector<std::vector<MonomialTerm>> terms;  ///< indexed by source slot
  bool quotient = false;  ///< drop terms landing outside the target support

  static MonomialMap zero(GradedSpace src, GradedSpace tgt) {
    MonomialMap m{std::move(src), std::move(tgt), {}, false};
    m.terms.resize(m.source.size());
    return m;
  }

  MonomialMap& add(std::size_t src_slot, MonomialTerm t) {
    if (src_slot >= terms.size()) terms.resize(src_slot + 1);
    terms[src_slot].push_back(t);
    return *this;
  }

  /// Raw image terms of a basis vector. Out-of-support targets are dropped
  /// only for quotient maps; otherwise they are kept for validation to flag.
  std::vector<std::pair<BasisVec, std::int64_t>> image(BasisVec v) const {
    std::vector<std::pair<BasisVec, std::int64_t>> out;
    if (v.slot >= terms.size()) return out;
    for (const auto& t : terms[v.slot]) {
      BasisVec w{t.target_slot, t.scale * v.exp + t.offset};
      if (quotient && !target.contains(w)) continue;
      out.emplace_back(w, t.coeff);
    }
    return out;
  }

  IntCombo apply(const IntCombo& x) const {
    IntCombo out;
    for (const auto& [v, c] : x)
      for (const auto& [w, d] : image(v)) {
        auto& slot = out[w];
        slot += c * d;
        if (slot == 0) out.erase(w);
      }
    return out;
  }
  IntCombo apply(BasisVec v) const { return apply(IntCombo{{v, 1}}); }

  /// Source basis vectors with a term landing on `w`.
  std::vector<BasisVec> preimages(BasisVec w) const {
    std::vector<BasisVec> out;
    for (std::size_t s = 0; s < terms.size() && s < source.size(); ++s)
      for (const auto& t : terms[s]) {
        if (t.target_slot != w.slot) continue;
        std::int64_t diff = w.exp - t.offset;
        if (diff % t.scale != 0) continue;
        BasisVec v{s, diff / t.scale};
        if (source.contains(v)) out.push_back(v);
      }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  friend bool operator==(const MonomialMap&, const MonomialMap&) = default;
};

// ---------------------------------------------------------------------------
// Sheaves.

struct Sheaf2V {
  std::array<GradedSpace, 5> values;
  std::array<MonomialMap, 4> maps;
  std::optional<std::int64_t> module_tag;

  const GradedSpace& value(Obj o) const { return values[idx(o)]; }
  GradedSpace& value(Obj o) { return values[idx(o)]; }
  const MonomialMap& map(Arrow a) const { return maps[idx(a)]; }
  MonomialMap& map(Arrow a) { return maps[idx(a)]; }

  bool is_zero() const {
    return std::all_of(values.begin(), values.end(), [](const GradedSpace& g) { return g.is_zero(); });
  }

  /// Copies the values into each restriction's source/target and sizes the
  /// term lists; call after editing values.
  Sheaf2V& sync() {
    for (Arrow a : kArrows) {
      auto& m = map(a);
      m.source = value(arrow_source(a));
      m.target = value(arrow_target(a));
      m.terms.resize(m.source.size());
    }
    return *this;
  }

  friend bool operator==(const Sheaf2V&, const Sheaf2V&) = default;
};

inline Sheaf2V zero_sheaf(std::optional<std::int64_t> tag = std::nullopt) {
  Sheaf2V f;
  f.module_tag = tag;
  return f.sync(), f;
}

/// Structure sheaf O_{k,r}.
inline Sheaf2V make_structure_sheaf(EdgeCount r) {
  Sheaf2V f;
  f.module_tag = r.value();
  f.value(Obj::A1) = f.value(Obj::A2) = GradedSpace::laurent();
  f.value(Obj::B1) = f.value(Obj::B2) = GradedSpace::polynomial();
  f.value(Obj::B3) = GradedSpace::laurent();
  f.sync();
  f.map(Arrow::B1A1).add(0, {0, -1, 0, 1});
  f.map(Arrow::B2A2).add(0, {0, -1, 0, 1});
  f.map(Arrow::B3A1).add(0, {0, r, 0, 1});
  f.map(Arrow::B3A2).add(0, {0, -r, 0, 1});
  return f;
}

/// L_{k,r,d}: the structure sheaf with B_i -> A_i twisted by x_i^{d_i}.
inline Sheaf2V make_line_bundle(EdgeCount r, Divisor d) {
  Sheaf2V f = make_structure_sheaf(r);
  f.map(Arrow::B1A1).terms[0][0].offset = d.d1;
  f.map(Arrow::B2A2).terms[0][0].offset = d.d2;
  return f;
}

/// M_{k,r,d}: r Laurent slots at B3, slot j (1-based) sent to x_1^{rn+j-1}, x_2^{-rn+j-1}.
inline Sheaf2V make_M(EdgeCount r, Divisor d) {
  Sheaf2V f;
  f.module_tag = r.value();
  f.value(Obj::A1) = f.value(Obj::A2) = GradedSpace::laurent();
  f.value(Obj::B1) = f.value(Obj::B2) = GradedSpace::polynomial();
  f.value(Obj::B3) = GradedSpace::laurent(static_cast<std::size_t>(r.value()));
  f.sync();
  f.map(Arrow::B1A1).add(0, {0, -1, d.d1, 1});
  f.map(Arrow::B2A2).add(0, {0, -1, d.d2, 1});
  for (std::int64_t j = 0; j < r; ++j) {
    f.map(Arrow::B3A1).add(static_cast<std::size_t>(j), {0, r, j, 1});
    f.map(Arrow::B3A2).add(static_cast<std::size_t>(j), {0, -r, j, 1});
  }
  return f;
}

/// The dualizing sheaf M_{k,r,K_r}.
inline Sheaf2V make_omega(EdgeCount r) { return make_M(r, canonical_divisor(r)); }

/// Value at P and at every Q >= P, identity restrictions. The value's slot
/// steps are read at P; steps at the B objects follow from the O restrictions
/// (r = 1 when untagged).
inline Sheaf2V make_skyscraper(Obj vertex, const GradedSpace& value,
                               std::optional<std::int64_t> tag = std::nullopt) {
  Sheaf2V f;
  f.module_tag = tag;
  f.value(vertex) = value;
  if (is_a_object(vertex)) {
    std::int64_t r = tag.value_or(1);
    Arrow side = vertex == Obj::A1 ? Arrow::B1A1 : Arrow::B2A2;
    Arrow mid = vertex == Obj::A1 ? Arrow::B3A1 : Arrow::B3A2;
    for (Arrow a : {side, mid}) {
      GradedSpace g = value;
      for (auto& s : g.slots) s.step *= o_exponent(a, r);
      f.value(arrow_source(a)) = g;
    }
    f.sync();
    for (Arrow a : {side, mid})
      for (std::size_t s = 0; s < value.size(); ++s) f.map(a).add(s, {s, 1, 0, 1});
  } else {
    f.sync();
  }
  return f;
}

/// Value at P and its tensored-up value at every Q <= P. Torsion slots at a
/// B_i vertex die at A_i; free slots become Laurent slots.
inline Sheaf2V make_coskyscraper(EdgeCount r, Obj vertex, const GradedSpace& value) {
  Sheaf2V f;
  f.module_tag = r.value();
  f.value(vertex) = value;
  if (is_a_object(vertex)) return f.sync(), f;

  std::vector<Arrow> arrows;
  if (vertex == Obj::B1) arrows = {Arrow::B1A1};
  if (vertex == Obj::B2) arrows = {Arrow::B2A2};
  if (vertex == Obj::B3) arrows = {Arrow::B3A1, Arrow::B3A2};

  std::vector<std::optional<std::size_t>> lifted(value.size());
  std::size_t n = 0;
  for (std::size_t s = 0; s < value.size(); ++s) {
    const Slot& slot = value.slots[s];
    if (slot.support.is_empty()) continue;
    if (vertex == Obj::B3) {
      if (slot.support.kind != SlotSupport::Kind::all || abs64(slot.step) != 1)
        throw InvalidArgument("coskyscraper at B3 needs free k[v,1/v] slots");
    } else if (slot.support.kind == SlotSupport::Kind::finite) {
      continue;
    } else if (slot.step != 1) {
      throw InvalidArgument("coskyscraper at B_i needs unit-step slots");
    }
    lifted[s] = n++;
  }
  for (Arrow a : arrows) f.value(arrow_target(a)) = GradedSpace::laurent(n);
  f.sync();
  for (Arrow a : arrows)
    for (std::size_t s = 0; s < value.size(); ++s)
      if (lifted[s]) f.map(a).add(s, {*lifted[s], o_exponent(a, r) * value.slots[s].step, 0, 1});
  return f;
}

/// The constant sheaf k^n.
inline Sheaf2V make_constant(std::size_t n) {
  Sheaf2V f;
  for (Obj o : kObjects) f.value(o) = {std::vector<Slot>(n, Slot{SlotSupport::finite({0}), 1})};
  f.sync();
  for (Arrow a : kArrows)
    for (std::size_t s = 0; s < n; ++s) f.map(a).add(s, {s, 1, 0, 1});
  return f;
}

namespace detail {

inline std::optional<std::int64_t> common_tag(const Sheaf2V& f, const Sheaf2V& g) {
  if (f.module_tag && g.module_tag && *f.module_tag != *g.module_tag)
    throw InvalidArgument("module tags differ");
  return f.module_tag ? f.module_tag : g.module_tag;
}

}  // namespace detail

inline Sheaf2V direct_sum(const Sheaf2V& f, const Sheaf2V& g) {
  Sheaf2V out;
  out.module_tag = detail::common_tag(f, g);
  for (Obj o : kObjects) out.value(o) = f.value(o) + g.value(o);
  out.sync();
  for (Arrow a : kArrows) {
    std::size_t src_shift = f.value(arrow_source(a)).size();
    std::size_t tgt_shift = f.value(arrow_target(a)).size();
    for (std::size_t s = 0; s < f.map(a).terms.size(); ++s)
      for (auto t : f.map(a).terms[s]) out.map(a).add(s, t);
    for (std::size_t s = 0; s < g.map(a).terms.size(); ++s)
      for (auto t : g.map(a).terms[s]) {
        t.target_slot += tgt_shift;
        out.map(a).add(s + src_shift, t);
      }
    out.map(a).quotient = f.map(a).quotient || g.map(a).quotient;
  }
  return out;
}

/// Tensor product over O for free values: slot (s,t) has index s*|G(P)|+t,
/// exponents add, offsets add, coefficients multiply.
inline Sheaf2V tensor(const Sheaf2V& f, const Sheaf2V& g) {
  if (!f.module_tag || !g.module_tag || *f.module_tag != *g.module_tag)
    throw InvalidArgument("tensor needs two O-modules with the same edge count");
  Sheaf2V out;
  out.module_tag = f.module_tag;
  for (Obj o : kObjects) {
    const auto& fs = f.value(o).slots;
    const auto& gs = g.value(o).slots;
    GradedSpace& v = out.value(o);
    for (const Slot& a : fs)
      for (const Slot& b : gs) {
        if (a.support.kind == SlotSupport::Kind::finite || b.support.kind == SlotSupport::Kind::finite)
          throw InvalidArgument("tensor of torsion values is not supported");
        if (a.support.is_empty() || b.support.is_empty()) {
          v.slots.push_back({SlotSupport::empty(), a.step});
          continue;
        }
        if (a.step != b.step) throw InvalidArgument("tensor: slot steps differ at " + std::string(obj_name(o)));
        bool all = a.support.kind == SlotSupport::Kind::all || b.support.kind == SlotSupport::Kind::all;
        v.slots.push_back({all ? SlotSupport::all() : SlotSupport::nonneg(), a.step});
      }
  }
  out.sync();
  for (Arrow a : kArrows) {
    const auto& fm = f.map(a);
    const auto& gm = g.map(a);
    std::size_t gs = g.value(arrow_source(a)).size();
    std::size_t gt = g.value(arrow_target(a)).size();
    for (std::size_t s = 0; s < fm.terms.size(); ++s)
      for (std::size_t t = 0; t < gm.terms.size(); ++t)
        for (const auto& tf : fm.terms[s])
          for (const auto& tg : gm.terms[t]) {
            if (tf.scale != tg.scale)
              throw InvalidArgument(std::string("tensor: restriction scales differ on ") + arrow_name(a));
            out.map(a).add(s * gs + t, {tf.target_slot * gt + tg.target_slot, tf.scale,
                                        tf.offset + tg.offset, tf.coeff * tg.coeff});
          }
    out.map(a).quotient = fm.quotient || gm.quotient;
  }
  return out;
}

/// Values outside `keep` become zero, as do maps touching them.
inline Sheaf2V restrict_extend_zero(const Sheaf2V& f, const std::set<Obj>& keep) {
  Sheaf2V out = f;
  for (Obj o : kObjects)
    if (!keep.count(o)) out.value(o) = GradedSpace::zero();
  out.sync();
  for (Arrow a : kArrows)
    if (!keep.count(arrow_source(a)) || !keep.count(arrow_target(a)))
      for (auto& t : out.map(a).terms) t.clear();
  return out;
}

// ---------------------------------------------------------------------------
// Structural comparison.

/// perm[P][s] = slot of G matching slot s of F at object P.
struct SlotBijection {
  std::array<std::vector<std::size_t>, 5> perm;
};

namespace detail {

using TermSig = std::vector<std::tuple<std::size_t, std::int64_t, std::int64_t, std::int64_t>>;

inline TermSig term_signature(const std::vector<MonomialTerm>& ts, const std::vector<std::size_t>* perm) {
  TermSig sig;
  for (const auto& t : ts) sig.emplace_back(perm ? (*perm)[t.target_slot] : t.target_slot, t.scale, t.offset, t.coeff);
  std::sort(sig.begin(), sig.end());
  return sig;
}

inline bool match_b_slots(const Sheaf2V& f, const Sheaf2V& g, SlotBijection& bij) {
  for (Obj b : {Obj::B1, Obj::B2, Obj::B3}) {
    std::vector<Arrow> out;
    for (Arrow a : kArrows)
      if (arrow_source(a) == b) out.push_back(a);
    using Sig = std::pair<Slot, std::vector<TermSig>>;
    auto signature = [&](const Sheaf2V& h, std::size_t s, bool remap) {
      Sig sig{h.value(b).slots[s], {}};
      for (Arrow a : out) {
        const auto& perm = bij.perm[idx(arrow_target(a))];
        const auto& ts = s < h.map(a).terms.size() ? h.map(a).terms[s] : std::vector<MonomialTerm>{};
        sig.second.push_back(term_signature(ts, remap ? &perm : nullptr));
      }
      return sig;
    };
    std::size_t n = f.value(b).size();
    std::vector<std::pair<Sig, std::size_t>> fs, gs;
    for (std::size_t s = 0; s < n; ++s) {
      fs.emplace_back(signature(f, s, true), s);
      gs.emplace_back(signature(g, s, false), s);
    }
    std::sort(fs.begin(), fs.end());
    std::sort(gs.begin(), gs.end());
    bij.perm[idx(b)].assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (fs[i].first != gs[i].first) return false;
      bij.perm[idx(b)][fs[i].second] = gs[i].second;
    }
  }
  return true;
}

inline bool assign_a_slots(const Sheaf2V& f, const Sheaf2V& g, SlotBijection& bij, std::size_t obj,
                           std::size_t pos, std::vector<bool>& used) {
  const auto& fs = f.values[obj].slots;
  const auto& gs = g.values[obj].slots;
  if (pos == fs.size()) {
    if (obj == idx(Obj::A1)) {
      std::vector<bool> next(g.value(Obj::A2).size(), false);
      bij.perm[idx(Obj::A2)].assign(f.value(Obj::A2).size(), 0);
      return assign_a_slots(f, g, bij, idx(Obj::A2), 0, next);
    }
    return match_b_slots(f, g, bij);
  }
  for (std::size_t t = 0; t < gs.size(); ++t) {
    if (used[t] || !(fs[pos] == gs[t])) continue;
    used[t] = true;
    bij.perm[obj][pos] = t;
    if (assign_a_slots(f, g, bij, obj, pos + 1, used)) return true;
    used[t] = false;
  }
  return false;
}

}  // namespace detail

/// A slot relabeling under which F and G have identical values and
/// restriction terms, if one exists. Backtracks over A-slot assignments.
inline std::optional<SlotBijection> structural_match(const Sheaf2V& f, const Sheaf2V& g) {
  if (f.module_tag != g.module_tag) return std::nullopt;
  for (Obj o : kObjects)
    if (f.value(o).size() != g.value(o).size()) return std::nullopt;
  for (Arrow a : kArrows)
    if (f.map(a).quotient != g.map(a).quotient) return std::nullopt;
  SlotBijection bij;
  bij.perm[idx(Obj::A1)].assign(f.value(Obj::A1).size(), 0);
  std::vector<bool> used(g.value(Obj::A1).size(), false);
  if (!detail::assign_a_slots(f, g, bij, idx(Obj::A1), 0, used)) return std::nullopt;
  return bij;
}

inline bool structurally_equal(const Sheaf2V& f, const Sheaf2V& g) { return structural_match(f, g).has_value(); }

// ---------------------------------------------------------------------------
// Validation.

struct ValidationReport {
  bool ok = true;
  std::string law;      ///< which invariant failed
  std::string message;  ///< location of the first violating basis vector

  static ValidationReport pass() { return {}; }
  static ValidationReport fail(std::string law, std::string msg) { return {false, std::move(law), std::move(msg)}; }
};

namespace detail {

inline std::string where(const std::string& name, std::size_t slot, std::int64_t e) {
  return name + " slot " + std::to_string(slot) + " exponent " + std::to_string(e);
}

/// Exponents that decide every support question for this slot and term set.
inline std::vector<std::int64_t> scan_exponents(const MonomialMap& m, std::size_t s, std::int64_t extra = 0) {
  std::int64_t bound = 2 + abs64(extra) + m.source.slots[s].support.max_abs_point() + abs64(m.source.slots[s].step);
  for (const auto& t : m.terms[s]) {
    std::int64_t tb = 0;
    if (t.target_slot < m.target.size()) tb = m.target.slots[t.target_slot].support.max_abs_point();
    bound = std::max(bound, 2 + abs64(t.offset) + tb + abs64(extra));
  }
  return m.source.slots[s].support.elements_in(-bound, bound);
}

/// Checks term shape and (for non-quotient maps) that every image lands in the target support.
inline ValidationReport validate_map(const MonomialMap& m, const std::string& name) {
  if (m.terms.size() != m.source.size())
    return ValidationReport::fail("shape", name + ": term lists do not match source slots");
  for (std::size_t s = 0; s < m.terms.size(); ++s) {
    for (const auto& t : m.terms[s]) {
      if (t.target_slot >= m.target.size())
        return ValidationReport::fail("shape", name + " slot " + std::to_string(s) + ": target slot out of range");
      if (t.scale == 0) return ValidationReport::fail("shape", name + " slot " + std::to_string(s) + ": zero scale");
      if (t.coeff == 0) return ValidationReport::fail("shape", name + " slot " + std::to_string(s) + ": zero coefficient");
    }
    if (m.quotient) continue;
    for (auto e : scan_exponents(m, s))
      for (const auto& t : m.terms[s])
        if (!m.target.contains({t.target_slot, t.scale * e + t.offset}))
          return ValidationReport::fail("support", where(name, s, e) + ": image leaves the target support");
  }
  return ValidationReport::pass();
}

/// Module law for one map whose O-exponent is rho: scale*step_src == rho*step_tgt,
/// and generator-killed vectors go to generator-killed vectors.
inline ValidationReport check_module_law(const MonomialMap& m, std::int64_t rho, const std::string& name) {
  for (std::size_t s = 0; s < m.terms.size(); ++s) {
    const Slot& src = m.source.slots[s];
    if (src.support.is_empty()) continue;
    for (const auto& t : m.terms[s]) {
      const Slot& tgt = m.target.slots[t.target_slot];
      if (t.scale * src.step != rho * tgt.step)
        return ValidationReport::fail("module", name + " slot " + std::to_string(s) + ": scale " + std::to_string(t.scale) +
                                                    " incompatible with the structure sheaf");
    }
    for (auto e : scan_exponents(m, s, src.step)) {
      IntCombo lhs;
      if (auto ge = m.source.act({s, e}, 1)) lhs = m.apply(*ge);
      IntCombo rhs;
      for (const auto& [w, c] : m.apply(BasisVec{s, e}))
        if (auto gw = m.target.act(w, rho)) rhs[*gw] += c;
      std::erase_if(rhs, [](const auto& kv) { return kv.second == 0; });
      if (lhs != rhs) return ValidationReport::fail("module", where(name, s, e) + ": not O-linear");
    }
  }
  return ValidationReport::pass();
}

}  // namespace detail

/// Checks every structural invariant, plus the module law when tagged.
inline ValidationReport validate(const Sheaf2V& f) {
  for (Arrow a : kArrows) {
    const auto& m = f.map(a);
    if (!(m.source == f.value(arrow_source(a))) || !(m.target == f.value(arrow_target(a))))
      return ValidationReport::fail("shape", std::string(arrow_name(a)) + ": source/target differ from the values");
    if (auto rep = detail::validate_map(m, arrow_name(a)); !rep.ok) return rep;
  }
  if (f.module_tag) {
    if (*f.module_tag < 1) return ValidationReport::fail("module", "module tag must be >= 1");
    for (Arrow a : kArrows)
      if (auto rep = detail::check_module_law(f.map(a), o_exponent(a, *f.module_tag), arrow_name(a)); !rep.ok)
        return rep;
  }
  return ValidationReport::pass();
}

// ---------------------------------------------------------------------------
// Morphisms.

struct SheafMorphism {
  Sheaf2V source;
  Sheaf2V target;
  std::array<MonomialMap, 5> components;

  const MonomialMap& at(Obj o) const { return components[idx(o)]; }
  MonomialMap& at(Obj o) { return components[idx(o)]; }

  static SheafMorphism zero(Sheaf2V src, Sheaf2V tgt) {
    SheafMorphism m{std::move(src), std::move(tgt), {}};
    for (Obj o : kObjects) m.at(o) = MonomialMap::zero(m.source.value(o), m.target.value(o));
    return m;
  }
  /// Identity components wherever source and target values coincide slot for slot.
  static SheafMorphism identity_like(Sheaf2V src, Sheaf2V tgt) {
    SheafMorphism m = zero(std::move(src), std::move(tgt));
    for (Obj o : kObjects)
      if (m.source.value(o) == m.target.value(o))
        for (std::size_t s = 0; s < m.source.value(o).size(); ++s) m.at(o).add(s, {s, 1, 0, 1});
    return m;
  }
};

/// Components well-formed, squares commute and components are O-linear on
/// every basis vector with |exponent| <= w.
inline ValidationReport validate_morphism(const SheafMorphism& u, std::int64_t w) {
  for (Obj o : kObjects) {
    const auto& c = u.at(o);
    std::string name = std::string("component ") + obj_name(o);
    if (!(c.source == u.source.value(o)) || !(c.target == u.target.value(o)))
      return ValidationReport::fail("shape", name + ": source/target differ from the values");
    if (auto rep = detail::validate_map(c, name); !rep.ok) return rep;
    if (u.source.module_tag && u.target.module_tag)
      if (auto rep = detail::check_module_law(c, 1, name); !rep.ok) return rep;
  }
  for (Arrow a : kArrows) {
    Obj b = arrow_source(a), t = arrow_target(a);
    for (BasisVec v : u.source.value(b).window(w)) {
      IntCombo lhs = u.target.map(a).apply(u.at(b).apply(v));
      IntCombo rhs = u.at(t).apply(u.source.map(a).apply(v));
      if (lhs != rhs)
        return ValidationReport::fail("commute", detail::where(std::string(arrow_name(a)) + " square at " + obj_name(b),
                                                               v.slot, v.exp) +
                                                     ": square does not commute");
    }
  }
  return ValidationReport::pass();
}

/// 0 -> sub -> mid -> quot -> 0 with its two maps.
struct ShortExactSequence {
  Sheaf2V sub, mid, quot;
  SheafMorphism mu, q;
};

/// 0 -> M_d -> M_{d+e_axis} -> Sky(B_axis, k) -> 0; mu multiplies by y at B_axis,
/// q keeps the constant coefficient.
inline ShortExactSequence build_mu_ses(EdgeCount r, Divisor d, int axis) {
  if (axis != 1 && axis != 2) throw InvalidArgument("axis must be 1 or 2");
  Divisor e = axis == 1 ? Divisor{1, 0} : Divisor{0, 1};
  Obj b = axis == 1 ? Obj::B1 : Obj::B2;
  ShortExactSequence ses;
  ses.sub = make_M(r, d);
  ses.mid = make_M(r, d + e);
  ses.quot = make_skyscraper(b, GradedSpace::truncated(1), r.value());
  ses.mu = SheafMorphism::identity_like(ses.sub, ses.mid);
  ses.mu.at(b).terms[0][0].offset = 1;
  ses.q = SheafMorphism::zero(ses.mid, ses.quot);
  ses.q.at(b).add(0, {0, 1, 0, 1});
  ses.q.at(b).quotient = true;
  return ses;
}

}  // namespace grr
