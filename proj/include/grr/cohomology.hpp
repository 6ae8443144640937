#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "grr/arith.hpp"
#include "grr/divisor.hpp"
#include "grr/error.hpp"
#include "grr/field.hpp"
#include "grr/linalg.hpp"
#include "grr/progression.hpp"
#include "grr/sheaf.hpp"

namespace grr {

/// Finite(n) and Infinite are certified; WindowEstimate is not.
struct BettiValue {
  enum class Kind { finite, infinite, window_estimate };
  Kind kind = Kind::finite;
  std::int64_t n = 0;
  std::int64_t window = 0;

  static BettiValue finite(std::int64_t n) { return {Kind::finite, n, 0}; }
  static BettiValue infinite() { return {Kind::infinite, 0, 0}; }
  static BettiValue estimate(std::int64_t n, std::int64_t w) { return {Kind::window_estimate, n, w}; }

  bool is_finite() const { return kind == Kind::finite; }
  bool is_infinite() const { return kind == Kind::infinite; }
  bool certified() const { return kind != Kind::window_estimate; }

  std::string to_string() const {
    switch (kind) {
      case Kind::finite: return std::to_string(n);
      case Kind::infinite: return "infinite";
      case Kind::window_estimate: return "~" + std::to_string(n) + "@W" + std::to_string(window);
    }
    return "?";
  }
  friend bool operator==(const BettiValue&, const BettiValue&) = default;
};

struct BettiPair {
  BettiValue b0, b1;
  std::string engine;
  std::vector<std::string> witnesses;
};

// ---------------------------------------------------------------------------
// The complex u : F(B1) + F(B2) + F(B3) -> F(A1) + F(A2).

struct ComplexType {
  Obj obj;
  std::size_t slot;
  Slot info;
};

struct ComplexEdge {
  std::size_t source;  ///< index into sources
  std::size_t target;  ///< index into targets
  std::int64_t scale, offset, coeff;
  bool quotient;
};

struct MonomialComplex {
  std::vector<ComplexType> sources, targets;
  std::vector<ComplexEdge> edges;
  std::vector<std::vector<std::size_t>> out_edges;  ///< per source type
  std::vector<std::vector<std::size_t>> in_edges;   ///< per target type

  bool finite() const {
    auto fin = [](const ComplexType& t) { return !t.info.support.infinite(); };
    return std::all_of(sources.begin(), sources.end(), fin) && std::all_of(targets.begin(), targets.end(), fin);
  }
  /// Number of source and target basis vectors, when finite.
  std::optional<std::pair<std::size_t, std::size_t>> basis_counts() const {
    if (!finite()) return std::nullopt;
    std::size_t s = 0, t = 0;
    for (const auto& x : sources) s += x.info.support.points.size();
    for (const auto& x : targets) t += x.info.support.points.size();
    return std::pair{s, t};
  }
};

/// Column of B_i carries +F(A_i,B_i); column of B3 carries -F(A_1,B_3), -F(A_2,B_3).
inline MonomialComplex assemble_u(const Sheaf2V& f) {
  MonomialComplex cx;
  std::array<std::size_t, 5> base{};
  for (Obj o : {Obj::A1, Obj::A2}) {
    base[idx(o)] = cx.targets.size();
    for (std::size_t s = 0; s < f.value(o).size(); ++s) cx.targets.push_back({o, s, f.value(o).slots[s]});
  }
  for (Obj o : {Obj::B1, Obj::B2, Obj::B3}) {
    base[idx(o)] = cx.sources.size();
    for (std::size_t s = 0; s < f.value(o).size(); ++s) cx.sources.push_back({o, s, f.value(o).slots[s]});
  }
  cx.out_edges.resize(cx.sources.size());
  cx.in_edges.resize(cx.targets.size());
  for (Arrow a : kArrows) {
    std::int64_t sign = arrow_source(a) == Obj::B3 ? -1 : 1;
    const auto& m = f.map(a);
    for (std::size_t s = 0; s < m.terms.size(); ++s)
      for (const auto& t : m.terms[s]) {
        ComplexEdge e{base[idx(arrow_source(a))] + s, base[idx(arrow_target(a))] + t.target_slot, t.scale, t.offset,
                      sign * t.coeff, m.quotient};
        cx.out_edges[e.source].push_back(cx.edges.size());
        cx.in_edges[e.target].push_back(cx.edges.size());
        cx.edges.push_back(e);
      }
  }
  return cx;
}

/// Rank of u for a finite complex, by dense enumeration.
template <class Field = RationalField>
std::size_t finite_complex_rank(const MonomialComplex& cx, const Field& field = {}) {
  if (!cx.finite()) throw InvalidArgument("complex is not finite");
  std::map<std::pair<std::size_t, std::int64_t>, std::size_t> rows;
  ColumnReducer<Field> red(field);
  for (std::size_t s = 0; s < cx.sources.size(); ++s)
    for (auto e : cx.sources[s].info.support.points) {
      std::map<std::size_t, typename Field::value_type> col;
      for (auto ei : cx.out_edges[s]) {
        const auto& ed = cx.edges[ei];
        std::int64_t p = ed.scale * e + ed.offset;
        if (!cx.targets[ed.target].info.support.contains(p)) continue;
        auto key = std::pair{ed.target, p};
        auto it = rows.try_emplace(key, rows.size()).first;
        auto& v = col.try_emplace(it->second, field.zero()).first->second;
        v = field.add(v, field.from_int(ed.coeff));
      }
      SparseVec<Field> sv;
      for (auto& [r, v] : col)
        if (!field.is_zero(v)) sv.emplace_back(r, v);
      red.add_column(std::move(sv));
    }
  return red.rank();
}

// ---------------------------------------------------------------------------
// Closed form for partial-line bundles.

struct PlbReport {
  BettiValue b0, b1;
  Divisor twist;
  std::optional<std::int64_t> i1, i2, j1;  ///< nullopt = infinite
};

namespace detail {

inline PeriodicSet affine_image(const SlotSupport& s, std::int64_t a, std::int64_t b) {
  switch (s.kind) {
    case SlotSupport::Kind::all: return PeriodicSet::residue(b, a);
    case SlotSupport::Kind::nonneg: return PeriodicSet::ray(a, b);
    case SlotSupport::Kind::finite: {
      std::vector<std::int64_t> pts;
      for (auto e : s.points) pts.push_back(a * e + b);
      return PeriodicSet::points(pts);
    }
    case SlotSupport::Kind::empty: return PeriodicSet::empty();
  }
  return {};
}

/// {e : a*e + b > d}
inline PeriodicSet exceeds(std::int64_t a, std::int64_t b, std::int64_t d) {
  if (a > 0) return PeriodicSet::above(floor_div(d - b, a));
  return PeriodicSet::below(ceil_div(d - b, a));
}

}  // namespace detail

/// Betti numbers of a partial-line bundle from the coset description of the
/// cokernel: b1 = |I1| + |I2| + |J1|, b0 = |{j : f(j) <= d1, g(j) <= d2}|.
template <class Field = RationalField>
PlbReport betti_closed_form_plb(const Sheaf2V& f, const Field& field = {}) {
  auto fail = [](const std::string& why) { return EngineInapplicable("not a partial-line bundle: " + why); };
  for (Obj o : {Obj::A1, Obj::A2})
    if (f.value(o).size() != 1 || f.value(o).slots[0].support.kind != SlotSupport::Kind::all)
      throw fail(std::string(obj_name(o)) + " is not a single Laurent slot");
  for (Obj o : {Obj::B1, Obj::B2})
    if (f.value(o).size() != 1 || f.value(o).slots[0].support.kind != SlotSupport::Kind::nonneg)
      throw fail(std::string(obj_name(o)) + " is not a single polynomial slot");
  std::int64_t d[2];
  for (Arrow a : {Arrow::B1A1, Arrow::B2A2}) {
    const auto& ts = f.map(a).terms;
    if (ts.size() != 1 || ts[0].size() != 1 || ts[0][0].scale != -1 || field.is_zero(field.from_int(ts[0][0].coeff)))
      throw fail(std::string(arrow_name(a)) + " is not p(y) -> x^d p(1/x)");
    d[a == Arrow::B1A1 ? 0 : 1] = ts[0][0].offset;
  }

  struct Rule {
    SlotSupport support;
    std::int64_t a1, b1, a2, b2;
  };
  std::vector<Rule> rules;
  const auto& b3 = f.value(Obj::B3);
  for (std::size_t s = 0; s < b3.size(); ++s) {
    const auto& t1 = f.map(Arrow::B3A1).terms[s];
    const auto& t2 = f.map(Arrow::B3A2).terms[s];
    if (b3.slots[s].support.is_empty()) continue;
    if (t1.size() != 1 || t2.size() != 1) throw fail("B3 slot " + std::to_string(s) + " is not a single monomial on each side");
    if (field.is_zero(field.from_int(t1[0].coeff)) || field.is_zero(field.from_int(t2[0].coeff)))
      throw fail("B3 slot " + std::to_string(s) + " has a coefficient vanishing in " + field.name());
    rules.push_back({b3.slots[s].support, t1[0].scale, t1[0].offset, t2[0].scale, t2[0].offset});
  }

  PeriodicSet im_f, im_g;
  for (const auto& r : rules) {
    PeriodicSet pf = detail::affine_image(r.support, r.a1, r.b1);
    PeriodicSet pg = detail::affine_image(r.support, r.a2, r.b2);
    if (!(im_f & pf).is_empty()) throw fail("f is not injective");
    if (!(im_g & pg).is_empty()) throw fail("g is not injective");
    im_f = im_f | pf;
    im_g = im_g | pg;
  }

  PlbReport rep;
  rep.twist = {d[0], d[1]};
  rep.i1 = (PeriodicSet::above(d[0]) - im_f).count();
  rep.i2 = (PeriodicSet::above(d[1]) - im_g).count();
  std::optional<std::int64_t> j1 = 0, b0 = 0;
  for (const auto& r : rules) {
    PeriodicSet s = r.support.as_set();
    PeriodicSet hi1 = detail::exceeds(r.a1, r.b1, d[0]);
    PeriodicSet hi2 = detail::exceeds(r.a2, r.b2, d[1]);
    auto cj = (s & hi1 & hi2).count();
    auto c0 = (s - hi1 - hi2).count();
    j1 = (j1 && cj) ? std::optional(*j1 + *cj) : std::nullopt;
    b0 = (b0 && c0) ? std::optional(*b0 + *c0) : std::nullopt;
  }
  rep.j1 = j1;
  rep.b0 = b0 ? BettiValue::finite(*b0) : BettiValue::infinite();
  rep.b1 = (rep.i1 && rep.i2 && rep.j1) ? BettiValue::finite(*rep.i1 + *rep.i2 + *rep.j1) : BettiValue::infinite();
  return rep;
}

/// Explicit basis of global sections of M_{r,d}: the (i, n) with
/// n(r,-r) + (i-1,i-1) <= d, read off the sheaf's B3 rules.
inline std::vector<LatticePoint> global_section_basis_M(EdgeCount r, Divisor d) {
  Sheaf2V m = make_M(r, d);
  std::vector<LatticePoint> out;
  std::int64_t bound = ceil_div(abs64(d.d1) + abs64(d.d2), r) + 1;
  for (std::size_t j = 0; j < m.value(Obj::B3).size(); ++j) {
    const auto& t1 = m.map(Arrow::B3A1).terms[j][0];
    const auto& t2 = m.map(Arrow::B3A2).terms[j][0];
    for (std::int64_t n = -bound; n <= bound; ++n)
      if (t1.scale * n + t1.offset <= d.d1 && t2.scale * n + t2.offset <= d.d2)
        out.push_back({static_cast<std::int64_t>(j) + 1, n});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Component walker.

struct ComponentInfo {
  enum class Kind { path, cycle, ray_source, ray_target, line };
  Kind kind = Kind::path;
  std::int64_t sources = 0, targets = 0;  ///< finite components only
  std::int64_t b0 = 0, b1 = 0;
  unsigned objects = 0;  ///< bit idx(Obj) set when the component meets that object
  bool meets(Obj o) const { return (objects >> idx(o)) & 1u; }
};

inline const char* component_kind_name(ComponentInfo::Kind k) {
  switch (k) {
    case ComponentInfo::Kind::path: return "path";
    case ComponentInfo::Kind::cycle: return "cycle";
    case ComponentInfo::Kind::ray_source: return "ray-source-leaf";
    case ComponentInfo::Kind::ray_target: return "ray-target-leaf";
    case ComponentInfo::Kind::line: return "line";
  }
  return "?";
}

struct WalkerReport {
  BettiValue b0, b1;
  std::vector<ComponentInfo> components;  ///< components meeting the band
  std::vector<std::string> periodic_classes;  ///< far-region classes that contribute (infinitely often)
  std::int64_t period = 1, band = 0;
};

namespace detail {

template <class Field>
class Walker {
 public:
  using value_type = typename Field::value_type;

  Walker(const MonomialComplex& cx, const Field& field) : cx_(cx), field_(field) {
    ns_ = cx.sources.size();
    nt_ = cx.targets.size();
    compute_weights();
  }

  WalkerReport run() {
    WalkerReport rep;
    rep.period = lambda_;
    rep.band = k1_;
    bool inf0 = false, inf1 = false;
    std::int64_t b0 = 0, b1 = 0;

    for (std::size_t ty = 0; ty < ns_ + nt_; ++ty) {
      const SlotSupport& sup = info(ty).support;
      if (sup.is_empty()) continue;
      std::int64_t w = w_[ty];
      std::int64_t lo = -k1_ * lambda_, hi = (k1_ + 1) * lambda_ - 1;
      std::int64_t elo = w > 0 ? ceil_div(lo, w) : ceil_div(hi, w);
      std::int64_t ehi = w > 0 ? floor_div(hi, w) : floor_div(lo, w);
      for (auto e : sup.elements_in(elo, ehi)) {
        Node n{ty, e};
        if (visited_.count(n)) continue;
        Walk walk = walk_component(n, Mode::exact);
        ComponentInfo ci = classify(walk);
        b0 += ci.b0;
        b1 += ci.b1;
        rep.components.push_back(ci);
      }
    }

    for (Mode mode : {Mode::far_pos, Mode::far_neg}) {
      for (std::size_t ty = 0; ty < ns_ + nt_; ++ty) {
        if (!alive(ty, mode)) continue;
        std::int64_t w = w_[ty];
        // exponents with 0 <= w*e < lambda (far_pos) or -lambda < w*e <= 0 (far_neg)
        std::int64_t lo = mode == Mode::far_pos ? 0 : -lambda_ + 1;
        std::int64_t hi = mode == Mode::far_pos ? lambda_ - 1 : 0;
        std::int64_t elo = w > 0 ? ceil_div(lo, w) : ceil_div(hi, w);
        std::int64_t ehi = w > 0 ? floor_div(hi, w) : floor_div(lo, w);
        for (auto e = elo; e <= ehi; ++e) {
          visited_.clear();
          Walk walk = walk_component({ty, e}, mode);
          if (walk.inward) continue;
          ComponentInfo ci = classify(walk);
          if (ci.b0 > 0) inf0 = true;
          if (ci.b1 > 0) inf1 = true;
          if (ci.b0 > 0 || ci.b1 > 0)
            rep.periodic_classes.push_back(std::string(mode == Mode::far_pos ? "+" : "-") + component_kind_name(ci.kind) +
                                           " at " + describe({ty, e}));
        }
      }
    }
    rep.b0 = inf0 ? BettiValue::infinite() : BettiValue::finite(b0);
    rep.b1 = inf1 ? BettiValue::infinite() : BettiValue::finite(b1);
    return rep;
  }

 private:
  enum class Mode { exact, far_pos, far_neg };

  struct Node {
    std::size_t type;
    std::int64_t exp;
    friend bool operator==(const Node&, const Node&) = default;
  };
  struct NodeHash {
    std::size_t operator()(const Node& n) const {
      return std::hash<std::int64_t>()(n.exp * 1000003 + static_cast<std::int64_t>(n.type));
    }
  };
  struct Neighbor {
    Node node;
    value_type coeff;  ///< entry of u between the source and the target
  };

  enum class End { leaf, outward, inward, closed };

  struct Walk {
    std::vector<Node> nodes;             ///< in path order when finite
    std::vector<value_type> edge_coeff;  ///< entry between nodes[i] and nodes[i+1] (and last->first on cycles)
    End ends[2] = {End::leaf, End::leaf};
    bool cycle = false;
    bool inward = false;
    Node end_nodes[2]{};
  };

  bool is_source(std::size_t ty) const { return ty < ns_; }
  const Slot& info(std::size_t ty) const { return is_source(ty) ? cx_.sources[ty].info : cx_.targets[ty - ns_].info; }
  Obj obj(std::size_t ty) const { return is_source(ty) ? cx_.sources[ty].obj : cx_.targets[ty - ns_].obj; }

  std::string describe(Node n) const {
    return std::string(obj_name(obj(n.type))) + "[" +
           std::to_string(is_source(n.type) ? cx_.sources[n.type].slot : cx_.targets[n.type - ns_].slot) + "]^" +
           std::to_string(n.exp);
  }

  bool alive(std::size_t ty, Mode m) const {
    const auto& s = info(ty).support;
    if (m == Mode::exact) return !s.is_empty();
    if (s.kind == SlotSupport::Kind::all) return true;
    if (s.kind == SlotSupport::Kind::nonneg) return (w_[ty] > 0) == (m == Mode::far_pos);
    return false;
  }
  bool present(Node n, Mode m) const {
    if (m == Mode::exact) return info(n.type).support.contains(n.exp);
    return alive(n.type, m);
  }

  std::int64_t position(Node n) const { return w_[n.type] * n.exp; }
  std::int64_t level(Node n) const { return floor_div(position(n), lambda_); }

  void compute_weights() {
    std::size_t n = ns_ + nt_;
    std::vector<std::optional<Rational>> w(n);
    std::vector<std::vector<std::pair<std::size_t, const ComplexEdge*>>> adj(n);
    for (const auto& e : cx_.edges) {
      if (field_.is_zero(field_.from_int(e.coeff))) continue;
      adj[e.source].push_back({ns_ + e.target, &e});
      adj[ns_ + e.target].push_back({e.source, &e});
    }
    for (std::size_t root = 0; root < n; ++root) {
      if (w[root]) continue;
      w[root] = Rational(1);
      std::vector<std::size_t> stack{root};
      while (!stack.empty()) {
        std::size_t u = stack.back();
        stack.pop_back();
        for (auto [v, e] : adj[u]) {
          // w_source = scale * w_target
          Rational want = is_source(u) ? *w[u] / e->scale : *w[u] * e->scale;
          if (!w[v]) {
            w[v] = want;
            stack.push_back(v);
          } else if (*w[v] != want) {
            throw EngineInapplicable("walker: exponent rules admit no consistent translation weights");
          }
        }
      }
    }
    std::int64_t den = 1;
    for (auto& x : w) den = lcm64(den, static_cast<std::int64_t>(boost::multiprecision::denominator(*x)));
    w_.resize(n);
    lambda_ = 1;
    for (std::size_t i = 0; i < n; ++i) {
      Rational v = *w[i] * den;
      w_[i] = static_cast<std::int64_t>(boost::multiprecision::numerator(v));
      lambda_ = lcm64(lambda_, w_[i]);
    }
    std::int64_t k0 = 2;
    for (std::size_t i = 0; i < n; ++i)
      for (auto p : info(i).support.points) k0 = std::max(k0, 2 + abs64(floor_div(w_[i] * p, lambda_)));
    std::int64_t c = 1;
    for (const auto& e : cx_.edges) c = std::max(c, 1 + ceil_div(abs64(w_[ns_ + e.target] * e.offset), lambda_));
    k1_ = k0 + c + 1;
  }

  /// Neighbours with their nonzero u-entries; degree above two is an error.
  std::vector<Neighbor> neighbors(Node n, Mode m) const {
    std::vector<Neighbor> out;
    if (is_source(n.type)) {
      for (const auto& [t, c] : column(n, m)) out.push_back({t, c});
    } else {
      std::size_t tt = n.type - ns_;
      for (auto ei : cx_.in_edges[tt]) {
        const auto& e = cx_.edges[ei];
        std::int64_t diff = n.exp - e.offset;
        if (diff % e.scale != 0) continue;
        Node s{e.source, diff / e.scale};
        if (!present(s, m)) continue;
        if (std::any_of(out.begin(), out.end(), [&](const Neighbor& x) { return x.node == s; })) continue;
        for (const auto& [t, c] : column(s, m))
          if (t == n) out.push_back({s, c});
      }
    }
    if (out.size() > 2)
      throw EngineInapplicable("walker: incidence degree " + std::to_string(out.size()) + " at " + describe(n));
    return out;
  }

  std::vector<std::pair<Node, value_type>> column(Node s, Mode m) const {
    std::vector<std::pair<Node, value_type>> col;
    for (auto ei : cx_.out_edges[s.type]) {
      const auto& e = cx_.edges[ei];
      Node t{ns_ + e.target, e.scale * s.exp + e.offset};
      if (!present(t, m)) continue;
      value_type c = field_.from_int(e.coeff);
      auto it = std::find_if(col.begin(), col.end(), [&](const auto& x) { return x.first == t; });
      if (it == col.end())
        col.emplace_back(t, c);
      else
        it->second = field_.add(it->second, c);
    }
    std::erase_if(col, [&](const auto& x) { return field_.is_zero(x.second); });
    return col;
  }

  /// Walks from `start` in one direction until a leaf, the start again, or a
  /// certified infinite drift.
  End walk_direction(Node start, Neighbor first, Mode m, std::vector<Node>& nodes,
                     std::vector<value_type>& coeffs, Node& end_node) {
    struct QKey {
      std::size_t type, prev_type;
      std::int64_t res, prev_res;
      auto operator<=>(const QKey&) const = default;
    };
    std::map<QKey, std::int64_t> seen;
    Node prev = start;
    Node cur = first.node;
    coeffs.push_back(first.coeff);
    constexpr std::size_t kStepCap = 50'000'000;
    for (std::size_t step = 0; step < kStepCap; ++step) {
      if (cur == start) return End::closed;
      nodes.push_back(cur);
      if (m == Mode::exact) visited_.insert(cur);
      auto nb = neighbors(cur, m);
      if (nb.size() <= 1) {
        end_node = cur;
        return End::leaf;
      }
      const Neighbor& next = nb[0].node == prev ? nb[1] : nb[0];

      int side = 0;
      if (m == Mode::far_pos) side = 1;
      if (m == Mode::far_neg) side = -1;
      if (m == Mode::exact) {
        std::int64_t lv = level(cur);
        side = lv > k1_ ? 1 : (lv < -k1_ ? -1 : 0);
      }
      if (side == 0) {
        seen.clear();
      } else {
        auto mod = [&](Node x) { return mod_floor(x.exp, lambda_ / abs64(w_[x.type])); };
        QKey key{cur.type, prev.type, mod(cur), mod(prev)};
        std::int64_t pos = position(cur);
        auto [it, fresh] = seen.try_emplace(key, pos);
        if (!fresh) {
          std::int64_t drift = (pos - it->second) * side;
          if (drift > 0) return End::outward;
          if (m != Mode::exact) return End::inward;
          it->second = pos;
        }
      }
      coeffs.push_back(next.coeff);
      prev = cur;
      cur = next.node;
    }
    throw EngineInapplicable("walker: step cap exceeded");
  }

  Walk walk_component(Node start, Mode m) {
    Walk w;
    if (m == Mode::exact) visited_.insert(start);
    auto nb = neighbors(start, m);
    std::vector<Node> fwd, bwd;
    std::vector<value_type> cf, cb;
    w.end_nodes[0] = w.end_nodes[1] = start;
    if (nb.empty()) {
      w.nodes = {start};
      return w;
    }
    w.ends[0] = walk_direction(start, nb[0], m, fwd, cf, w.end_nodes[0]);
    if (w.ends[0] == End::closed) {
      w.cycle = true;
      w.nodes = {start};
      w.nodes.insert(w.nodes.end(), fwd.begin(), fwd.end());
      w.edge_coeff = cf;
      return w;
    }
    if (nb.size() == 2) {
      w.ends[1] = walk_direction(start, nb[1], m, bwd, cb, w.end_nodes[1]);
    } else {
      w.ends[1] = End::leaf;
    }
    w.inward = w.ends[0] == End::inward || w.ends[1] == End::inward;
    w.nodes.assign(bwd.rbegin(), bwd.rend());
    w.nodes.push_back(start);
    w.nodes.insert(w.nodes.end(), fwd.begin(), fwd.end());
    return w;
  }

  ComponentInfo classify(const Walk& w) const {
    ComponentInfo ci;
    for (const auto& n : w.nodes) {
      (is_source(n.type) ? ci.sources : ci.targets)++;
      ci.objects |= 1u << idx(obj(n.type));
    }
    if (w.cycle) {
      ci.kind = ComponentInfo::Kind::cycle;
      // nodes alternate; each source sits between its two targets
      value_type hol = field_.one();
      std::size_t len = w.nodes.size();
      for (std::size_t i = 0; i < len; ++i) {
        if (!is_source(w.nodes[i].type)) continue;
        const value_type& alpha = w.edge_coeff[(i + len - 1) % len];  // entry to previous target
        const value_type& beta = w.edge_coeff[i];                     // entry to next target
        hol = field_.mul(hol, field_.neg(field_.div(alpha, beta)));
      }
      bool one = field_.is_zero(field_.sub(hol, field_.one()));
      ci.b0 = ci.b1 = one ? 1 : 0;
      return ci;
    }
    int infinite = (w.ends[0] == End::outward) + (w.ends[1] == End::outward);
    if (infinite == 0) {
      ci.kind = ComponentInfo::Kind::path;
      ci.b0 = std::max<std::int64_t>(0, ci.sources - ci.targets);
      ci.b1 = std::max<std::int64_t>(0, ci.targets - ci.sources);
    } else if (infinite == 2) {
      ci.kind = ComponentInfo::Kind::line;
      ci.b1 = 1;
    } else {
      Node leaf = w.ends[0] == End::outward ? w.end_nodes[1] : w.end_nodes[0];
      bool src = is_source(leaf.type);
      ci.kind = src ? ComponentInfo::Kind::ray_source : ComponentInfo::Kind::ray_target;
      ci.b1 = src ? 0 : 1;
    }
    if (infinite) ci.sources = ci.targets = 0;
    return ci;
  }

  const MonomialComplex& cx_;
  const Field& field_;
  std::size_t ns_ = 0, nt_ = 0;
  std::vector<std::int64_t> w_;
  std::int64_t lambda_ = 1, k1_ = 0;
  std::unordered_set<Node, NodeHash> visited_;
};

}  // namespace detail

/// Exact Betti numbers by decomposing the incidence graph of u (every vertex
/// of degree <= 2) into paths, cycles and rays, with translation-periodic
/// families in the far regions certified by residue classes.
template <class Field = RationalField>
WalkerReport betti_walker(const Sheaf2V& f, const Field& field = {}) {
  MonomialComplex cx = assemble_u(f);
  detail::Walker<Field> w(cx, field);
  return w.run();
}

// ---------------------------------------------------------------------------
// Window engine and certified dispatch.

/// Certified Betti numbers: closed form when applicable, otherwise the walker.
template <class Field = RationalField>
BettiPair betti_certified(const Sheaf2V& f, const Field& field = {}) {
  try {
    auto p = betti_closed_form_plb(f, field);
    return {p.b0, p.b1, "closed", {}};
  } catch (const EngineInapplicable&) {
  }
  auto w = betti_walker(f, field);
  return {w.b0, w.b1, "walker", w.periodic_classes};
}

template <class Field = RationalField>
struct WindowCounts {
  std::int64_t sources = 0, targets = 0, rank = 0;
  std::int64_t kernel() const { return sources - rank; }
  std::int64_t cokernel() const { return targets - rank; }
};

/// Truncated complex: sources all of whose images lie in [-w, w], targets in [-w, w].
template <class Field = RationalField>
WindowCounts<Field> window_counts(const MonomialComplex& cx, std::int64_t w, const Field& field = {}) {
  WindowCounts<Field> out;
  std::map<std::pair<std::size_t, std::int64_t>, std::size_t> rows;
  for (std::size_t t = 0; t < cx.targets.size(); ++t)
    for (auto e : cx.targets[t].info.support.elements_in(-w, w)) rows.emplace(std::pair{t, e}, rows.size());
  out.targets = static_cast<std::int64_t>(rows.size());

  std::set<std::pair<std::size_t, std::int64_t>> cand;
  for (std::size_t s = 0; s < cx.sources.size(); ++s)
    for (auto e : cx.sources[s].info.support.elements_in(-w, w)) cand.emplace(s, e);
  for (const auto& ed : cx.edges)
    for (auto p : cx.targets[ed.target].info.support.elements_in(-w, w)) {
      std::int64_t diff = p - ed.offset;
      if (diff % ed.scale == 0 && cx.sources[ed.source].info.support.contains(diff / ed.scale))
        cand.emplace(ed.source, diff / ed.scale);
    }

  ColumnReducer<Field> red(field);
  for (const auto& [s, e] : cand) {
    std::map<std::size_t, typename Field::value_type> col;
    bool inside = true;
    for (auto ei : cx.out_edges[s]) {
      const auto& ed = cx.edges[ei];
      std::int64_t p = ed.scale * e + ed.offset;
      if (!cx.targets[ed.target].info.support.contains(p)) {
        if (ed.quotient) continue;
        inside = false;
        break;
      }
      auto it = rows.find({ed.target, p});
      if (it == rows.end()) {
        inside = false;
        break;
      }
      auto& v = col.try_emplace(it->second, field.zero()).first->second;
      v = field.add(v, field.from_int(ed.coeff));
    }
    if (!inside) continue;
    SparseVec<Field> sv;
    for (auto& [r, v] : col)
      if (!field.is_zero(v)) sv.emplace_back(r, v);
    red.add_column(std::move(sv));
    ++out.sources;
  }
  out.rank = static_cast<std::int64_t>(red.rank());
  return out;
}

/// Windowed rank computation. The kernel is a certified lower bound for b0;
/// it is promoted to Finite when stable between w and 2w and a certifying
/// engine agrees. b1 is never certified unless the whole complex lies in the window.
template <class Field = RationalField>
BettiPair betti_window(const Sheaf2V& f, std::int64_t w, const Field& field = {}) {
  if (w < 1) throw InvalidArgument("window must be >= 1");
  MonomialComplex cx = assemble_u(f);
  auto c = window_counts(cx, w, field);
  if (c.sources + c.targets == 0) {
    if (f.is_zero()) return {BettiValue::finite(0), BettiValue::finite(0), "window", {}};
    throw InvalidArgument("window " + std::to_string(w) + " contains no basis vector");
  }
  bool contained = cx.finite();
  for (const auto* list : {&cx.sources, &cx.targets})
    for (const auto& t : *list)
      for (auto p : t.info.support.points) contained = contained && abs64(p) <= w;
  if (contained) return {BettiValue::finite(c.kernel()), BettiValue::finite(c.cokernel()), "window", {}};

  BettiPair out{BettiValue::estimate(c.kernel(), w), BettiValue::estimate(c.cokernel(), w), "window", {}};
  auto c2 = window_counts(cx, 2 * w, field);
  if (c2.kernel() == c.kernel()) {
    try {
      auto cert = betti_certified(f, field);
      if (cert.b0 == BettiValue::finite(c.kernel())) {
        out.b0 = cert.b0;
        out.witnesses.push_back("b0 confirmed by " + cert.engine);
      }
    } catch (const EngineInapplicable&) {
    }
  }
  return out;
}

/// closed -> walker -> window(w).
template <class Field = RationalField>
BettiPair betti_auto(const Sheaf2V& f, const Field& field = {}, std::int64_t w = 32) {
  try {
    return betti_certified(f, field);
  } catch (const EngineInapplicable&) {
  }
  return betti_window(f, w, field);
}

/// b0 - b1 from certified engines.
template <class Field = RationalField>
std::int64_t euler_char(const Sheaf2V& f, const Field& field = {}) {
  auto p = betti_certified(f, field);
  if (!p.b0.is_finite() || !p.b1.is_finite())
    throw EngineInapplicable("Euler characteristic needs finite certified Betti numbers (got b0=" + p.b0.to_string() +
                             ", b1=" + p.b1.to_string() + ")");
  return p.b0.n - p.b1.n;
}

struct LesReport {
  bool pass = false;
  std::array<std::pair<std::int64_t, std::int64_t>, 3> betti{};  ///< (b0, b1) of sub, mid, quot
  std::int64_t alternating_sum = 0;
  std::string message;
};

/// Alternating-sum exactness and chi additivity for 0 -> F1 -> F2 -> F3 -> 0.
template <class Field = RationalField>
LesReport verify_les_additivity(const ShortExactSequence& ses, const Field& field = {}) {
  LesReport rep;
  const Sheaf2V* terms[3] = {&ses.sub, &ses.mid, &ses.quot};
  for (int i = 0; i < 3; ++i) {
    auto p = betti_certified(*terms[i], field);
    if (!p.b0.is_finite() || !p.b1.is_finite())
      throw EngineInapplicable("long exact sequence check needs finite certified Betti numbers");
    rep.betti[i] = {p.b0.n, p.b1.n};
  }
  const auto& b = rep.betti;
  rep.alternating_sum = b[0].first - b[1].first + b[2].first - b[0].second + b[1].second - b[2].second;
  std::int64_t chi[3];
  for (int i = 0; i < 3; ++i) chi[i] = b[i].first - b[i].second;
  rep.pass = rep.alternating_sum == 0 && chi[1] == chi[0] + chi[2];
  if (!rep.pass)
    rep.message = "alternating sum " + std::to_string(rep.alternating_sum) + ", chi " + std::to_string(chi[0]) + " + " +
                  std::to_string(chi[2]) + " vs " + std::to_string(chi[1]);
  return rep;
}

}  // namespace grr
