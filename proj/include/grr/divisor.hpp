#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "grr/arith.hpp"
#include "grr/error.hpp"

/// Divisor combinatorics on the graph with two vertices joined by r edges.
namespace grr {

/// Number of parallel edges, r >= 1.
class EdgeCount {
 public:
  explicit EdgeCount(std::int64_t r) : r_(r) {
    if (r < 1) throw InvalidArgument("edge count must be >= 1, got " + std::to_string(r));
  }
  std::int64_t value() const { return r_; }
  operator std::int64_t() const { return r_; }

 private:
  std::int64_t r_;
};

struct Divisor {
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;

  std::int64_t degree() const { return d1 + d2; }
  bool effective() const { return d1 >= 0 && d2 >= 0; }

  friend Divisor operator+(Divisor a, Divisor b) { return {a.d1 + b.d1, a.d2 + b.d2}; }
  friend Divisor operator-(Divisor a, Divisor b) { return {a.d1 - b.d1, a.d2 - b.d2}; }
  friend bool operator==(Divisor a, Divisor b) = default;
  friend auto operator<=>(Divisor a, Divisor b) = default;
  friend std::ostream& operator<<(std::ostream& os, Divisor d) {
    return os << '(' << d.d1 << ',' << d.d2 << ')';
  }
};

/// The point n*(r,-r) + (i-1, i-1) of the lattice L_r, 1 <= i <= r.
struct LatticePoint {
  std::int64_t i = 1;
  std::int64_t n = 0;

  Divisor point(EdgeCount r) const { return {n * r + i - 1, -n * r + i - 1}; }
  friend bool operator==(LatticePoint, LatticePoint) = default;
  friend auto operator<=>(LatticePoint, LatticePoint) = default;
};

/// Closed rectangle of divisors.
struct DivisorBox {
  std::int64_t d1_lo = 0, d1_hi = 0, d2_lo = 0, d2_hi = 0;

  static DivisorBox square(std::int64_t lo, std::int64_t hi) { return {lo, hi, lo, hi}; }
  bool empty() const { return d1_lo > d1_hi || d2_lo > d2_hi; }
  std::int64_t size() const { return empty() ? 0 : (d1_hi - d1_lo + 1) * (d2_hi - d2_lo + 1); }

  /// Calls fn(Divisor) row-major: d2 outer, d1 inner, both ascending.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (auto d2 = d2_lo; d2 <= d2_hi; ++d2)
      for (auto d1 = d1_lo; d1 <= d1_hi; ++d1) fn(Divisor{d1, d2});
  }
};

/// K_r = (r-2, r-2).
inline Divisor canonical_divisor(EdgeCount r) { return {r - 2, r - 2}; }

struct Normalized {
  Divisor divisor;
  std::int64_t shift = 0;  ///< d' = d + shift*(r,-r)
};

/// The unique equivalent divisor with 0 <= d2 <= r-1.
inline Normalized normalize(EdgeCount r, Divisor d) {
  std::int64_t m = floor_div(d.d2, r);
  return {{d.d1 + m * r, d.d2 - m * r}, m};
}

/// Baker-Norine rank from the three-case closed form on the normalized divisor.
inline std::int64_t grrr_closed(EdgeCount r, Divisor d) {
  Divisor n = normalize(r, d).divisor;
  if (n.d1 <= -1) return -1;
  if (n.d1 <= r - 1) return std::min(n.d1, n.d2);
  return n.d1 + n.d2 - r + 1;
}

namespace detail {

inline std::int64_t shift_bound(EdgeCount r, Divisor d) {
  return ceil_div(abs64(d.d1) + abs64(d.d2), r) + 1;
}

inline bool effective_equivalent(EdgeCount r, Divisor d) {
  std::int64_t bound = shift_bound(r, d);
  for (std::int64_t m = -bound; m <= bound; ++m)
    if (d.d1 + m * r >= 0 && d.d2 - m * r >= 0) return true;
  return false;
}

}  // namespace detail

inline constexpr std::int64_t kDefaultBruteforceBudget = 400;

/// Rank straight from the definition: search over shifts by (r,-r) and over
/// every effective subtraction of each total size k.
inline std::int64_t grrr_bruteforce(EdgeCount r, Divisor d,
                                    std::int64_t budget = kDefaultBruteforceBudget) {
  if (abs64(d.d1) + abs64(d.d2) > budget)
    throw BudgetExceeded("|d1|+|d2| = " + std::to_string(abs64(d.d1) + abs64(d.d2)) +
                         " exceeds brute-force budget " + std::to_string(budget));
  if (!detail::effective_equivalent(r, d)) return -1;
  for (std::int64_t k = 1; k <= d.degree() + 1; ++k) {
    for (std::int64_t m1 = 0; m1 <= k; ++m1) {
      if (!detail::effective_equivalent(r, d - Divisor{m1, k - m1})) return k - 1;
    }
  }
  return d.degree();  // unreachable: level deg+1 always fails
}

/// Rank from the inductive description: -1 unless effective up to
/// equivalence, else 1 + min over the two unit subtractions.
inline std::int64_t grrr_recursive(EdgeCount r, Divisor d) {
  std::map<Divisor, std::int64_t> memo;
  auto rec = [&](auto&& self, Divisor e) -> std::int64_t {
    if (e.degree() < 0) return -1;
    if (e.degree() == 0) return mod_floor(e.d1, r) == 0 ? 0 : -1;
    if (auto it = memo.find(e); it != memo.end()) return it->second;
    if (!detail::effective_equivalent(r, e)) return memo[e] = -1;
    std::int64_t v = 1 + std::min(self(self, e - Divisor{1, 0}), self(self, e - Divisor{0, 1}));
    memo.emplace(e, v);
    return v;
  };
  return rec(rec, d);
}

/// L_r intersected with the down cone of d, by enumeration.
inline std::vector<LatticePoint> down_cone_points(EdgeCount r, Divisor d) {
  std::vector<LatticePoint> out;
  std::int64_t bound = detail::shift_bound(r, d);
  for (std::int64_t n = -bound; n <= bound; ++n)
    for (std::int64_t i = 1; i <= r; ++i) {
      Divisor p = LatticePoint{i, n}.point(r);
      if (p.d1 <= d.d1 && p.d2 <= d.d2) out.push_back({i, n});
    }
  return out;
}

inline std::int64_t lat_count(EdgeCount r, Divisor d) {
  return static_cast<std::int64_t>(down_cone_points(r, d).size());
}

/// Divisors of the box with rank exactly `level`, row-major.
inline std::vector<Divisor> level_set_points(EdgeCount r, std::int64_t level, const DivisorBox& box) {
  std::vector<Divisor> out;
  box.for_each([&](Divisor d) {
    if (grrr_closed(r, d) == level) out.push_back(d);
  });
  return out;
}

}  // namespace grr
