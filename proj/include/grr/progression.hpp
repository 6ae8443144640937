#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "grr/arith.hpp"
#include "grr/error.hpp"

namespace grr {

/// A subset of Z that is periodic (with a common period) below `lo` and above
/// `hi`, and arbitrary on [lo, hi]. Closed under finite boolean combinations,
/// which is all the index-set arithmetic of the closed-form engine needs.
class PeriodicSet {
 public:
  PeriodicSet() : period_(1), lo_(0), hi_(-1), left_(1, false), right_(1, false) {}

  static PeriodicSet empty() { return {}; }
  static PeriodicSet all() {
    PeriodicSet s;
    s.left_[0] = s.right_[0] = true;
    return s;
  }
  /// {x : x > t}
  static PeriodicSet above(std::int64_t t) {
    PeriodicSet s;
    s.lo_ = s.hi_ = t;
    s.mid_ = {false};
    s.right_[0] = true;
    return s;
  }
  /// {x : x < t}
  static PeriodicSet below(std::int64_t t) {
    PeriodicSet s;
    s.lo_ = s.hi_ = t;
    s.mid_ = {false};
    s.left_[0] = true;
    return s;
  }
  static PeriodicSet points(const std::vector<std::int64_t>& pts) {
    PeriodicSet s;
    if (pts.empty()) return s;
    s.lo_ = pts.front();
    s.hi_ = pts.front();
    for (auto p : pts) {
      s.lo_ = std::min(s.lo_, p);
      s.hi_ = std::max(s.hi_, p);
    }
    s.mid_.assign(static_cast<std::size_t>(s.hi_ - s.lo_ + 1), false);
    for (auto p : pts) s.mid_[static_cast<std::size_t>(p - s.lo_)] = true;
    return s;
  }
  /// {x : x = c mod m}, m != 0.
  static PeriodicSet residue(std::int64_t c, std::int64_t m) {
    PeriodicSet s;
    s.period_ = abs64(m);
    s.left_.assign(static_cast<std::size_t>(s.period_), false);
    s.right_ = s.left_;
    s.left_[mod_floor(c, m)] = s.right_[mod_floor(c, m)] = true;
    return s;
  }
  /// {b + a*e : e >= 0}, a != 0.
  static PeriodicSet ray(std::int64_t a, std::int64_t b) {
    PeriodicSet s;
    s.period_ = abs64(a);
    s.lo_ = s.hi_ = b;
    s.mid_ = {true};
    s.left_.assign(static_cast<std::size_t>(s.period_), false);
    s.right_ = s.left_;
    (a > 0 ? s.right_ : s.left_)[mod_floor(b, a)] = true;
    return s;
  }

  bool contains(std::int64_t x) const {
    if (x < lo_) return left_[mod_floor(x, period_)];
    if (x > hi_) return right_[mod_floor(x, period_)];
    return mid_[static_cast<std::size_t>(x - lo_)];
  }

  bool is_finite() const {
    for (bool b : left_)
      if (b) return false;
    for (bool b : right_)
      if (b) return false;
    return true;
  }
  bool is_empty() const {
    if (!is_finite()) return false;
    for (bool b : mid_)
      if (b) return false;
    return true;
  }
  /// Cardinality, or nullopt when infinite.
  std::optional<std::int64_t> count() const {
    if (!is_finite()) return std::nullopt;
    std::int64_t n = 0;
    for (bool b : mid_) n += b ? 1 : 0;
    return n;
  }
  std::vector<std::int64_t> finite_elements() const {
    if (!is_finite()) throw InvalidArgument("set is infinite");
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < mid_.size(); ++i)
      if (mid_[i]) out.push_back(lo_ + static_cast<std::int64_t>(i));
    return out;
  }

  template <class Op>
  static PeriodicSet combine(const PeriodicSet& a, const PeriodicSet& b, Op op) {
    PeriodicSet s;
    s.period_ = lcm64(a.period_, b.period_);
    bool a_has = a.lo_ <= a.hi_, b_has = b.lo_ <= b.hi_;
    if (a_has && b_has) {
      s.lo_ = std::min(a.lo_, b.lo_);
      s.hi_ = std::max(a.hi_, b.hi_);
    } else if (a_has) {
      s.lo_ = a.lo_, s.hi_ = a.hi_;
    } else if (b_has) {
      s.lo_ = b.lo_, s.hi_ = b.hi_;
    }
    auto P = static_cast<std::size_t>(s.period_);
    s.left_.assign(P, false);
    s.right_.assign(P, false);
    for (std::int64_t c = 0; c < s.period_; ++c) {
      std::int64_t xl = s.lo_ - s.period_ + mod_floor(c - s.lo_, s.period_);
      std::int64_t xr = s.hi_ + 1 + mod_floor(c - s.hi_ - 1, s.period_);
      s.left_[mod_floor(xl, s.period_)] = op(a.contains(xl), b.contains(xl));
      s.right_[mod_floor(xr, s.period_)] = op(a.contains(xr), b.contains(xr));
    }
    if (s.lo_ <= s.hi_) {
      s.mid_.assign(static_cast<std::size_t>(s.hi_ - s.lo_ + 1), false);
      for (auto x = s.lo_; x <= s.hi_; ++x)
        s.mid_[static_cast<std::size_t>(x - s.lo_)] = op(a.contains(x), b.contains(x));
    }
    return s;
  }

  friend PeriodicSet operator|(const PeriodicSet& a, const PeriodicSet& b) {
    return combine(a, b, [](bool x, bool y) { return x || y; });
  }
  friend PeriodicSet operator&(const PeriodicSet& a, const PeriodicSet& b) {
    return combine(a, b, [](bool x, bool y) { return x && y; });
  }
  friend PeriodicSet operator-(const PeriodicSet& a, const PeriodicSet& b) {
    return combine(a, b, [](bool x, bool y) { return x && !y; });
  }
  PeriodicSet complement() const { return all() - *this; }

  std::int64_t period() const { return period_; }

 private:
  std::int64_t period_;
  std::int64_t lo_, hi_;
  std::vector<bool> left_, right_, mid_;
};

}  // namespace grr
