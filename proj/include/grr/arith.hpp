#pragma once

#include <cstdint>
#include <numeric>

namespace grr {

/// floor(a / b) for b != 0.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// ceil(a / b) for b != 0.
constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

/// a mod b in [0, |b|).
constexpr std::int64_t mod_floor(std::int64_t a, std::int64_t b) {
  std::int64_t m = b < 0 ? -b : b;
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

constexpr std::int64_t abs64(std::int64_t a) { return a < 0 ? -a : a; }

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(abs64(a), abs64(b)); }

}  // namespace grr
