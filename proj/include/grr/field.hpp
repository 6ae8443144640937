#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "grr/error.hpp"

namespace grr {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

/// Exact rational arithmetic. Every engine is a template over a field object
/// with this interface; elements are plain values.
struct RationalField {
  using value_type = Rational;

  value_type from_int(std::int64_t v) const { return value_type(v); }
  value_type zero() const { return value_type(0); }
  value_type one() const { return value_type(1); }
  bool is_zero(const value_type& a) const { return a == 0; }
  bool is_one(const value_type& a) const { return a == 1; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type inv(const value_type& a) const {
    if (a == 0) throw InvalidArgument("division by zero in Q");
    return value_type(1) / a;
  }
  value_type div(const value_type& a, const value_type& b) const { return mul(a, inv(b)); }
  std::string name() const { return "q"; }
};

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// The prime field F_p, p < 2^32 so products fit in 64 bits.
struct PrimeField {
  using value_type = std::uint64_t;

  std::uint64_t p;

  explicit PrimeField(std::uint64_t prime = 1000003) : p(prime) {
    if (!is_prime(p) || p >= (std::uint64_t{1} << 32))
      throw InvalidArgument("modulus " + std::to_string(p) + " is not a prime below 2^32");
  }

  value_type from_int(std::int64_t v) const {
    auto m = static_cast<std::int64_t>(p);
    auto r = v % m;
    return static_cast<value_type>(r < 0 ? r + m : r);
  }
  value_type zero() const { return 0; }
  value_type one() const { return 1 % p; }
  bool is_zero(value_type a) const { return a == 0; }
  bool is_one(value_type a) const { return a == 1; }
  value_type add(value_type a, value_type b) const { return (a + b) % p; }
  value_type sub(value_type a, value_type b) const { return (a + p - b) % p; }
  value_type mul(value_type a, value_type b) const { return (a * b) % p; }
  value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
  value_type inv(value_type a) const {
    if (a == 0) throw InvalidArgument("division by zero in F_p");
    // Fermat
    value_type result = 1, base = a, e = p - 2;
    while (e) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }
  value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }
  std::string name() const { return "fp:" + std::to_string(p); }
};

/// Runtime choice of field, as parsed from "q" or "fp:<p>".
struct FieldSpec {
  enum class Kind { rational, prime };
  Kind kind = Kind::rational;
  std::uint64_t p = 1000003;

  static FieldSpec rational() { return {}; }
  static FieldSpec prime(std::uint64_t p) {
    PrimeField check(p);
    return {Kind::prime, p};
  }

  static FieldSpec parse(const std::string& text) {
    if (text == "q" || text == "Q" || text == "rational") return rational();
    if (text.rfind("fp:", 0) == 0) {
      std::uint64_t p = 0;
      try {
        std::size_t used = 0;
        p = std::stoull(text.substr(3), &used);
        if (used != text.size() - 3) throw std::invalid_argument(text);
      } catch (const std::exception&) {
        throw InvalidArgument("bad field spec '" + text + "'");
      }
      return prime(p);
    }
    if (text == "fp") return prime(1000003);
    throw InvalidArgument("bad field spec '" + text + "' (expected q or fp:<prime>)");
  }

  std::string name() const { return kind == Kind::rational ? "q" : "fp:" + std::to_string(p); }
};

/// Calls `fn(field)` with the concrete field object named by `spec`.
template <class Fn>
decltype(auto) with_field(const FieldSpec& spec, Fn&& fn) {
  if (spec.kind == FieldSpec::Kind::rational) return std::forward<Fn>(fn)(RationalField{});
  return std::forward<Fn>(fn)(PrimeField{spec.p});
}

}  // namespace grr
