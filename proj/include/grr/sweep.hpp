#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "grr/cohomology.hpp"
#include "grr/divisor.hpp"
#include "grr/exactness.hpp"
#include "grr/field.hpp"
#include "grr/homological.hpp"
#include "grr/serialize.hpp"

namespace grr {

inline constexpr const char* kToolVersion = "1.0.0";

/// Inclusive integer range written `lo..hi` (a bare integer means lo = hi).
struct IntRange {
  std::int64_t lo = 0, hi = 0;
  bool empty() const { return lo > hi; }
};

namespace detail {

inline std::int64_t parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("bad integer '" + s + "' in " + what);
  }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace detail

inline IntRange parse_range(const std::string& text) {
  auto pos = text.find("..");
  IntRange r;
  if (pos == std::string::npos) {
    r.lo = r.hi = detail::parse_int(text, "range");
  } else {
    r.lo = detail::parse_int(text.substr(0, pos), "range '" + text + "'");
    r.hi = detail::parse_int(text.substr(pos + 2), "range '" + text + "'");
  }
  if (r.empty()) throw InvalidArgument("empty range '" + text + "'");
  return r;
}

inline Divisor parse_divisor(const std::string& text) {
  auto parts = detail::split(text, ',');
  if (parts.size() != 2) throw InvalidArgument("divisor must be written d1,d2 (got '" + text + "')");
  return {detail::parse_int(parts[0], "divisor"), detail::parse_int(parts[1], "divisor")};
}

/// `lo..hi` (square box) or `lo..hi,lo..hi` (d1 range, d2 range).
inline DivisorBox parse_box(const std::string& text) {
  auto parts = detail::split(text, ',');
  if (parts.size() == 1) {
    auto r = parse_range(parts[0]);
    return DivisorBox::square(r.lo, r.hi);
  }
  if (parts.size() != 2) throw InvalidArgument("box must be lo..hi or lo..hi,lo..hi (got '" + text + "')");
  auto a = parse_range(parts[0]), b = parse_range(parts[1]);
  return {a.lo, a.hi, b.lo, b.hi};
}

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"rr", "b1", "euler", "duality", "hom", "sky", "tensor", "resolution", "les"};
  return names;
}

struct SweepConfig {
  IntRange r_range{1, 6};
  DivisorBox d_box = DivisorBox::square(-10, 10);
  FieldSpec field;
  std::int64_t window = 32;
  std::int64_t degree_bound = 12;
  std::vector<std::string> checks{"rr"};

  Json to_json() const {
    return {{"r_range", {r_range.lo, r_range.hi}},
            {"d_box", {{d_box.d1_lo, d_box.d1_hi}, {d_box.d2_lo, d_box.d2_hi}}},
            {"field", field.name()},
            {"window", window},
            {"degree_bound", degree_bound},
            {"checks", checks}};
  }
};

/// FNV-1a over the per-case result lines; identical sweeps give identical
/// digests.
class Digest {
 public:
  void add(const std::string& s) {
    for (unsigned char c : s) {
      h_ ^= c;
      h_ *= 1099511628211ull;
    }
    h_ ^= '\n';
    h_ *= 1099511628211ull;
  }
  std::string hex() const {
    std::ostringstream o;
    o << std::hex;
    o.width(16);
    o.fill('0');
    o << h_;
    return o.str();
  }

 private:
  std::uint64_t h_ = 1469598103934665603ull;
};

/// Accumulates one check's cases.
class CheckResult {
 public:
  CheckResult(std::string name, Json params) : name_(std::move(name)), params_(std::move(params)) {}

  void record(bool pass, const std::string& line, const std::function<Json()>& detail) {
    ++cases_;
    digest_.add(line);
    if (!pass) {
      ++failures_;
      if (first_.is_null()) first_ = detail();
    }
  }
  void skip() { ++skipped_; }

  Json to_json() const {
    Json j{{"check", name_},
           {"params", params_},
           {"expected", {{"failures", 0}}},
           {"got", {{"cases", cases_}, {"failures", failures_}, {"skipped", skipped_}, {"digest", digest_.hex()}}},
           {"pass", failures_ == 0 && cases_ > 0}};
    if (!first_.is_null()) j["witnesses"] = {{"first_counterexample", first_}};
    return j;
  }
  bool pass() const { return failures_ == 0 && cases_ > 0; }

 private:
  std::string name_;
  Json params_;
  std::int64_t cases_ = 0, failures_ = 0, skipped_ = 0;
  Digest digest_;
  Json first_;
};

namespace detail {

inline std::string cell(std::int64_t r, Divisor d) {
  return std::to_string(r) + "," + std::to_string(d.d1) + "," + std::to_string(d.d2);
}

inline Json bv(const BettiValue& b) { return to_json(b); }

template <class Fn>
void for_r(const IntRange& rr, Fn&& fn) {
  for (auto r = rr.lo; r <= rr.hi; ++r) fn(EdgeCount(r));
}

inline std::int64_t binomial2(std::int64_t r) { return r * (r - 1) / 2; }

template <class Field>
CheckResult check_rr(const SweepConfig& c, const Field& field) {
  CheckResult res("rr", {{"window", c.window}});
  for_r(c.r_range, [&](EdgeCount r) {
    c.d_box.for_each([&](Divisor d) {
      std::int64_t closed = grrr_closed(r, d);
      std::optional<std::int64_t> brute;
      try {
        brute = grrr_bruteforce(r, d);
      } catch (const BudgetExceeded&) {
      }
      std::int64_t lat = lat_count(r, d) - 1;
      Sheaf2V m = make_M(r, d);
      auto basis = static_cast<std::int64_t>(global_section_basis_M(r, d).size());
      BettiValue walker = betti_walker(m, field).b0;
      BettiValue window = betti_window(m, c.window, field).b0;
      bool ok = brute && *brute == closed && lat == closed && basis == closed + 1 &&
                walker == BettiValue::finite(closed + 1) && window.n == closed + 1;
      res.record(ok, cell(r, d) + ":" + std::to_string(closed) + ":" + walker.to_string(), [&] {
        return Json{{"r", r.value()},
                    {"d", {d.d1, d.d2}},
                    {"expected", {{"rank", closed}, {"b0", closed + 1}}},
                    {"got",
                     {{"bruteforce", brute ? Json(*brute) : Json("budget exceeded")},
                      {"lat_count_minus_1", lat},
                      {"global_sections", basis},
                      {"b0_walker", bv(walker)},
                      {"b0_window", bv(window)}}}};
      });
    });
  });
  return res;
}

template <class Field>
CheckResult check_b1(const SweepConfig& c, const Field& field) {
  CheckResult res("b1", Json::object());
  for_r(c.r_range, [&](EdgeCount r) {
    c.d_box.for_each([&](Divisor d) {
      Sheaf2V m = make_M(r, d);
      BettiValue closed = betti_closed_form_plb(m, field).b1;
      BettiValue walker = betti_walker(m, field).b1;
      bool ok = closed == walker;
      std::optional<std::int64_t> formula;
      if (d.d1 >= 0 && d.d2 >= 0) {
        formula = std::max<std::int64_t>(0, r - 1 - std::max(d.d1, d.d2));
        ok = ok && closed == BettiValue::finite(*formula);
      }
      res.record(ok, cell(r, d) + ":" + closed.to_string(), [&] {
        return Json{{"r", r.value()},
                    {"d", {d.d1, d.d2}},
                    {"expected", formula ? Json(*formula) : Json("closed == walker")},
                    {"got", {{"b1_closed", bv(closed)}, {"b1_walker", bv(walker)}}}};
      });
    });
  });
  return res;
}

template <class Field>
CheckResult check_euler(const SweepConfig& c, const Field& field) {
  CheckResult res("euler", Json::object());
  for_r(c.r_range, [&](EdgeCount r) {
    c.d_box.for_each([&](Divisor d) {
      Sheaf2V m = make_M(r, d);
      auto b = betti_walker(m, field);
      if (!b.b0.is_finite() || !b.b1.is_finite()) {
        res.skip();
        return;
      }
      std::int64_t chi = b.b0.n - b.b1.n, want = d.degree() - (r - 2);
      res.record(chi == want, cell(r, d) + ":" + std::to_string(chi), [&] {
        return Json{{"r", r.value()}, {"d", {d.d1, d.d2}}, {"expected", want}, {"got", chi}};
      });
    });
  });
  return res;
}

template <class Field>
CheckResult check_duality(const SweepConfig& c, const Field& field) {
  CheckResult res("duality", Json::object());
  for_r(c.r_range, [&](EdgeCount r) {
    c.d_box.for_each([&](Divisor d) {
      auto rep = verify_h1_duality(r, d, field);
      res.record(rep.pass, cell(r, d) + ":" + rep.b1_closed.to_string(), [&] {
        return Json{{"r", r.value()},
                    {"d", {d.d1, d.d2}},
                    {"expected", "b1 = hom(M_d, omega) = b0(M_{K-d})"},
                    {"got",
                     {{"b1_closed", bv(rep.b1_closed)},
                      {"b1_walker", bv(rep.b1_walker)},
                      {"hom", rep.hom},
                      {"b0_dual", bv(rep.b0_dual)}}}};
      });
    });
  });
  return res;
}

template <class Field>
CheckResult check_hom(const SweepConfig& c, const Field& field) {
  CheckResult res("hom", {{"degree_bound", c.degree_bound}});
  for_r(c.r_range, [&](EdgeCount r) {
    c.d_box.for_each([&](Divisor d) {
      Sheaf2V f = make_M(r, d);
      c.d_box.for_each([&](Divisor d2) {
        auto h = hom_dim_direct(f, make_M(r, d2), c.degree_bound, field);
        std::int64_t want = hom_dim_formula(r, d, d2);
        res.record(h.stabilized && h.dimension == want,
                   cell(r, d) + ">" + std::to_string(d2.d1) + "," + std::to_string(d2.d2) + ":" +
                       std::to_string(h.dimension),
                   [&] {
                     return Json{{"r", r.value()},
                                 {"d", {d.d1, d.d2}},
                                 {"d2", {d2.d1, d2.d2}},
                                 {"expected", want},
                                 {"got", {{"dimension", h.dimension}, {"stabilized", h.stabilized}}}};
                   });
      });
    });
  });
  return res;
}

template <class Field>
CheckResult check_sky(const SweepConfig& c, const Field& field) {
  CheckResult res("sky", Json::object());
  for_r(c.r_range, [&](EdgeCount r) {
    for (Obj v : {Obj::B1, Obj::B2}) {
      auto led = verify_strong_duality_sky(r, v, field);
      std::string line = std::to_string(r.value()) + obj_name(v) + ":" + led.h0.to_string() + led.h1.to_string() +
                         std::to_string(led.hom) + std::to_string(led.ext.ext1);
      res.record(led.pass, line, [&] {
        return Json{{"r", r.value()},
                    {"vertex", obj_name(v)},
                    {"expected", {1, 0, 0, 1}},
                    {"got", {bv(led.h0), bv(led.h1), led.hom, led.ext.ext1}},
                    {"hom_stabilized", led.hom_stabilized},
                    {"ext_higher_vanish", led.ext.ext_higher_vanish}};
      });
    }
  });
  return res;
}

template <class Field>
CheckResult check_tensor(const SweepConfig& c, const Field& field) {
  CheckResult res("tensor", {{"window", c.window}});
  for_r(c.r_range, [&](EdgeCount r) {
    c.d_box.for_each([&](Divisor d) {
      Sheaf2V l = make_line_bundle(r, d);
      c.d_box.for_each([&](Divisor d2) {
        bool ok = structurally_equal(tensor(l, make_M(r, d2)), make_M(r, d + d2));
        res.record(ok, "twist " + cell(r, d) + "+" + std::to_string(d2.d1) + "," + std::to_string(d2.d2), [&] {
          return Json{{"r", r.value()}, {"d", {d.d1, d.d2}}, {"d2", {d2.d1, d2.d2}}, {"expected", "M_{d+d2}"},
                      {"got", "not structurally equal"}};
        });
      });
    });
    std::int64_t want = binomial2(r);
    for (auto [k, n] : tensor_vanishing_rank(r, {0, 0}, {0, 0}, c.window, field)) {
      res.record(n == want, "kernel " + std::to_string(r.value()) + "," + std::to_string(k) + ":" + std::to_string(n),
                 [&, k = k, n = n] {
                   return Json{{"r", r.value()}, {"degree", k}, {"expected", want}, {"got", n}};
                 });
    }
  });
  return res;
}

template <class Field>
CheckResult check_resolution(const SweepConfig& c, const Field& field) {
  CheckResult res("resolution", {{"window", c.window}});
  for_r(c.r_range, [&](EdgeCount r) {
    auto rep = verify_projective_resolution_O(r, c.window, field);
    res.record(rep.ok, std::to_string(r.value()) + ":" + std::to_string(rep.checks), [&] {
      return Json{{"r", r.value()}, {"expected", "no violations"}, {"got", rep.violations}};
    });
  });
  return res;
}

template <class Field>
CheckResult check_les(const SweepConfig& c, const Field& field) {
  std::int64_t w = std::min<std::int64_t>(c.window, 16);
  CheckResult res("les", {{"exactness_window", w}});
  for_r(c.r_range, [&](EdgeCount r) {
    c.d_box.for_each([&](Divisor d) {
      for (int axis : {1, 2}) {
        auto ses = build_mu_ses(r, d, axis);
        auto les = verify_les_additivity(ses, field);
        auto ex = check_ses_window(ses.mu, ses.q, w, field);
        res.record(les.pass && ex.ok, cell(r, d) + "/" + std::to_string(axis) + ":" + std::to_string(les.alternating_sum),
                   [&] {
                     return Json{{"r", r.value()},
                                 {"d", {d.d1, d.d2}},
                                 {"axis", axis},
                                 {"expected", "exact LES, exact SES"},
                                 {"got", {{"les", les.message}, {"exactness", ex.violations}}}};
                   });
      }
    });
  });
  return res;
}

}  // namespace detail

/// Runs one named check over the sweep.
template <class Field>
CheckResult run_check(const std::string& name, const SweepConfig& c, const Field& field) {
  if (name == "rr") return detail::check_rr(c, field);
  if (name == "b1") return detail::check_b1(c, field);
  if (name == "euler") return detail::check_euler(c, field);
  if (name == "duality") return detail::check_duality(c, field);
  if (name == "hom") return detail::check_hom(c, field);
  if (name == "sky") return detail::check_sky(c, field);
  if (name == "tensor") return detail::check_tensor(c, field);
  if (name == "resolution") return detail::check_resolution(c, field);
  if (name == "les") return detail::check_les(c, field);
  throw InvalidArgument("unknown check '" + name + "'");
}

/// The report envelope. Wall time is added only when asked for, so the
/// default output depends on the config alone.
inline Json run_sweep(const SweepConfig& c, bool timing = false) {
  if (c.r_range.empty() || c.r_range.lo < 1) throw InvalidArgument("r range must be nonempty with r >= 1");
  if (c.d_box.empty()) throw InvalidArgument("empty divisor box");
  auto t0 = std::chrono::steady_clock::now();
  Json results = Json::array();
  bool pass = true;
  with_field(c.field, [&](const auto& field) {
    for (const auto& name : c.checks) {
      CheckResult r = run_check(name, c, field);
      pass = pass && r.pass();
      results.push_back(r.to_json());
    }
  });
  Json env{{"schema", 1}, {"tool", "grr"}, {"version", kToolVersion}, {"config", c.to_json()},
           {"results", results}, {"pass", pass}};
  if (timing)
    env["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return env;
}

}  // namespace grr
