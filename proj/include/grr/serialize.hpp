#pragma once

#include <string>

#include "json.hpp"

#include "grr/cohomology.hpp"
#include "grr/sheaf.hpp"

/// Canonical JSON forms. nlohmann::json objects keep keys sorted, so dump()
/// output is deterministic.
namespace grr {

using Json = nlohmann::json;

inline Json to_json(const SlotSupport& s) {
  Json j;
  switch (s.kind) {
    case SlotSupport::Kind::all: j["kind"] = "all"; break;
    case SlotSupport::Kind::nonneg: j["kind"] = "nonneg"; break;
    case SlotSupport::Kind::empty: j["kind"] = "empty"; break;
    case SlotSupport::Kind::finite:
      j["kind"] = "finite";
      j["points"] = s.points;
      break;
  }
  return j;
}

inline SlotSupport support_from_json(const Json& j) {
  std::string k = j.at("kind").get<std::string>();
  if (k == "all") return SlotSupport::all();
  if (k == "nonneg") return SlotSupport::nonneg();
  if (k == "empty") return SlotSupport::empty();
  if (k == "finite") return SlotSupport::finite(j.at("points").get<std::vector<std::int64_t>>());
  throw InvalidArgument("unknown support kind '" + k + "'");
}

inline Json to_json(const GradedSpace& g) {
  Json arr = Json::array();
  for (const auto& s : g.slots) arr.push_back({{"support", to_json(s.support)}, {"step", s.step}});
  return arr;
}

inline GradedSpace space_from_json(const Json& j) {
  GradedSpace g;
  for (const auto& s : j) g.slots.push_back({support_from_json(s.at("support")), s.at("step").get<std::int64_t>()});
  return g;
}

inline Json to_json(const MonomialTerm& t) {
  return {{"target", t.target_slot}, {"scale", t.scale}, {"offset", t.offset}, {"coeff", t.coeff}};
}

inline Json map_to_json(const MonomialMap& m) {
  Json terms = Json::array();
  for (const auto& list : m.terms) {
    Json l = Json::array();
    for (const auto& t : list) l.push_back(to_json(t));
    terms.push_back(l);
  }
  return {{"quotient", m.quotient}, {"terms", terms}};
}

inline Json to_json(const Sheaf2V& f) {
  Json j;
  j["module_tag"] = f.module_tag ? Json(*f.module_tag) : Json(nullptr);
  for (Obj o : kObjects) j["values"][obj_name(o)] = to_json(f.value(o));
  for (Arrow a : kArrows) j["maps"][arrow_name(a)] = map_to_json(f.map(a));
  return j;
}

inline Sheaf2V sheaf_from_json(const Json& j) {
  Sheaf2V f;
  if (!j.at("module_tag").is_null()) f.module_tag = j.at("module_tag").get<std::int64_t>();
  for (Obj o : kObjects) f.value(o) = space_from_json(j.at("values").at(obj_name(o)));
  f.sync();
  for (Arrow a : kArrows) {
    const Json& m = j.at("maps").at(arrow_name(a));
    f.map(a).quotient = m.at("quotient").get<bool>();
    const Json& terms = m.at("terms");
    if (terms.size() != f.map(a).terms.size())
      throw IllFormed(std::string(arrow_name(a)) + ": term lists do not match source slots");
    for (std::size_t s = 0; s < terms.size(); ++s)
      for (const auto& t : terms[s])
        f.map(a).add(s, {t.at("target").get<std::size_t>(), t.at("scale").get<std::int64_t>(),
                         t.at("offset").get<std::int64_t>(), t.at("coeff").get<std::int64_t>()});
  }
  return f;
}

/// Finite values print as bare integers, Infinite as "infinite"; estimates
/// keep their window.
inline Json to_json(const BettiValue& b) {
  switch (b.kind) {
    case BettiValue::Kind::finite: return b.n;
    case BettiValue::Kind::infinite: return "infinite";
    case BettiValue::Kind::window_estimate: return {{"kind", "window_estimate"}, {"n", b.n}, {"window", b.window}};
  }
  return nullptr;
}

inline BettiValue betti_from_json(const Json& j) {
  if (j.is_number_integer()) return BettiValue::finite(j.get<std::int64_t>());
  if (j.is_string() && j.get<std::string>() == "infinite") return BettiValue::infinite();
  if (j.is_object() && j.value("kind", "") == "window_estimate")
    return BettiValue::estimate(j.at("n").get<std::int64_t>(), j.at("window").get<std::int64_t>());
  throw InvalidArgument("not a Betti value: " + j.dump());
}

inline Json to_json(const BettiPair& p) {
  Json j{{"engine", p.engine}, {"b0", to_json(p.b0)}, {"b1", to_json(p.b1)}};
  if (!p.witnesses.empty()) j["witnesses"] = p.witnesses;
  return j;
}

}  // namespace grr
