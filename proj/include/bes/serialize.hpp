#pragma once

#include <string>

#include <json.hpp>

#include "bes/compression.hpp"
#include "bes/group.hpp"
#include "bes/point_set.hpp"
#include "bes/triple_system.hpp"
#include "bes/witness.hpp"

namespace bes {

using nlohmann::json;

// PointSet: one JSON array of [x, y] pairs, sorted lexicographically.
inline json to_json(const PointSet& ps) {
  json arr = json::array();
  for (const Point& p : ps) arr.push_back({p.x, p.y});
  return arr;
}

inline PointSet point_set_from_json(const json& j) {
  std::vector<Point> pts;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("point set: expected [x, y] pairs");
    pts.push_back({e[0].get<std::int64_t>(), e[1].get<std::int64_t>()});
  }
  return PointSet(std::move(pts));
}

inline json to_json(const GroupSpec& spec) {
  switch (spec.kind()) {
    case GroupSpec::Kind::Cyclic:
      return json{{"kind", "cyclic"}, {"n", spec.cyclic_n()}};
    case GroupSpec::Kind::Power:
      return json{{"kind", "power"}, {"q", spec.power_q()}, {"m", spec.power_m()}};
    case GroupSpec::Kind::Table:
      return json{{"kind", "table"}, {"cayley", spec.cayley()}};
  }
  throw std::logic_error("unreachable");
}

inline GroupSpec group_spec_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "cyclic") return GroupSpec::cyclic(j.at("n").get<std::int64_t>());
  if (kind == "power")
    return GroupSpec::power(j.at("q").get<std::int64_t>(),
                            j.at("m").get<std::int64_t>());
  if (kind == "table")
    return GroupSpec::table(j.at("cayley").get<std::vector<std::vector<Elem>>>());
  throw std::invalid_argument("group spec: unknown kind");
}

// Elements serialize as integers for cyclic/table specs and as residue
// arrays for power specs.
inline json elem_to_json(const GroupSpec& spec, Elem e) {
  if (spec.kind() == GroupSpec::Kind::Power) return json(spec.to_coords(e));
  return json(e);
}

inline Elem elem_from_json(const GroupSpec& spec, const json& j) {
  if (j.is_array()) {
    if (spec.kind() != GroupSpec::Kind::Power)
      throw std::invalid_argument("element: residue array needs a power spec");
    return spec.from_coords(j.get<std::vector<std::int64_t>>());
  }
  return j.get<Elem>();
}

inline json to_json(const TripleSystem& S,
                    std::uint64_t budget = 50'000'000ull) {
  json pairs = json::array();
  for (const auto& [a, b] : S.pair_list(budget))
    pairs.push_back({elem_to_json(S.spec(), a), elem_to_json(S.spec(), b)});
  return json{{"spec", to_json(S.spec())}, {"pairs", pairs}};
}

inline TripleSystem triple_system_from_json(const json& j) {
  GroupSpec spec = group_spec_from_json(j.at("spec"));
  std::vector<std::pair<Elem, Elem>> pairs;
  for (const auto& e : j.at("pairs"))
    pairs.emplace_back(elem_from_json(spec, e.at(0)), elem_from_json(spec, e.at(1)));
  return TripleSystem::from_pairs(std::move(spec), pairs);
}

inline json to_json(const GroupSpec& spec, const Witness& w) {
  auto elems = [&](const std::vector<Elem>& v) {
    json arr = json::array();
    for (Elem e : v) arr.push_back(elem_to_json(spec, e));
    return arr;
  };
  return json{{"A", elems(w.A)},
              {"B", elems(w.B)},
              {"P", elems(w.P)},
              {"span", w.span},
              {"size_total", w.size_total()},
              {"variant", w.variant},
              {"pullback", {{"ell", elem_to_json(spec, w.pullback_ell)},
                            {"r", elem_to_json(spec, w.pullback_r)}}}};
}

inline json to_json(const GroupSpec& spec, const PipelineResult& res) {
  json cert = json::array();
  for (const auto& [a, b] : res.certificate)
    cert.push_back({elem_to_json(spec, a), elem_to_json(spec, b)});
  json t = json::array();
  for (Elem e : res.T) t.push_back(elem_to_json(spec, e));
  return json{{"witness", to_json(spec, res.witness)},
              {"T", t},
              {"certified_span", res.certified_span},
              {"certificate", cert}};
}

// Standalone re-check of an emitted witness against a system: every
// certificate pair must lie in S with product in P, and T must cover the
// claimed span.
inline bool reverify_witness(const TripleSystem& S, const json& emitted,
                             std::int64_t k) {
  const GroupSpec& spec = S.spec();
  std::unordered_set<Elem> P;
  for (const auto& e : emitted.at("witness").at("P"))
    P.insert(elem_from_json(spec, e));
  std::set<std::pair<Elem, Elem>> seen;
  for (const auto& c : emitted.at("certificate")) {
    const Elem a = elem_from_json(spec, c.at(0));
    const Elem b = elem_from_json(spec, c.at(1));
    if (!S.contains(a, b) || !P.count(spec.op(a, b))) return false;
    seen.insert({a, b});
  }
  if (static_cast<std::int64_t>(seen.size()) < k) return false;
  std::vector<Elem> T;
  for (const auto& e : emitted.at("T")) T.push_back(elem_from_json(spec, e));
  return span_count(S, T) >= static_cast<std::uint64_t>(k);
}

inline json to_json(const CompressionReport& rep) {
  json bad = json::array();
  for (const auto& inst : rep.counterexamples)
    bad.push_back({{"A", inst.A}, {"B", inst.B}, {"ell", inst.ell}});
  return json{{"instances_checked", rep.instances_checked},
              {"counterexamples", bad},
              {"max_params", {{"max_coord", rep.max_coord},
                              {"max_size", rep.max_size},
                              {"max_ell", rep.max_ell}}}};
}

} // namespace bes
