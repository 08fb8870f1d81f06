#pragma once

#include "coarsekit/chain.hpp"
#include "coarsekit/cover.hpp"
#include "coarsekit/io.hpp"
#include "coarsekit/witness.hpp"

#include <optional>
#include <string>

namespace coarsekit {

inline Json verdict_json(const Verdict& v) {
  Json items = Json::array();
  for (const auto& x : v.violations) {
    Json j{{"kind", x.kind}, {"detail", x.detail}};
    if (x.pair) j["pair"] = Json::array({point_set_json(x.pair->first), point_set_json(x.pair->second)});
    if (!x.points.empty()) j["points"] = point_set_json(x.points);
    items.push_back(std::move(j));
  }
  return Json{{"ok", v.ok()}, {"violations", items}};
}

inline Json decomposition_json(const std::string& space, const RDecomposition& d) {
  Json splits = Json::array();
  for (const auto& sp : d.splits)
    splits.push_back({{"member", point_set_json(sp.member)}, {"v1", family_json(sp.v1)}, {"v2", family_json(sp.v2)}});
  return Json{{"space", space}, {"R", rational_json(d.scale)}, {"partition", d.partition}, {"splits", splits}};
}

/// `default_scale` fills a missing "R" (moves typed against a pending challenge).
inline RDecomposition decomposition_from_json(const Json& j, std::optional<Rational> default_scale = {}) {
  if (!j.is_object() || !j.contains("splits")) throw Error("decomposition JSON must have 'splits'");
  RDecomposition d;
  if (j.contains("R")) d.scale = rational_from_json(j.at("R"));
  else if (default_scale) d.scale = *default_scale;
  else throw Error("decomposition JSON must have 'R'");
  d.partition = j.value("partition", false);
  for (const auto& s : j.at("splits")) {
    Split sp;
    sp.member = point_set_from_json(s.at("member"));
    sp.v1 = family_from_json(s.value("v1", Json::array()));
    sp.v2 = family_from_json(s.value("v2", Json::array()));
    d.splits.push_back(std::move(sp));
  }
  return d;
}

inline Json rationals_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(rational_json(r));
  return a;
}

inline std::vector<Rational> rationals_from_json(const Json& j) {
  if (!j.is_array()) throw Error("expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational_from_json(x));
  return out;
}

inline Json chain_json(const DecompositionChain& c) {
  Json steps = Json::array();
  for (const auto& st : c.steps) steps.push_back(decomposition_json(c.space, st));
  return Json{{"space", c.space},         {"schedule", rationals_json(c.schedule)},
              {"bound", rational_json(c.bound)}, {"complete", c.complete},
              {"partition", c.partition}, {"steps", steps}};
}

inline DecompositionChain chain_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("steps")) throw Error("chain JSON must have 'steps'");
  DecompositionChain c;
  c.space = j.value("space", std::string());
  c.schedule = rationals_from_json(j.at("schedule"));
  c.bound = rational_from_json(j.at("bound"));
  c.complete = j.at("complete").get<bool>();
  c.partition = j.value("partition", false);
  for (const auto& st : j.at("steps")) c.steps.push_back(decomposition_from_json(st));
  return c;
}

inline Json cover_json(const CoverSequence& c) {
  Json covers = Json::array();
  for (const auto& f : c.covers) covers.push_back(family_json(f));
  return Json{{"space", c.space},
              {"schedule", rationals_json(c.schedule)},
              {"bound", rational_json(c.bound)},
              {"covers", covers}};
}

inline CoverSequence cover_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("covers")) throw Error("cover JSON must have 'covers'");
  CoverSequence c;
  c.space = j.value("space", std::string());
  c.schedule = rationals_from_json(j.at("schedule"));
  c.bound = rational_from_json(j.at("bound"));
  for (const auto& f : j.at("covers")) c.covers.push_back(family_from_json(f));
  return c;
}

inline Json witness_report_json(const std::string& space, const VariationReport& r) {
  Json variation = Json::array();
  for (const auto& row : r.variation)
    variation.push_back({{"distance", rational_json(row.distance)}, {"max_l1", float_json(row.max_l1)}});
  return Json{{"space", space},
              {"n", r.n},
              {"m", r.m},
              {"schedule", rationals_json(r.schedule)},
              {"support_radius", rational_json(r.support_radius)},
              {"leaf_mesh", rational_json(r.leaf_mesh)},
              {"variation", variation},
              {"max_adjacent", float_json(r.max_adjacent)},
              {"paper_bound", r.variation_bound ? float_json(*r.variation_bound) : Json(nullptr)}};
}

/// Internal consistency of a witness report (no space needed).
inline Verdict verify_witness_report_json(const Json& j) {
  Verdict out;
  try {
    const auto n = j.at("n").get<std::int64_t>();
    const auto m = j.at("m").get<std::size_t>();
    auto schedule = rationals_from_json(j.at("schedule"));
    if (n <= 0) out.add("n", "n must be positive");
    if (schedule.size() != m) out.add("schedule", "schedule length differs from m");
    Rational expect(n);
    for (const auto& r : schedule)
      if (r != (expect *= 4)) out.add("schedule", "schedule is not 4^i n");
    auto support = rational_from_json(j.at("support_radius"));
    if (support < 0) out.add("support", "negative support radius");
    if (j.contains("leaf_mesh") && support > rational_from_json(j.at("leaf_mesh")))
      out.add("support", "support radius exceeds the mesh of the leaf enlargements");
    std::optional<Rational> prev;
    for (const auto& row : j.at("variation")) {
      auto d = rational_from_json(row.at("distance"));
      double v = row.at("max_l1").get<double>();
      if (prev && d <= *prev) out.add("variation", "distances not strictly increasing");
      if (v < 0 || v > 2 + 1e-9) out.add("variation", "l1 distance outside [0,2]");
      prev = d;
    }
  } catch (const std::exception& e) {
    out.add("format", e.what());
  }
  return out;
}

}  // namespace coarsekit
