#pragma once

#include "coarsekit/metric.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace coarsekit {

using Json = nlohmann::ordered_json;

inline Json rational_json(const Rational& r) { return to_string(r); }

/// Accepts "p/q" strings and JSON integers.
inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_float()) {
    double v = j.get<double>();
    if (v != std::floor(v)) throw Error("non-integer float where an exact rational string is required");
    return Rational(static_cast<std::int64_t>(v));
  }
  throw Error("expected a rational (string \"p/q\" or integer)");
}

/// Float rounded to 12 significant digits so that dumps are bit-stable.
inline Json float_json(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::stod(buf);
}

inline Json point_set_json(const PointSet& s) { return Json(s); }

inline PointSet point_set_from_json(const Json& j) {
  if (!j.is_array()) throw Error("point set must be an array of indices");
  std::vector<Point> pts;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw Error("point index must be a nonnegative integer");
    pts.push_back(static_cast<Point>(v.get<std::int64_t>()));
  }
  return make_point_set(std::move(pts));
}

inline Json family_json(const Family& f) {
  Json a = Json::array();
  for (const auto& m : f) a.push_back(point_set_json(m));
  return a;
}

inline Family family_from_json(const Json& j) {
  if (!j.is_array()) throw Error("family must be an array of point sets");
  Family f;
  for (const auto& m : j) f.push_back(point_set_from_json(m));
  return f;
}

inline Json space_json(const FiniteMetricSpace& s) {
  Json d = Json::array();
  for (Point i = 0; i < s.size(); ++i) {
    Json row = Json::array();
    for (Point k = 0; k < s.size(); ++k) row.push_back(rational_json(s.dist(i, k)));
    d.push_back(std::move(row));
  }
  return Json{{"name", s.name()}, {"metric", {{"type", "matrix"}, {"d", std::move(d)}}}};
}

/// Matrix form is validated directly; graph form is expanded to its
/// shortest-path matrix. Throws MetricError on an axiom violation.
inline FiniteMetricSpace space_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("metric")) throw Error("space JSON must have a 'metric' object");
  std::string name = j.value("name", std::string("space"));
  const Json& m = j.at("metric");
  const std::string type = m.value("type", std::string());
  if (type == "matrix") {
    Matrix d;
    for (const auto& row : m.at("d")) {
      std::vector<Rational> r;
      for (const auto& x : row) r.push_back(rational_from_json(x));
      d.push_back(std::move(r));
    }
    return FiniteMetricSpace::from_matrix(std::move(name), d);
  }
  if (type == "graph") {
    const auto n = m.at("n").get<std::int64_t>();
    if (n <= 0) throw Error("graph metric: n must be positive");
    std::vector<WeightedEdge> edges;
    for (const auto& e : m.at("edges")) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3) throw Error("graph edge must be [i, j] or [i, j, weight]");
      Rational w = e.size() == 3 ? rational_from_json(e[2]) : Rational(1);
      edges.push_back({e[0].get<Point>(), e[1].get<Point>(), w});
    }
    return graph_metric(std::move(name), static_cast<std::size_t>(n), edges);
  }
  throw Error("unknown metric type '" + type + "'");
}

inline Json family_file_json(const FiniteMetricSpace& s, const Family& f) {
  return Json{{"space", s.name()}, {"members", family_json(f)}};
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("malformed JSON in '" + path + "': " + e.what());
  }
}

/// Stable formatting: two-space indent, insertion key order, trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << dump(j);
}

inline void save_space(const std::string& path, const FiniteMetricSpace& s) { write_json_file(path, space_json(s)); }

inline FiniteMetricSpace load_space(const std::string& path) { return space_from_json(read_json_file(path)); }

}  // namespace coarsekit
