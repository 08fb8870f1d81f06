#pragma once

#include "coarsekit/io.hpp"
#include "coarsekit/metric.hpp"

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace coarsekit {

enum class GeneratorKind { path, grid, tree, sum_ball_a, sum_ball_b, random_graph, file };

inline const char* to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::path: return "path";
    case GeneratorKind::grid: return "grid";
    case GeneratorKind::tree: return "tree";
    case GeneratorKind::sum_ball_a: return "sum-ball-a";
    case GeneratorKind::sum_ball_b: return "sum-ball-b";
    case GeneratorKind::random_graph: return "random-graph";
    case GeneratorKind::file: return "file";
  }
  return "unknown";
}

inline GeneratorKind parse_generator_kind(std::string s) {
  for (auto& c : s)
    if (c == '_') c = '-';
  for (auto k : {GeneratorKind::path, GeneratorKind::grid, GeneratorKind::tree, GeneratorKind::sum_ball_a,
                 GeneratorKind::sum_ball_b, GeneratorKind::random_graph, GeneratorKind::file})
    if (s == to_string(k)) return k;
  throw Error("unknown generator kind '" + s + "'");
}

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::path;
  std::int64_t n = 0;
  std::int64_t width = 0, height = 0;
  std::int64_t branching = 0, depth = 0;
  std::int64_t radius = 0;
  Rational edge_probability{1, 2};
  std::optional<std::uint64_t> seed;
  std::string path;
  std::string name;  // empty: derived from the parameters

  static GeneratorSpec path_of(std::int64_t n) { return {.kind = GeneratorKind::path, .n = n}; }
  static GeneratorSpec grid_of(std::int64_t w, std::int64_t h) {
    return {.kind = GeneratorKind::grid, .width = w, .height = h};
  }
  static GeneratorSpec tree_of(std::int64_t branching, std::int64_t depth) {
    return {.kind = GeneratorKind::tree, .branching = branching, .depth = depth};
  }
  static GeneratorSpec sum_ball_a_of(std::int64_t r) { return {.kind = GeneratorKind::sum_ball_a, .radius = r}; }
  static GeneratorSpec sum_ball_b_of(std::int64_t r) { return {.kind = GeneratorKind::sum_ball_b, .radius = r}; }
  static GeneratorSpec random_graph_of(std::int64_t n, Rational p, std::uint64_t seed) {
    return {.kind = GeneratorKind::random_graph, .n = n, .edge_probability = p, .seed = seed};
  }
};

/// Lattice points of the ball of radius r in the direct sum of countably
/// many copies of Z, truncated to coordinates 1..r.
using SumVector = std::vector<std::int64_t>;

/// Variant A: weighted l1 norm sum_i i*|x_i|.
inline std::int64_t sum_metric_a(const SumVector& x, const SumVector& y) {
  std::int64_t d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d += static_cast<std::int64_t>(i + 1) * std::llabs(x[i] - y[i]);
  return d;
}

/// Variant B: sum over differing coordinates i of |x_i - y_i| + i.
inline std::int64_t sum_metric_b(const SumVector& x, const SumVector& y) {
  std::int64_t d = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) d += std::llabs(x[i] - y[i]) + static_cast<std::int64_t>(i + 1);
  return d;
}

/// All x in Z^r whose cost against the origin is <= r, in lexicographic order.
inline std::vector<SumVector> sum_ball_points(std::int64_t r, bool variant_b) {
  std::vector<SumVector> out;
  SumVector x(static_cast<std::size_t>(r), 0);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t budget) {
    if (i == x.size()) {
      out.push_back(x);
      return;
    }
    const std::int64_t w = static_cast<std::int64_t>(i + 1);
    for (std::int64_t v = -r; v <= r; ++v) {
      std::int64_t cost = v == 0 ? 0 : (variant_b ? std::llabs(v) + w : w * std::llabs(v));
      if (cost > budget) continue;
      x[i] = v;
      rec(i + 1, budget - cost);
    }
    x[i] = 0;
  };
  rec(0, r);
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

inline FiniteMetricSpace space_from_int_distances(std::string name, std::size_t n,
                                                  const std::function<std::int64_t(std::size_t, std::size_t)>& d) {
  Matrix m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = Rational(d(i, j));
  auto r = check_metric(std::move(name), m);
  if (auto* v = std::get_if<MetricViolation>(&r))
    throw Error("internal error: generator produced a non-metric (" + v->message() + ")");
  return std::get<FiniteMetricSpace>(std::move(r));
}

inline bool connected(std::size_t n, const std::vector<WeightedEdge>& edges) {
  std::vector<std::vector<Point>> adj(n);
  for (const auto& e : edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<bool> seen(n, false);
  std::vector<Point> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    Point v = stack.back();
    stack.pop_back();
    for (Point w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

inline void require_positive(std::int64_t v, const char* what) {
  if (v <= 0) throw Error(std::string("generator: ") + what + " must be positive");
}

}  // namespace detail

constexpr int kRandomGraphRetries = 1000;

/// Deterministic: equal specs (including seed) give identical spaces.
inline FiniteMetricSpace generate(const GeneratorSpec& spec) {
  auto named = [&](std::string fallback) { return spec.name.empty() ? fallback : spec.name; };
  switch (spec.kind) {
    case GeneratorKind::path: {
      detail::require_positive(spec.n, "n");
      return detail::space_from_int_distances(named("path-" + std::to_string(spec.n)), std::size_t(spec.n),
                                              [](std::size_t i, std::size_t j) {
                                                return std::int64_t(i > j ? i - j : j - i);
                                              });
    }
    case GeneratorKind::grid: {
      detail::require_positive(spec.width, "width");
      detail::require_positive(spec.height, "height");
      const auto w = std::size_t(spec.width);
      return detail::space_from_int_distances(
          named("grid-" + std::to_string(spec.width) + "x" + std::to_string(spec.height)),
          w * std::size_t(spec.height), [w](std::size_t i, std::size_t j) {
            auto ax = std::int64_t(i % w), ay = std::int64_t(i / w);
            auto bx = std::int64_t(j % w), by = std::int64_t(j / w);
            return std::llabs(ax - bx) + std::llabs(ay - by);
          });
    }
    case GeneratorKind::tree: {
      detail::require_positive(spec.branching, "branching");
      if (spec.depth < 0) throw Error("generator: depth must be nonnegative");
      std::vector<WeightedEdge> edges;
      std::size_t count = 1, level_start = 0, level_size = 1;
      for (std::int64_t d = 0; d < spec.depth; ++d) {
        std::size_t next_start = count;
        for (std::size_t v = level_start; v < level_start + level_size; ++v)
          for (std::int64_t c = 0; c < spec.branching; ++c) edges.push_back({Point(v), Point(count++), Rational(1)});
        level_start = next_start;
        level_size = count - next_start;
        if (count > 5000) throw Error("generator: tree too large");
      }
      return graph_metric(named("tree-" + std::to_string(spec.branching) + "-" + std::to_string(spec.depth)), count,
                          edges);
    }
    case GeneratorKind::sum_ball_a:
    case GeneratorKind::sum_ball_b: {
      detail::require_positive(spec.radius, "radius");
      const bool b = spec.kind == GeneratorKind::sum_ball_b;
      auto pts = sum_ball_points(spec.radius, b);
      return detail::space_from_int_distances(
          named(std::string(to_string(spec.kind)) + "-" + std::to_string(spec.radius)), pts.size(),
          [&](std::size_t i, std::size_t j) { return b ? sum_metric_b(pts[i], pts[j]) : sum_metric_a(pts[i], pts[j]); });
    }
    case GeneratorKind::random_graph: {
      detail::require_positive(spec.n, "n");
      if (!spec.seed) throw Error("generator: random-graph requires a seed");
      const Rational& p = spec.edge_probability;
      if (p <= 0 || p > 1) throw Error("generator: edge probability must lie in (0,1]");
      const auto n = std::size_t(spec.n);
      std::mt19937_64 rng(*spec.seed);
      const auto num = std::uint64_t(p.numerator()), den = std::uint64_t(p.denominator());
      for (int attempt = 0; attempt < kRandomGraphRetries; ++attempt) {
        std::vector<WeightedEdge> edges;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i + 1; j < n; ++j)
            if (rng() % den < num) edges.push_back({Point(i), Point(j), Rational(1)});
        if (detail::connected(n, edges))
          return graph_metric(named("random-graph-" + std::to_string(spec.n) + "-s" + std::to_string(*spec.seed)), n,
                              edges);
      }
      throw Error("generator: no connected random graph after retries");
    }
    case GeneratorKind::file: {
      auto s = load_space(spec.path);
      if (spec.name.empty()) return s;
      return FiniteMetricSpace::from_matrix(spec.name, s.matrix());
    }
  }
  throw Error("generator: unknown kind");
}

/// Generator spec from JSON: {"kind": "path", "n": 12}, {"kind": "grid",
/// "width": 8, "height": 8}, {"kind": "random-graph", "n": 10, "p": "1/2",
/// "seed": 7}, ...
inline GeneratorSpec generator_spec_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw Error("generator spec must have 'kind'");
  GeneratorSpec g;
  g.kind = parse_generator_kind(j.at("kind").get<std::string>());
  g.n = j.value("n", g.n);
  g.width = j.value("width", g.width);
  g.height = j.value("height", g.height);
  g.branching = j.value("branching", g.branching);
  g.depth = j.value("depth", g.depth);
  g.radius = j.value("radius", g.radius);
  if (j.contains("p")) g.edge_probability = rational_from_json(j.at("p"));
  if (j.contains("seed")) g.seed = j.at("seed").get<std::uint64_t>();
  g.path = j.value("path", std::string());
  g.name = j.value("name", std::string());
  return g;
}

}  // namespace coarsekit
