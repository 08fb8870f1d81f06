#pragma once

#include "coarsekit/chain.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace coarsekit {

/// Nested partitions F_0 = {X} > F_1 > ... > F_m with their enlargements.
///
/// Level-i tiles (i >= 1) come from step i of a partition chain with scale
/// R_i = 4^i n. Enlargements: V = N_{R_1}(F) on level 1 and
/// V = N_{R_i}(F) intersected with the parent's V below that (open
/// neighborhoods); V = X on level 0.
struct PartitionTree {
  struct Tile {
    PointSet points;
    PointSet enlargement;
    std::size_t parent = 0;  // index into the previous level
    int colour = 0;          // 1 or 2: which family of the parent's split
  };

  std::int64_t n = 1;
  std::vector<Rational> scales;
  std::vector<std::vector<Tile>> levels;
  /// Least point of each leaf tile, parallel to leaves().
  std::vector<Point> anchors;

  std::size_t depth() const { return levels.size() - 1; }
  const std::vector<Tile>& leaves() const { return levels.back(); }

  /// p^k of a leaf: the enlargement of its ancestor k levels up.
  const PointSet& ancestor_enlargement(std::size_t leaf, std::size_t k) const {
    std::size_t level = depth(), idx = leaf;
    for (std::size_t step = 0; step < k; ++step) idx = levels[level--][idx].parent;
    return levels[level][idx].enlargement;
  }
};

class TreeError : public Error {
 public:
  TreeError(std::string kind, const std::string& what) : Error(what), kind_(std::move(kind)) {}
  /// "incomplete", "partition", "schedule" or "coloring".
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

inline PartitionTree build_partition_tree(const FiniteMetricSpace& s, const DecompositionChain& c, std::int64_t n) {
  if (n <= 0) throw TreeError("schedule", "partition tree: n must be positive");
  if (!c.complete) throw TreeError("incomplete", "partition tree: chain is not complete");
  if (!c.partition) throw TreeError("partition", "partition tree: chain is not in partition mode");
  Rational expect(n);
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    expect *= 4;
    if (i >= c.schedule.size() || c.schedule[i] != expect || c.steps[i].scale != expect)
      throw TreeError("schedule", "partition tree: step " + std::to_string(i + 1) + " must use scale " +
                                      to_string(expect));
  }
  Verdict v = verify_chain(s, c);
  if (v.has("overlap") || v.has("partition")) throw TreeError("partition", "partition tree: pieces overlap\n" + v.summary());
  if (!v) throw TreeError("coloring", "partition tree: chain does not verify\n" + v.summary());

  PartitionTree t;
  t.n = n;
  t.scales = c.schedule;
  t.levels.push_back({{s.all_points(), s.all_points(), 0, 0}});
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const auto& prev = t.levels.back();
    std::vector<PartitionTree::Tile> level;
    for (std::size_t j = 0; j < c.steps[i].splits.size(); ++j) {
      const auto& sp = c.steps[i].splits[j];
      for (int colour : {1, 2})
        for (const auto& piece : colour == 1 ? sp.v1 : sp.v2) {
          PointSet nb = neighborhood(s, piece, c.schedule[i], NeighborhoodMode::open);
          PointSet enl = i == 0 ? std::move(nb) : set_intersection(nb, prev[j].enlargement);
          level.push_back({piece, std::move(enl), j, colour});
        }
    }
    t.levels.push_back(std::move(level));
  }
  for (const auto& leaf : t.leaves()) t.anchors.push_back(leaf.points.front());
  return t;
}

/// Finitely supported probability measure sum_V alpha_V(x) delta_{y_V}.
struct WitnessMeasure {
  Point base = 0;
  std::int64_t n = 1;
  /// (anchor, weight) with weight > 0, sorted by anchor.
  std::vector<std::pair<Point, double>> weights;
  double normalizer = 0;

  double total() const {
    double t = 0;
    for (const auto& [p, w] : weights) t += w;
    return t;
  }

  double weight_at(Point y) const {
    for (const auto& [p, w] : weights)
      if (p == y) return w;
    return 0;
  }
};

/// Product over i = 1..m of d(x, p^i(V) \ p^{i-1}(V)), with d(x, {}) taken
/// as R_m. Exact factors; the product is formed in double.
inline std::vector<Rational> witness_factors(const FiniteMetricSpace& s, const PartitionTree& t, std::size_t leaf,
                                             Point x) {
  std::vector<Rational> f;
  const std::size_t m = t.depth();
  for (std::size_t i = 1; i <= m; ++i) {
    PointSet annulus = set_difference(t.ancestor_enlargement(leaf, i), t.ancestor_enlargement(leaf, i - 1));
    f.push_back(annulus.empty() ? t.scales.back() : s.from_units(point_set_distance_units(s, x, annulus)));
  }
  return f;
}

inline WitnessMeasure witness_measure(const FiniteMetricSpace& s, const PartitionTree& t, Point x) {
  if (x >= s.size()) throw Error("witness_measure: point outside the space");
  const auto& leaves = t.leaves();
  std::vector<double> mass(leaves.size(), 0.0);
  double total = 0;
  for (std::size_t v = 0; v < leaves.size(); ++v) {
    double prod = 1;
    for (const auto& f : witness_factors(s, t, v, x)) prod *= to_double(f);
    mass[v] = prod;
    total += prod;
  }
  if (!(total > 0)) throw Error("witness_measure: degenerate normalizer at point " + std::to_string(x));
  WitnessMeasure out{x, t.n, {}, total};
  for (std::size_t v = 0; v < leaves.size(); ++v)
    if (mass[v] > 0) out.weights.emplace_back(t.anchors[v], mass[v] / total);
  std::sort(out.weights.begin(), out.weights.end());
  return out;
}

inline double l1_distance(const WitnessMeasure& a, const WitnessMeasure& b) {
  double d = 0;
  auto i = a.weights.begin(), j = b.weights.begin();
  while (i != a.weights.end() || j != b.weights.end()) {
    if (j == b.weights.end() || (i != a.weights.end() && i->first < j->first)) {
      d += i->second;
      ++i;
    } else if (i == a.weights.end() || j->first < i->first) {
      d += j->second;
      ++j;
    } else {
      d += std::fabs(i->second - j->second);
      ++i;
      ++j;
    }
  }
  return d;
}

struct VariationReport {
  std::int64_t n = 1;
  std::size_t m = 0;
  std::vector<Rational> schedule;

  struct Row {
    Rational distance;
    double max_l1 = 0;
    Point x = 0, y = 0;  // a pair attaining it
  };
  /// One row per realized distance <= cutoff, ascending.
  std::vector<Row> variation;

  Rational support_radius{0};
  Rational leaf_mesh{0};
  bool support_within_mesh = true;
  bool support_within_anchor_set = true;
  double max_normalization_error = 0;
  bool weights_nonnegative = true;

  /// max l1 over pairs at distance <= 1.
  double max_adjacent = 0;
  /// 2^{m+2} / R_m; absent for depth-0 trees.
  std::optional<double> variation_bound;

  bool variation_bound_holds() const { return !variation_bound || max_adjacent <= *variation_bound; }

  /// max l1 over pairs at distance strictly below r.
  double max_below(const Rational& r) const {
    double best = 0;
    for (const auto& row : variation)
      if (row.distance < r) best = std::max(best, row.max_l1);
    return best;
  }
};

inline std::vector<WitnessMeasure> all_witness_measures(const FiniteMetricSpace& s, const PartitionTree& t) {
  std::vector<WitnessMeasure> out;
  out.reserve(s.size());
  for (Point x = 0; x < s.size(); ++x) out.push_back(witness_measure(s, t, x));
  return out;
}

inline VariationReport variation_report(const FiniteMetricSpace& s, const PartitionTree& t, const Rational& cutoff) {
  VariationReport rep;
  rep.n = t.n;
  rep.m = t.depth();
  rep.schedule = t.scales;
  const auto measures = all_witness_measures(s, t);
  const auto& leaves = t.leaves();

  Family enlargements;
  for (const auto& leaf : leaves) enlargements.push_back(leaf.enlargement);
  rep.leaf_mesh = mesh(s, enlargements);

  std::int64_t radius = 0;
  for (Point x = 0; x < s.size(); ++x) {
    const auto& mu = measures[x];
    rep.max_normalization_error = std::max(rep.max_normalization_error, std::fabs(mu.total() - 1.0));
    for (const auto& [y, w] : mu.weights) {
      if (w < 0) rep.weights_nonnegative = false;
      radius = std::max(radius, s.units(x, y));
    }
    // support must sit on anchors of enlargements containing x
    for (std::size_t v = 0; v < leaves.size(); ++v)
      if (mu.weight_at(t.anchors[v]) > 0 && !std::binary_search(leaves[v].enlargement.begin(),
                                                                leaves[v].enlargement.end(), x))
        rep.support_within_anchor_set = false;
  }
  rep.support_radius = s.from_units(radius);
  rep.support_within_mesh = rep.support_radius <= rep.leaf_mesh;

  const std::int64_t cut = s.floor_units(cutoff);
  const std::int64_t unit = s.floor_units(Rational(1));
  std::map<std::int64_t, VariationReport::Row> rows;
  for (Point x = 0; x < s.size(); ++x)
    for (Point y = x + 1; y < s.size(); ++y) {
      const std::int64_t d = s.units(x, y);
      if (d > cut) continue;
      const double l1 = l1_distance(measures[x], measures[y]);
      auto [it, fresh] = rows.try_emplace(d, VariationReport::Row{s.from_units(d), l1, x, y});
      if (!fresh && l1 > it->second.max_l1) it->second = {s.from_units(d), l1, x, y};
      if (d <= unit) rep.max_adjacent = std::max(rep.max_adjacent, l1);
    }
  for (auto& [d, row] : rows) rep.variation.push_back(row);
  if (rep.m > 0) rep.variation_bound = std::ldexp(1.0, int(rep.m) + 2) / to_double(t.scales.back());
  return rep;
}

struct PropertyACheck {
  bool ok = false;
  std::int64_t n = 0;
  Rational support_radius{0};
  double achieved = 0;  // max l1 over pairs at distance < R for the returned n
  double best = 2;      // best value seen over all n tried
  std::optional<DecompositionChain> chain;
  std::optional<VariationReport> report;
};

/// Geometric challenges R_i = 4^i n; ends once 4^i n passes 2^40.
inline ChallengeSource geometric_challenges(std::int64_t n) {
  return [n](std::size_t round, const Family&) -> std::optional<Rational> {
    Rational r(n);
    for (std::size_t i = 0; i <= round; ++i)
      if ((r *= 4) > (std::int64_t(1) << 40)) return std::nullopt;
    return r;
  };
}

/// Searches n = 1..n_max for measures with variation < eps over pairs at
/// distance < r. Each n uses a chain with schedule 4^i n ending at mesh
/// <= bound (default R_1 = 4n).
inline PropertyACheck property_a_check(const FiniteMetricSpace& s, double eps, const Rational& r,
                                       const MemberStrategy& strategy, std::int64_t n_max,
                                       std::optional<Rational> bound = {}, std::size_t max_steps = 8) {
  if (!(eps > 0)) throw Error("property_a_check: eps must be positive");
  if (r <= 0) throw Error("property_a_check: R must be positive");
  if (n_max < 1) throw Error("property_a_check: n_max must be at least 1");
  PropertyACheck out;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const Rational b = bound.value_or(Rational(4 * n));
    auto chain = solve_chain(s, geometric_challenges(n), b, strategy, max_steps);
    if (!chain.complete) continue;
    auto tree = build_partition_tree(s, chain, n);
    auto rep = variation_report(s, tree, r);
    const double v = rep.max_below(r);
    out.best = std::min(out.best, v);
    if (v < eps) {
      out.ok = true;
      out.n = n;
      out.support_radius = rep.support_radius;
      out.achieved = v;
      out.chain = std::move(chain);
      out.report = std::move(rep);
      return out;
    }
  }
  return out;
}

}  // namespace coarsekit
