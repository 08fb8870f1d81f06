#pragma once

#include "coarsekit/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace coarsekit {

using Point = std::uint32_t;

/// Sorted, duplicate-free list of point indices.
using PointSet = std::vector<Point>;

/// An ordered list of subsets of one ambient space.
using Family = std::vector<PointSet>;

using Matrix = std::vector<std::vector<Rational>>;

inline PointSet make_point_set(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

inline PointSet set_union(const PointSet& a, const PointSet& b) {
  PointSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline PointSet set_difference(const PointSet& a, const PointSet& b) {
  PointSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline PointSet set_intersection(const PointSet& a, const PointSet& b) {
  PointSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(const PointSet& a, const PointSet& of) {
  return std::includes(of.begin(), of.end(), a.begin(), a.end());
}

inline bool intersects(const PointSet& a, const PointSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

inline PointSet family_union(const Family& f) {
  std::vector<Point> all;
  for (const auto& m : f) all.insert(all.end(), m.begin(), m.end());
  return make_point_set(std::move(all));
}

enum class MetricViolationKind { not_square, empty, nonzero_diagonal, negative, asymmetry, zero_off_diagonal, triangle };

inline const char* to_string(MetricViolationKind k) {
  switch (k) {
    case MetricViolationKind::not_square: return "not_square";
    case MetricViolationKind::empty: return "empty";
    case MetricViolationKind::nonzero_diagonal: return "nonzero_diagonal";
    case MetricViolationKind::negative: return "negative";
    case MetricViolationKind::asymmetry: return "asymmetry";
    case MetricViolationKind::zero_off_diagonal: return "zero_off_diagonal";
    case MetricViolationKind::triangle: return "triangle";
  }
  return "unknown";
}

/// First violated axiom. For a triangle violation d(i,k) > d(i,j) + d(j,k).
struct MetricViolation {
  MetricViolationKind kind;
  std::size_t i = 0, j = 0, k = 0;

  std::string message() const {
    std::string s = to_string(kind);
    switch (kind) {
      case MetricViolationKind::not_square:
      case MetricViolationKind::empty:
        return s;
      case MetricViolationKind::triangle:
        return s + " at (" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
               "): d(" + std::to_string(i) + "," + std::to_string(k) + ") exceeds d(" + std::to_string(i) + "," +
               std::to_string(j) + ")+d(" + std::to_string(j) + "," + std::to_string(k) + ")";
      default:
        return s + " at (" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
  }
};

class MetricError : public Error {
 public:
  explicit MetricError(MetricViolation v) : Error("metric violation: " + v.message()), violation_(v) {}
  const MetricViolation& violation() const { return violation_; }

 private:
  MetricViolation violation_;
};

class FiniteMetricSpace;
std::variant<FiniteMetricSpace, MetricViolation> check_metric(std::string name, const Matrix& d);

/// A validated finite metric space. Distances are held as integers over one
/// common denominator so that all comparisons are exact integer comparisons.
class FiniteMetricSpace {
 public:
  /// Validates and builds; throws MetricError naming the first violation.
  static FiniteMetricSpace from_matrix(std::string name, const Matrix& d) {
    auto r = check_metric(std::move(name), d);
    if (auto* v = std::get_if<MetricViolation>(&r)) throw MetricError(*v);
    return std::get<FiniteMetricSpace>(std::move(r));
  }

  const std::string& name() const { return name_; }
  std::size_t size() const { return n_; }

  Rational dist(Point i, Point j) const { return Rational(units_[i * n_ + j], den_); }
  std::int64_t units(Point i, Point j) const { return units_[i * n_ + j]; }
  std::int64_t denominator() const { return den_; }
  Rational from_units(std::int64_t u) const { return Rational(u, den_); }

  /// floor(r * denominator): d > r iff units > floor_units(r).
  std::int64_t floor_units(const Rational& r) const { return floor_div(r * Rational(den_), Rational(1)); }
  /// Largest u with u/den < r: d < r iff units <= strict_below_units(r).
  std::int64_t strict_below_units(const Rational& r) const {
    Rational t = r * Rational(den_);
    std::int64_t f = floor_div(t, Rational(1));
    return (Rational(f) == t) ? f - 1 : f;
  }

  Matrix matrix() const {
    Matrix m(n_, std::vector<Rational>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m[i][j] = dist(Point(i), Point(j));
    return m;
  }

  PointSet all_points() const {
    PointSet p(n_);
    std::iota(p.begin(), p.end(), Point{0});
    return p;
  }

  bool contains(const PointSet& a) const { return a.empty() || a.back() < n_; }

  friend bool operator==(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
    return a.name_ == b.name_ && a.n_ == b.n_ && a.den_ == b.den_ && a.units_ == b.units_;
  }

 private:
  friend std::variant<FiniteMetricSpace, MetricViolation> check_metric(std::string, const Matrix&);
  FiniteMetricSpace() = default;

  std::string name_;
  std::size_t n_ = 0;
  std::int64_t den_ = 1;
  std::vector<std::int64_t> units_;
};

/// Validates a square matrix of rationals against the metric axioms
/// (discrete: distinct points at positive distance) and reports the first
/// violation found in the order: shape, diagonal, sign, symmetry, zero, triangle.
inline std::variant<FiniteMetricSpace, MetricViolation> check_metric(std::string name, const Matrix& d) {
  const std::size_t n = d.size();
  if (n == 0) return MetricViolation{MetricViolationKind::empty};
  for (const auto& row : d)
    if (row.size() != n) return MetricViolation{MetricViolationKind::not_square};
  for (std::size_t i = 0; i < n; ++i)
    if (d[i][i] != 0) return MetricViolation{MetricViolationKind::nonzero_diagonal, i, i};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (d[i][j] < 0) return MetricViolation{MetricViolationKind::negative, i, j};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (d[i][j] != d[j][i]) return MetricViolation{MetricViolationKind::asymmetry, i, j};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (d[i][j] == 0) return MetricViolation{MetricViolationKind::zero_off_diagonal, i, j};

  std::int64_t den = 1;
  for (const auto& row : d)
    for (const auto& x : row) {
      den = std::lcm(den, x.denominator());
      if (den > (std::int64_t(1) << 40)) throw Error("metric denominators too large for exact arithmetic");
    }

  FiniteMetricSpace s;
  s.name_ = std::move(name);
  s.n_ = n;
  s.den_ = den;
  s.units_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      __int128 u = __int128(d[i][j].numerator()) * (den / d[i][j].denominator());
      if (u > (__int128(1) << 60)) throw Error("distance too large for exact arithmetic");
      s.units_[i * n + j] = static_cast<std::int64_t>(u);
    }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t dij = s.units_[i * n + j];
      for (std::size_t k = 0; k < n; ++k)
        if (s.units_[i * n + k] > dij + s.units_[j * n + k])
          return MetricViolation{MetricViolationKind::triangle, i, j, k};
    }
  return s;
}

namespace detail {
inline void require_points(const FiniteMetricSpace& s, const PointSet& a, const char* what) {
  if (!s.contains(a)) throw Error(std::string(what) + ": point index outside ambient space '" + s.name() + "'");
}
}  // namespace detail

/// min over pairs, in denominator units.
inline std::int64_t set_distance_units(const FiniteMetricSpace& s, const PointSet& a, const PointSet& b) {
  std::int64_t best = INT64_MAX;
  for (Point x : a)
    for (Point y : b) best = std::min(best, s.units(x, y));
  return best;
}

inline Rational set_distance(const FiniteMetricSpace& s, const PointSet& a, const PointSet& b) {
  if (a.empty() || b.empty()) throw Error("set_distance: empty operand");
  detail::require_points(s, a, "set_distance");
  detail::require_points(s, b, "set_distance");
  return s.from_units(set_distance_units(s, a, b));
}

inline std::int64_t point_set_distance_units(const FiniteMetricSpace& s, Point x, const PointSet& b) {
  std::int64_t best = INT64_MAX;
  for (Point y : b) best = std::min(best, s.units(x, y));
  return best;
}

inline std::int64_t diameter_units(const FiniteMetricSpace& s, const PointSet& a) {
  std::int64_t best = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) best = std::max(best, s.units(a[i], a[j]));
  return best;
}

inline Rational diameter(const FiniteMetricSpace& s, const PointSet& a) { return s.from_units(diameter_units(s, a)); }

/// Largest member diameter; 0 for the empty family.
inline Rational mesh(const FiniteMetricSpace& s, const Family& f) {
  std::int64_t best = 0;
  for (const auto& m : f) best = std::max(best, diameter_units(s, m));
  return s.from_units(best);
}

struct DisjointnessCheck {
  bool ok = true;
  /// Member indices of one violating pair when !ok.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  explicit operator bool() const { return ok; }
};

/// True iff every pair of distinct members is at set distance > r.
inline DisjointnessCheck is_r_disjoint(const FiniteMetricSpace& s, const Family& f, const Rational& r) {
  const std::int64_t limit = s.floor_units(r);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j)
      if (set_distance_units(s, f[i], f[j]) <= limit) return {false, std::pair{i, j}};
  return {};
}

/// Union-find over family members joined whenever set distance <= r; returns
/// the unions of the classes ordered by least point. r = 0 merges exactly the
/// overlapping members.
inline Family r_components(const FiniteMetricSpace& s, const Family& f, const Rational& r) {
  if (r < 0) throw Error("r_components: negative scale");
  const std::size_t m = f.size();
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const std::int64_t limit = s.floor_units(r);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      std::size_t a = find(i), b = find(j);
      if (a == b) continue;
      if (set_distance_units(s, f[i], f[j]) <= limit) parent[std::max(a, b)] = std::min(a, b);
    }
  std::vector<std::vector<Point>> groups(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto& g = groups[find(i)];
    g.insert(g.end(), f[i].begin(), f[i].end());
  }
  Family out;
  for (auto& g : groups)
    if (!g.empty()) out.push_back(make_point_set(std::move(g)));
  std::sort(out.begin(), out.end());
  return out;
}

enum class NeighborhoodMode { open, closed };

/// {x : d(x,A) < r} (open) or {x : d(x,A) <= r} (closed).
inline PointSet neighborhood(const FiniteMetricSpace& s, const PointSet& a, const Rational& r,
                             NeighborhoodMode mode = NeighborhoodMode::open) {
  if (r <= 0) throw Error("neighborhood: radius must be positive");
  if (a.empty()) return {};
  detail::require_points(s, a, "neighborhood");
  const std::int64_t limit = mode == NeighborhoodMode::open ? s.strict_below_units(r) : s.floor_units(r);
  PointSet out;
  for (Point x = 0; x < s.size(); ++x)
    if (point_set_distance_units(s, x, a) <= limit) out.push_back(x);
  return out;
}

struct CoverCheck {
  bool ok = true;
  PointSet uncovered;
  explicit operator bool() const { return ok; }
};

inline CoverCheck is_cover(const FiniteMetricSpace& s, const std::vector<Family>& families, const PointSet& x) {
  detail::require_points(s, x, "is_cover");
  std::vector<bool> covered(s.size(), false);
  for (const auto& f : families)
    for (const auto& m : f) {
      detail::require_points(s, m, "is_cover");
      for (Point p : m) covered[p] = true;
    }
  CoverCheck c;
  for (Point p : x)
    if (!covered[p]) c.uncovered.push_back(p);
  c.ok = c.uncovered.empty();
  return c;
}

struct WeightedEdge {
  Point a, b;
  Rational weight;
};

/// Shortest-path metric of a connected weighted graph (Floyd-Warshall over
/// integer units). Throws if the graph is disconnected or a weight is not positive.
inline FiniteMetricSpace graph_metric(std::string name, std::size_t n, const std::vector<WeightedEdge>& edges) {
  if (n == 0) throw Error("graph metric: no vertices");
  std::int64_t den = 1;
  for (const auto& e : edges) {
    if (e.a >= n || e.b >= n) throw Error("graph metric: edge endpoint out of range");
    if (e.weight <= 0) throw Error("graph metric: edge weights must be positive");
    den = std::lcm(den, e.weight.denominator());
  }
  constexpr std::int64_t inf = INT64_MAX / 4;
  std::vector<std::int64_t> d(n * n, inf);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0;
  for (const auto& e : edges) {
    if (e.a == e.b) continue;
    std::int64_t w = e.weight.numerator() * (den / e.weight.denominator());
    d[e.a * n + e.b] = std::min(d[e.a * n + e.b], w);
    d[e.b * n + e.a] = std::min(d[e.b * n + e.a], w);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t dik = d[i * n + k];
      if (dik == inf) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const std::int64_t alt = dik + d[k * n + j];
        if (alt < d[i * n + j]) d[i * n + j] = alt;
      }
    }
  Matrix m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (d[i * n + j] == inf) throw Error("graph metric: graph is disconnected");
      m[i][j] = Rational(d[i * n + j], den);
    }
  return FiniteMetricSpace::from_matrix(std::move(name), m);
}

}  // namespace coarsekit
