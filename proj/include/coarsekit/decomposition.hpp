#pragma once

#include "coarsekit/metric.hpp"

#include <cstdlib>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace coarsekit {

/// One itemized failure found by a verifier.
struct Violation {
  /// Category: "scale", "member", "empty_piece", "containment", "coverage",
  /// "disjointness", "overlap", "schedule", "linkage", "bound", "mesh", ...
  std::string kind;
  std::string detail;
  /// The two offending sets, for disjointness failures.
  std::optional<std::pair<PointSet, PointSet>> pair;
  /// Offending points (uncovered, or outside the parent).
  PointSet points;
};

struct Verdict {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  explicit operator bool() const { return ok(); }

  bool has(std::string_view kind) const {
    for (const auto& v : violations)
      if (v.kind == kind) return true;
    return false;
  }

  void add(std::string kind, std::string detail) { violations.push_back({std::move(kind), std::move(detail), {}, {}}); }

  void merge(const Verdict& other, const std::string& prefix) {
    for (auto v : other.violations) {
      v.detail = prefix + v.detail;
      violations.push_back(std::move(v));
    }
  }

  std::string summary() const {
    std::string s;
    for (const auto& v : violations) s += v.kind + ": " + v.detail + "\n";
    return s;
  }
};

inline std::string describe(const PointSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

/// One decomposed member: member = union of the pieces of v1 and v2, each of
/// v1 and v2 an R-disjoint family.
struct Split {
  PointSet member;
  Family v1;
  Family v2;

  friend bool operator==(const Split&, const Split&) = default;
};

struct RDecomposition {
  Rational scale{1};
  std::vector<Split> splits;
  /// Pieces of each member are pairwise disjoint.
  bool partition = false;

  Family parent() const {
    Family f;
    for (const auto& s : splits) f.push_back(s.member);
    return f;
  }

  /// The decomposed family: v1 pieces then v2 pieces, member by member.
  Family pieces() const {
    Family f;
    for (const auto& s : splits) {
      f.insert(f.end(), s.v1.begin(), s.v1.end());
      f.insert(f.end(), s.v2.begin(), s.v2.end());
    }
    return f;
  }

  friend bool operator==(const RDecomposition&, const RDecomposition&) = default;
};

namespace detail {

inline void check_disjoint_family(const FiniteMetricSpace& s, const Family& f, const Rational& r,
                                  const std::string& where, Verdict& out) {
  const std::int64_t limit = s.floor_units(r);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      if (f[i].empty() || f[j].empty()) continue;
      const std::int64_t d = set_distance_units(s, f[i], f[j]);
      if (d <= limit) {
        Violation v{"disjointness",
                    where + ": pieces " + describe(f[i]) + " and " + describe(f[j]) + " at distance " +
                        to_string(s.from_units(d)) + " <= " + to_string(r),
                    std::pair{f[i], f[j]},
                    {}};
        out.violations.push_back(std::move(v));
      }
    }
}

}  // namespace detail

/// Itemizes every violated invariant of an R-decomposition. Disjointness is
/// per member: pieces of different members are never compared.
inline Verdict verify_decomposition(const FiniteMetricSpace& s, const RDecomposition& d) {
  Verdict out;
  if (d.scale <= 0) out.add("scale", "scale " + to_string(d.scale) + " is not positive");
  for (std::size_t m = 0; m < d.splits.size(); ++m) {
    const Split& sp = d.splits[m];
    const std::string where = "member " + std::to_string(m);
    if (sp.member.empty()) {
      out.add("member", where + " is empty");
      continue;
    }
    if (!s.contains(sp.member)) {
      out.add("member", where + " has points outside the space");
      continue;
    }
    std::vector<Point> covered;
    bool pieces_in_range = true;
    for (const Family* fam : {&sp.v1, &sp.v2})
      for (const auto& piece : *fam) {
        if (piece.empty()) {
          out.add("empty_piece", where + ": empty piece");
          continue;
        }
        if (!s.contains(piece)) {
          out.add("containment", where + ": piece has points outside the space");
          pieces_in_range = false;
          continue;
        }
        PointSet outside = set_difference(piece, sp.member);
        if (!outside.empty())
          out.violations.push_back(
              {"containment", where + ": piece " + describe(piece) + " leaves the member", {}, outside});
        covered.insert(covered.end(), piece.begin(), piece.end());
      }
    PointSet gap = set_difference(sp.member, make_point_set(std::move(covered)));
    if (!gap.empty()) out.violations.push_back({"coverage", where + ": uncovered " + describe(gap), {}, gap});
    if (!pieces_in_range || d.scale <= 0) continue;
    detail::check_disjoint_family(s, sp.v1, d.scale, where + " family 1", out);
    detail::check_disjoint_family(s, sp.v2, d.scale, where + " family 2", out);
    if (d.partition) {
      Family all = sp.v1;
      all.insert(all.end(), sp.v2.begin(), sp.v2.end());
      for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
          if (intersects(all[i], all[j]))
            out.add("overlap", where + ": pieces " + describe(all[i]) + " and " + describe(all[j]) + " overlap");
    }
  }
  return out;
}

/// Cap on exhaustive searches, overridable through COARSEKIT_SIZE_LIMIT.
inline std::size_t size_limit(std::size_t fallback = 12) {
  if (const char* v = std::getenv("COARSEKIT_SIZE_LIMIT")) {
    char* end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (end != v && n > 0) return static_cast<std::size_t>(n);
  }
  return fallback;
}

/// How a single member is split at one scale.
struct MemberStrategy {
  enum class Kind { components, radial, exhaustive, peel, stall };
  Kind kind = Kind::components;
  /// Radial base; when absent or outside the member, its least point is used.
  std::optional<Point> base;

  static MemberStrategy components() { return {Kind::components, {}}; }
  static MemberStrategy radial(std::optional<Point> base = {}) { return {Kind::radial, base}; }
  static MemberStrategy exhaustive() { return {Kind::exhaustive, {}}; }
  static MemberStrategy peel() { return {Kind::peel, {}}; }
  static MemberStrategy stall() { return {Kind::stall, {}}; }
};

inline const char* to_string(MemberStrategy::Kind k) {
  switch (k) {
    case MemberStrategy::Kind::components: return "components";
    case MemberStrategy::Kind::radial: return "radial";
    case MemberStrategy::Kind::exhaustive: return "exhaustive";
    case MemberStrategy::Kind::peel: return "peel";
    case MemberStrategy::Kind::stall: return "stall";
  }
  return "unknown";
}

inline MemberStrategy parse_member_strategy(const std::string& s) {
  for (auto k : {MemberStrategy::Kind::components, MemberStrategy::Kind::radial, MemberStrategy::Kind::exhaustive,
                 MemberStrategy::Kind::peel, MemberStrategy::Kind::stall})
    if (s == to_string(k)) return {k, {}};
  throw Error("unknown strategy '" + s + "'");
}

/// Splits of pts into classes joined by distance <= limit (units), by least point.
inline Family point_components(const FiniteMetricSpace& s, const PointSet& pts, std::int64_t limit_units) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (s.units(pts[i], pts[j]) <= limit_units) {
        std::size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  std::vector<PointSet> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(pts[i]);
  Family out;
  for (auto& g : groups)
    if (!g.empty()) out.push_back(std::move(g));
  return out;
}

namespace detail {

struct ExhaustiveKey {
  std::int64_t max_diameter;
  std::size_t max_cardinality;
  std::size_t piece_count;
  std::size_t uncovered_by_v1;  // prefer v1 to carry more points
  Family v1, v2;

  auto tie() const { return std::tie(max_diameter, max_cardinality, piece_count, uncovered_by_v1, v1, v2); }
  bool operator<(const ExhaustiveKey& o) const { return tie() < o.tie(); }
};

}  // namespace detail

/// Best split of x at scale r over all two-colorings of its points; within a
/// color the pieces are the finest possible (r-components). Ordering: least
/// maximal piece diameter, then least maximal piece size, fewer pieces, more
/// points in family 1, then lexicographic.
inline Split exhaustive_split(const FiniteMetricSpace& s, const PointSet& x, const Rational& r) {
  const std::size_t n = x.size();
  if (n > size_limit()) throw Error("exhaustive split: member of size " + std::to_string(n) + " exceeds the limit " +
                                    std::to_string(size_limit()));
  const std::int64_t limit = s.floor_units(r);
  std::optional<detail::ExhaustiveKey> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    PointSet a, b;
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? a : b).push_back(x[i]);
    detail::ExhaustiveKey key{0, 0, 0, 0, point_components(s, a, limit), point_components(s, b, limit)};
    for (const Family* f : {&key.v1, &key.v2})
      for (const auto& p : *f) {
        key.max_diameter = std::max(key.max_diameter, diameter_units(s, p));
        key.max_cardinality = std::max(key.max_cardinality, p.size());
        ++key.piece_count;
      }
    key.uncovered_by_v1 = n - a.size();
    if (!best || key < *best) best = std::move(key);
  }
  return {x, std::move(best->v1), std::move(best->v2)};
}

/// One defender move on a single member.
inline Split decompose_member(const FiniteMetricSpace& s, const PointSet& x, const Rational& r,
                              const MemberStrategy& strategy) {
  if (r <= 0) throw Error("decompose_member: scale must be positive");
  if (x.empty()) throw Error("decompose_member: empty member");
  detail::require_points(s, x, "decompose_member");
  switch (strategy.kind) {
    case MemberStrategy::Kind::components:
      return {x, point_components(s, x, s.floor_units(r)), {}};
    case MemberStrategy::Kind::radial: {
      Point base = x.front();
      if (strategy.base && std::binary_search(x.begin(), x.end(), *strategy.base)) base = *strategy.base;
      // band k = { p : k(r+1) <= d(p, base) < (k+1)(r+1) }
      const Rational width = r + 1;
      std::vector<PointSet> bands;
      for (Point p : x) {
        auto k = std::size_t(floor_div(s.dist(p, base), width));
        if (bands.size() <= k) bands.resize(k + 1);
        bands[k].push_back(p);
      }
      Split out{x, {}, {}};
      for (std::size_t k = 0; k < bands.size(); ++k)
        if (!bands[k].empty()) (k % 2 == 0 ? out.v1 : out.v2).push_back(std::move(bands[k]));
      return out;
    }
    case MemberStrategy::Kind::exhaustive:
      return exhaustive_split(s, x, r);
    case MemberStrategy::Kind::peel: {
      Split out{x, {{x.front()}}, {}};
      if (x.size() > 1) out.v2.push_back(PointSet(x.begin() + 1, x.end()));
      return out;
    }
    case MemberStrategy::Kind::stall:
      return {x, {x}, {}};
  }
  throw Error("decompose_member: unknown strategy");
}

}  // namespace coarsekit
