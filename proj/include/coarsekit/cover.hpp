#pragma once

#include "coarsekit/chain.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace coarsekit {

/// Families U_1..U_k with U_i R_i-disjoint and mesh(U_i) <= bound, jointly
/// covering the space.
struct CoverSequence {
  std::string space;
  std::vector<Rational> schedule;
  std::vector<Family> covers;
  Rational bound{0};

  friend bool operator==(const CoverSequence&, const CoverSequence&) = default;
};

/// `require_cover` = false checks a partial sequence (the still-running asc game).
inline Verdict verify_cover(const FiniteMetricSpace& s, const CoverSequence& c, bool require_cover = true) {
  Verdict out;
  if (auto why = Schedule::problem(c.schedule)) out.add("schedule", *why);
  if (c.schedule.size() != c.covers.size())
    out.add("schedule", std::to_string(c.schedule.size()) + " scales for " + std::to_string(c.covers.size()) +
                            " families");
  for (std::size_t i = 0; i < c.covers.size(); ++i) {
    const std::string where = "family " + std::to_string(i + 1);
    bool in_range = true;
    for (const auto& m : c.covers[i]) {
      if (m.empty()) out.add("member", where + ": empty member");
      if (!s.contains(m)) {
        out.add("member", where + ": point outside the space");
        in_range = false;
      }
    }
    if (!in_range) continue;
    if (i < c.schedule.size() && c.schedule[i] > 0)
      detail::check_disjoint_family(s, c.covers[i], c.schedule[i], where, out);
    Rational m = mesh(s, c.covers[i]);
    if (m > c.bound) out.add("mesh", where + ": mesh " + to_string(m) + " exceeds bound " + to_string(c.bound));
  }
  if (require_cover && !out.has("member")) {
    auto cov = is_cover(s, c.covers, s.all_points());
    if (!cov) out.violations.push_back({"coverage", "uncovered " + describe(cov.uncovered), {}, cov.uncovered});
  }
  return out;
}

enum class CoverMethod { greedy_components, exhaustive };

struct CoverResult {
  bool ok = false;
  CoverSequence cover;  // the families chosen so far (complete when ok)
  PointSet uncovered;
};

/// One greedy step: r-components of the uncovered points with diameter <= bound.
inline Family greedy_cover_step(const FiniteMetricSpace& s, const PointSet& uncovered, const Rational& r,
                                const Rational& bound) {
  Family out;
  const std::int64_t b = s.floor_units(bound);
  for (auto& c : point_components(s, uncovered, s.floor_units(r)))
    if (diameter_units(s, c) <= b) out.push_back(std::move(c));
  return out;
}

namespace detail {

using Mask = std::uint64_t;

inline PointSet mask_points(Mask m) {
  PointSet p;
  for (Point i = 0; i < 64; ++i)
    if ((m >> i) & 1) p.push_back(i);
  return p;
}

/// Backtracking over the sets each U_i covers; U_i is then the r_i-components
/// of that set, all of diameter <= bound. Candidates are tried largest first,
/// then lexicographically.
class ExhaustiveCoverSearch {
 public:
  ExhaustiveCoverSearch(const FiniteMetricSpace& s, std::vector<Rational> schedule, Rational bound)
      : s_(s), schedule_(std::move(schedule)), bound_units_(s.floor_units(bound)) {}

  std::optional<std::vector<Family>> run() {
    const Mask full = s_.size() == 64 ? ~Mask(0) : (Mask(1) << s_.size()) - 1;
    std::vector<Family> picked;
    if (!feasible(full, 0, &picked)) return std::nullopt;
    return picked;
  }

  /// Candidates at step `i` for covering part of `uncovered`, best first.
  std::vector<std::pair<Mask, Family>> candidates(Mask uncovered, std::size_t i) const {
    std::vector<std::pair<Mask, Family>> out;
    const std::int64_t limit = s_.floor_units(schedule_[i]);
    for (Mask sub = uncovered;; sub = (sub - 1) & uncovered) {
      Family comps = point_components(s_, mask_points(sub), limit);
      bool ok = true;
      for (const auto& c : comps)
        if (diameter_units(s_, c) > bound_units_) {
          ok = false;
          break;
        }
      if (ok) {
        std::sort(comps.begin(), comps.end());
        out.emplace_back(sub, std::move(comps));
      }
      if (sub == 0) break;
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      int pa = std::popcount(a.first), pb = std::popcount(b.first);
      if (pa != pb) return pa > pb;
      return a.second < b.second;
    });
    return out;
  }

 private:
  bool feasible(Mask uncovered, std::size_t i, std::vector<Family>* picked) {
    if (uncovered == 0) return true;
    if (i >= schedule_.size()) return false;
    if (!picked) {
      auto key = std::pair{uncovered, i};
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
      bool r = false;
      for (const auto& [sub, fam] : candidates(uncovered, i))
        if (feasible(uncovered & ~sub, i + 1, nullptr)) {
          r = true;
          break;
        }
      memo_[key] = r;
      return r;
    }
    for (auto& [sub, fam] : candidates(uncovered, i))
      if (feasible(uncovered & ~sub, i + 1, nullptr)) {
        picked->push_back(std::move(fam));
        return feasible(uncovered & ~sub, i + 1, picked);
      }
    return false;
  }

  const FiniteMetricSpace& s_;
  std::vector<Rational> schedule_;
  std::int64_t bound_units_;
  std::map<std::pair<Mask, std::size_t>, bool> memo_;
};

}  // namespace detail

/// Finite-scale asymptotic property C: families U_1..U_k along the schedule.
inline CoverResult asc_cover(const FiniteMetricSpace& s, const std::vector<Rational>& schedule, const Rational& bound,
                             CoverMethod method) {
  if (auto why = Schedule::problem(schedule)) throw Error("asc_cover: " + *why);
  if (bound < 0) throw Error("asc_cover: negative bound");
  CoverResult res;
  res.cover.space = s.name();
  res.cover.bound = bound;
  if (method == CoverMethod::greedy_components) {
    PointSet uncovered = s.all_points();
    for (const auto& r : schedule) {
      if (uncovered.empty()) break;
      Family u = greedy_cover_step(s, uncovered, r, bound);
      uncovered = set_difference(uncovered, family_union(u));
      res.cover.schedule.push_back(r);
      res.cover.covers.push_back(std::move(u));
    }
    res.uncovered = std::move(uncovered);
    res.ok = res.uncovered.empty();
    return res;
  }
  if (s.size() > size_limit())
    throw Error("asc_cover: exhaustive search limited to " + std::to_string(size_limit()) + " points");
  detail::ExhaustiveCoverSearch search(s, schedule, bound);
  if (auto picked = search.run()) {
    res.cover.covers = std::move(*picked);
    res.cover.schedule.assign(schedule.begin(), schedule.begin() + long(res.cover.covers.size()));
    res.ok = true;
  } else {
    res.uncovered = s.all_points();
  }
  return res;
}

/// Single-tile partitions: at step i the running complement splits into
/// U_i restricted to it and what remains. Settled pieces pass through.
inline DecompositionChain asc_to_chain(const FiniteMetricSpace& s, const CoverSequence& c) {
  if (auto v = verify_cover(s, c); !v) throw Error("asc_to_chain: invalid cover sequence\n" + v.summary());
  DecompositionChain out;
  out.space = s.name();
  out.bound = c.bound;
  out.partition = true;
  Family settled;
  PointSet rest = s.all_points();
  for (std::size_t i = 0; i < c.covers.size() && !rest.empty(); ++i) {
    RDecomposition step{c.schedule[i], {}, true};
    for (const auto& p : settled) step.splits.push_back({p, {p}, {}});
    Split sp{rest, {}, {}};
    for (const auto& u : c.covers[i]) {
      PointSet piece = set_intersection(u, rest);
      if (!piece.empty()) sp.v1.push_back(std::move(piece));
    }
    PointSet next = set_difference(rest, family_union(sp.v1));
    if (!next.empty()) sp.v2.push_back(next);
    settled.insert(settled.end(), sp.v1.begin(), sp.v1.end());
    step.splits.push_back(std::move(sp));
    rest = std::move(next);
    out.schedule.push_back(c.schedule[i]);
    out.steps.push_back(std::move(step));
  }
  out.complete = rest.empty();
  return out;
}

/// A' = A together with every B in the older family at distance < r/4 from A;
/// the A' and the untouched B are merged where they overlap.
inline Family amalgamate(const FiniteMetricSpace& s, const Family& newer, const Family& older, const Rational& r) {
  const std::int64_t limit = s.strict_below_units(r / 4);
  std::vector<bool> absorbed(older.size(), false);
  Family out;
  for (const auto& a : newer) {
    PointSet grown = a;
    for (std::size_t j = 0; j < older.size(); ++j)
      if (set_distance_units(s, a, older[j]) <= limit) {
        grown = set_union(grown, older[j]);
        absorbed[j] = true;
      }
    out.push_back(std::move(grown));
  }
  for (std::size_t j = 0; j < older.size(); ++j)
    if (!absorbed[j]) out.push_back(older[j]);
  return r_components(s, out, Rational(0));
}

struct AmalgamationStage {
  std::size_t index;  // i for the family V_i
  Rational mesh;
  bool disjoint = true;
  std::optional<std::pair<PointSet, PointSet>> witness;
  bool union_matches = true;
};

struct AmalgamationReport {
  std::vector<AmalgamationStage> stages;
  Family result;  // r_components(V_1, R_1)
  bool result_covers = false;
  bool result_disjoint = false;

  bool ok() const {
    for (const auto& st : stages)
      if (!st.disjoint || !st.union_matches) return false;
    return result_covers && result_disjoint;
  }

  std::optional<std::size_t> first_failed_stage() const {
    for (const auto& st : stages)
      if (!st.disjoint || !st.union_matches) return st.index;
    return std::nullopt;
  }
};

/// Folds amalgamate from U_k down to U_1 (V_k = U_k, V_i = amalgamate(V_{i+1},
/// U_i, R_{i+1})) recording at every stage the mesh, R_i-disjointness and the
/// union identity, then returns the R_1-components of V_1.
inline AmalgamationReport amalgamate_play(const FiniteMetricSpace& s, const CoverSequence& c) {
  if (c.covers.empty()) throw Error("amalgamate_play: no families");
  if (c.schedule.size() != c.covers.size()) throw Error("amalgamate_play: schedule/family size mismatch");
  AmalgamationReport rep;
  const std::size_t k = c.covers.size();
  Family v = c.covers[k - 1];
  PointSet running = family_union(v);
  for (std::size_t i = k - 1; i-- > 0;) {
    v = amalgamate(s, v, c.covers[i], c.schedule[i + 1]);
    running = set_union(running, family_union(c.covers[i]));
    AmalgamationStage st{i + 1, mesh(s, v)};
    auto dj = is_r_disjoint(s, v, c.schedule[i]);
    st.disjoint = dj.ok;
    if (!dj.ok) st.witness = std::pair{v[dj.witness->first], v[dj.witness->second]};
    st.union_matches = family_union(v) == running;
    rep.stages.push_back(std::move(st));
  }
  rep.result = r_components(s, v, c.schedule[0]);
  rep.result_covers = family_union(rep.result) == s.all_points();
  rep.result_disjoint = is_r_disjoint(s, rep.result, c.schedule[0]).ok;
  return rep;
}

/// Bands band_j = { z in Z : j(R+1) < d(z,X) <= (j+1)(R+1) }, j >= 0; the
/// first family is X with the odd bands, the second the even bands.
inline std::pair<Family, Family> annulus_split(const FiniteMetricSpace& s, const PointSet& z, const PointSet& x,
                                               const Rational& r) {
  if (r <= 0) throw Error("annulus_split: scale must be positive");
  if (x.empty()) throw Error("annulus_split: X is empty");
  if (!is_subset(x, z)) throw Error("annulus_split: X is not contained in Z");
  detail::require_points(s, z, "annulus_split");
  const Rational width = r + 1;
  std::vector<PointSet> bands;
  for (Point p : set_difference(z, x)) {
    const Rational d = s.from_units(point_set_distance_units(s, p, x));
    // j(R+1) < d <= (j+1)(R+1)  <=>  j = ceil(d/(R+1)) - 1
    std::int64_t j = floor_div(d, width);
    if (Rational(j) * width == d) --j;
    if (bands.size() <= std::size_t(j)) bands.resize(std::size_t(j) + 1);
    bands[std::size_t(j)].push_back(p);
  }
  std::pair<Family, Family> out;
  out.first.push_back(x);
  for (std::size_t j = 0; j < bands.size(); ++j)
    if (!bands[j].empty()) (j % 2 == 1 ? out.first : out.second).push_back(std::move(bands[j]));
  return out;
}

struct SumStep {
  RDecomposition decomposition;
  Verdict verdict;  // passes iff the second family is r-disjoint
};

/// X split over {Y} and { M \ Y : M in family }.
inline SumStep sum_theorem_step(const FiniteMetricSpace& s, const PointSet& x, const Family& family,
                                const PointSet& y, const Rational& r) {
  if (r <= 0) throw Error("sum_theorem_step: scale must be positive");
  if (y.empty()) throw Error("sum_theorem_step: Y(r) must be nonempty");
  if (family_union(family) != x) throw Error("sum_theorem_step: family does not cover X exactly");
  if (!is_subset(y, x)) throw Error("sum_theorem_step: Y(r) is not contained in X");
  Split sp{x, {y}, {}};
  for (const auto& m : family) {
    PointSet rest = set_difference(m, y);
    if (!rest.empty()) sp.v2.push_back(std::move(rest));
  }
  SumStep out{{r, {std::move(sp)}, false}, {}};
  out.verdict = verify_decomposition(s, out.decomposition);
  return out;
}

}  // namespace coarsekit
