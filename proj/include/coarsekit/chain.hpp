#pragma once

#include "coarsekit/decomposition.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace coarsekit {

/// Strictly increasing positive scales R_1 < R_2 < ...  An explicit prefix
/// may be continued arithmetically (last difference, or R_1 for a single
/// entry) when `extend` is set.
class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(std::vector<Rational> scales, bool extend = false) : scales_(std::move(scales)), extend_(extend) {
    if (auto why = problem(scales_)) throw Error("invalid schedule: " + *why);
    if (extend_ && scales_.empty()) throw Error("invalid schedule: cannot extend an empty schedule");
  }

  static std::optional<std::string> problem(const std::vector<Rational>& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] <= 0) return "scale " + to_string(s[i]) + " is not positive";
      if (i > 0 && s[i] <= s[i - 1])
        return "scales must strictly increase (" + to_string(s[i - 1]) + " then " + to_string(s[i]) + ")";
    }
    return std::nullopt;
  }

  /// Scale for round i (0-based), or nullopt when exhausted.
  std::optional<Rational> at(std::size_t i) const {
    if (i < scales_.size()) return scales_[i];
    if (!extend_) return std::nullopt;
    const Rational step = scales_.size() >= 2 ? scales_.back() - scales_[scales_.size() - 2] : scales_.front();
    return scales_.back() + step * Rational(static_cast<std::int64_t>(i + 1 - scales_.size()));
  }

  const std::vector<Rational>& explicit_scales() const { return scales_; }
  bool extends() const { return extend_; }

  /// R_i = 4^i * n, i = 1..m.
  static Schedule geometric(std::int64_t n, std::size_t m) {
    std::vector<Rational> s;
    Rational r(n);
    for (std::size_t i = 0; i < m; ++i) s.push_back(r *= 4);
    return Schedule(std::move(s));
  }

 private:
  std::vector<Rational> scales_;
  bool extend_ = false;
};

/// {X} decomposed at R_1, its pieces at R_2, and so on; complete when the
/// final family has mesh <= bound.
struct DecompositionChain {
  std::string space;
  std::vector<Rational> schedule;
  std::vector<RDecomposition> steps;
  Rational bound{0};
  bool complete = false;
  bool partition = false;

  std::size_t depth() const { return steps.size(); }

  Family final_family(const FiniteMetricSpace& s) const {
    return steps.empty() ? Family{s.all_points()} : steps.back().pieces();
  }

  friend bool operator==(const DecompositionChain&, const DecompositionChain&) = default;
};

/// Schedule monotonicity, per-step decomposition validity, parent/child
/// linkage, and the completeness claim against the final mesh.
inline Verdict verify_chain(const FiniteMetricSpace& s, const DecompositionChain& c) {
  Verdict out;
  if (auto why = Schedule::problem(c.schedule)) out.add("schedule", *why);
  if (c.schedule.size() != c.steps.size())
    out.add("schedule", "schedule has " + std::to_string(c.schedule.size()) + " scales for " +
                            std::to_string(c.steps.size()) + " steps");
  if (c.bound < 0) out.add("bound", "negative bound");
  Family expected{s.all_points()};
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const auto& step = c.steps[i];
    const std::string where = "step " + std::to_string(i + 1) + ": ";
    if (i < c.schedule.size() && step.scale != c.schedule[i])
      out.add("schedule", where + "uses scale " + to_string(step.scale) + " but the schedule says " +
                              to_string(c.schedule[i]));
    if (step.parent() != expected) out.add("linkage", where + "parent family differs from the previous pieces");
    if (c.partition && !step.partition) out.add("partition", where + "not flagged as a partition");
    out.merge(verify_decomposition(s, step), where);
    expected = step.pieces();
  }
  if (c.complete) {
    Rational m = mesh(s, c.final_family(s));
    if (m > c.bound) out.add("bound", "claimed complete but final mesh " + to_string(m) + " exceeds " + to_string(c.bound));
  }
  return out;
}

/// Supplies the scale for each round; nullopt ends the play.
using ChallengeSource = std::function<std::optional<Rational>(std::size_t round, const Family& current)>;

inline ChallengeSource from_schedule(Schedule schedule) {
  return [schedule = std::move(schedule)](std::size_t round, const Family&) { return schedule.at(round); };
}

/// Decomposes the whole current family once per round until its mesh is at
/// most `bound` or `max_steps` rounds are used. Bounded members pass through
/// as ({member}, {}).
inline DecompositionChain solve_chain(const FiniteMetricSpace& s, const ChallengeSource& challenges,
                                      const Rational& bound, const MemberStrategy& strategy, std::size_t max_steps) {
  if (max_steps < 1) throw Error("solve_chain: max_steps must be at least 1");
  if (bound < 0) throw Error("solve_chain: negative bound");
  DecompositionChain c;
  c.space = s.name();
  c.bound = bound;
  c.partition = true;
  Family current{s.all_points()};
  const std::int64_t bound_units = s.floor_units(bound);
  auto bounded = [&](const Family& f) {
    for (const auto& m : f)
      if (diameter_units(s, m) > bound_units) return false;
    return true;
  };
  while (!bounded(current) && c.steps.size() < max_steps) {
    auto r = challenges(c.steps.size(), current);
    if (!r) break;
    if (*r <= 0 || (!c.schedule.empty() && *r <= c.schedule.back()))
      throw Error("solve_chain: invalid schedule at step " + std::to_string(c.steps.size() + 1));
    RDecomposition step{*r, {}, true};
    for (const auto& m : current)
      step.splits.push_back(diameter_units(s, m) <= bound_units ? Split{m, {m}, {}}
                                                                 : decompose_member(s, m, *r, strategy));
    current = step.pieces();
    c.schedule.push_back(*r);
    c.steps.push_back(std::move(step));
  }
  c.complete = bounded(current);
  return c;
}

inline DecompositionChain solve_chain(const FiniteMetricSpace& s, const Schedule& schedule, const Rational& bound,
                                      const MemberStrategy& strategy, std::size_t max_steps) {
  return solve_chain(s, from_schedule(schedule), bound, strategy, max_steps);
}

struct OracleResult {
  /// Minimal number of rounds; nullopt when the schedule runs out first.
  std::optional<std::size_t> depth;
  /// A chain realizing the minimal depth (when finite).
  std::optional<DecompositionChain> chain;
};

constexpr std::size_t kOracleSizeLimit = 6;

/// Exhaustive game tree over all splits. Members evolve independently, and
/// shrinking a piece never increases the remaining depth, so it suffices to
/// range over two-colorings with r-component pieces.
inline OracleResult minimal_depth_oracle(const FiniteMetricSpace& s, const std::vector<Rational>& schedule,
                                         const Rational& bound) {
  if (s.size() > kOracleSizeLimit)
    throw Error("minimal_depth_oracle: space of size " + std::to_string(s.size()) + " exceeds " +
                std::to_string(kOracleSizeLimit));
  if (auto why = Schedule::problem(schedule)) throw Error("minimal_depth_oracle: " + *why);
  constexpr std::size_t inf = SIZE_MAX;
  const std::int64_t bound_units = s.floor_units(bound);
  using Mask = std::uint32_t;
  auto to_set = [](Mask m) {
    PointSet p;
    for (Point i = 0; i < 32; ++i)
      if ((m >> i) & 1) p.push_back(i);
    return p;
  };
  auto to_mask = [](const PointSet& p) {
    Mask m = 0;
    for (Point i : p) m |= Mask(1) << i;
    return m;
  };
  struct Entry {
    std::size_t depth;
    Mask colour;  // points in family 1 of the optimal split
  };
  std::map<std::pair<Mask, std::size_t>, Entry> memo;
  std::function<std::size_t(Mask, std::size_t)> solve = [&](Mask m, std::size_t round) -> std::size_t {
    if (diameter_units(s, to_set(m)) <= bound_units) return 0;
    if (round >= schedule.size()) return inf;
    auto key = std::pair{m, round};
    if (auto it = memo.find(key); it != memo.end()) return it->second.depth;
    const std::int64_t limit = s.floor_units(schedule[round]);
    Entry best{inf, 0};
    for (Mask sub = m;; sub = (sub - 1) & m) {
      std::size_t worst = 0;
      for (Mask part : {sub, Mask(m & ~sub)}) {
        if (!part) continue;
        for (const auto& piece : point_components(s, to_set(part), limit)) {
          worst = std::max(worst, solve(to_mask(piece), round + 1));
          if (worst == inf) break;
        }
        if (worst == inf) break;
      }
      if (worst != inf && worst + 1 < best.depth) best = {worst + 1, sub};
      if (sub == 0) break;
    }
    memo[key] = best;
    return best.depth;
  };

  const Mask full = s.size() >= 32 ? ~Mask(0) : (Mask(1) << s.size()) - 1;
  OracleResult out;
  const std::size_t d = solve(full, 0);
  if (d == inf) return out;
  out.depth = d;

  DecompositionChain c;
  c.space = s.name();
  c.bound = bound;
  c.partition = true;
  c.complete = true;
  Family current{s.all_points()};
  for (std::size_t round = 0; round < d; ++round) {
    const std::int64_t limit = s.floor_units(schedule[round]);
    RDecomposition step{schedule[round], {}, true};
    for (const auto& member : current) {
      if (diameter_units(s, member) <= bound_units) {
        step.splits.push_back({member, {member}, {}});
        continue;
      }
      const Mask m = to_mask(member);
      const Mask colour = memo.at({m, round}).colour;
      step.splits.push_back(
          {member, point_components(s, to_set(colour), limit), point_components(s, to_set(m & ~colour), limit)});
    }
    current = step.pieces();
    c.schedule.push_back(schedule[round]);
    c.steps.push_back(std::move(step));
  }
  out.chain = std::move(c);
  return out;
}

}  // namespace coarsekit
