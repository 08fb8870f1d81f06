#pragma once

#include "coarsekit/metric.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace coarsekit {

/// Nondecreasing function [0,inf) -> [0,inf) given as a step table plus a
/// linear tail.
///
///   t <= t_0                    -> v_0
///   t_{k-1} < t <= t_k          -> v_k
///   t > t_last (or no steps)    -> max(v_last, slope * t + intercept)
///
/// All values are clamped below at 0.
class ControlFunction {
 public:
  struct Step {
    Rational threshold;
    Rational value;
  };

  ControlFunction() = default;
  ControlFunction(std::vector<Step> steps, Rational slope, Rational intercept)
      : steps_(std::move(steps)), slope_(slope), intercept_(intercept) {
    for (std::size_t k = 0; k < steps_.size(); ++k) {
      if (steps_[k].threshold < 0) throw Error("control function: negative threshold");
      if (k > 0 && steps_[k].threshold <= steps_[k - 1].threshold)
        throw Error("control function: thresholds must strictly increase");
      if (k > 0 && steps_[k].value < steps_[k - 1].value) throw Error("control function: values must not decrease");
    }
    if (slope_ < 0) throw Error("control function: negative tail slope");
  }

  static ControlFunction linear(Rational slope, Rational intercept) { return {{}, slope, intercept}; }

  Rational operator()(const Rational& t) const {
    Rational v;
    if (!steps_.empty() && t <= steps_.back().threshold) {
      auto it = std::lower_bound(steps_.begin(), steps_.end(), t,
                                 [](const Step& s, const Rational& x) { return s.threshold < x; });
      v = it->value;
    } else {
      v = slope_ * t + intercept_;
      if (!steps_.empty()) v = std::max(v, steps_.back().value);
    }
    return std::max(v, Rational(0));
  }

  /// sup{t >= 0 : f(t) <= b}; nullopt when unbounded (f never exceeds b).
  /// Returns a negative value when no t qualifies.
  std::optional<Rational> sup_preimage(const Rational& b) const {
    if (b < 0) return Rational(-1);
    const bool tail_reachable = steps_.empty() || steps_.back().value <= b;
    if (tail_reachable) {
      if (slope_ == 0) {
        if (intercept_ <= b) return std::nullopt;
      } else {
        const Rational t = (b - intercept_) / slope_;
        if (steps_.empty() ? t >= 0 : t > steps_.back().threshold) return t;
      }
    }
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it)
      if (it->value <= b) return it->threshold;
    return Rational(-1);
  }

  bool unbounded() const { return slope_ > 0; }

  const std::vector<Step>& steps() const { return steps_; }
  const Rational& slope() const { return slope_; }
  const Rational& intercept() const { return intercept_; }

 private:
  std::vector<Step> steps_;
  Rational slope_{0};
  Rational intercept_{0};
};

/// A map of finite metric spaces with upper (bornologous) and lower
/// (metrically proper) controls:
///   lower(d(x,y)) <= d(f x, f y) <= upper(d(x,y)).
struct CoarseMap {
  std::shared_ptr<const FiniteMetricSpace> source;
  std::shared_ptr<const FiniteMetricSpace> target;
  std::vector<Point> map;
  ControlFunction upper;
  ControlFunction lower;

  Point operator()(Point x) const { return map[x]; }

  PointSet preimage(const PointSet& y) const {
    PointSet out;
    for (Point x = 0; x < map.size(); ++x)
      if (std::binary_search(y.begin(), y.end(), map[x])) out.push_back(x);
    return out;
  }
};

struct ControlViolation {
  Point x, y;
  bool upper;  // false: lower control violated
};

/// First pair violating either control, or nullopt when the map is valid.
inline std::optional<ControlViolation> check_coarse_map(const CoarseMap& f) {
  if (!f.source || !f.target) throw Error("coarse map: missing space");
  if (f.map.size() != f.source->size()) throw Error("coarse map: map is not total on the source");
  for (Point p : f.map)
    if (p >= f.target->size()) throw Error("coarse map: image outside target");
  for (Point x = 0; x < f.map.size(); ++x)
    for (Point y = x + 1; y < f.map.size(); ++y) {
      Rational ds = f.source->dist(x, y);
      Rational dt = f.target->dist(f.map[x], f.map[y]);
      if (dt > f.upper(ds)) return ControlViolation{x, y, true};
      if (f.lower(ds) > dt) return ControlViolation{x, y, false};
    }
  return std::nullopt;
}

/// Tightest step-table controls realized by the map itself: upper is the
/// running maximum of target distance over source distances <= t, lower the
/// running minimum over source distances >= t. Tails: flat for upper, unit
/// slope from the last realized value for lower.
inline std::pair<ControlFunction, ControlFunction> fit_controls(const FiniteMetricSpace& source,
                                                                const FiniteMetricSpace& target,
                                                                const std::vector<Point>& map) {
  std::vector<std::pair<Rational, Rational>> obs;
  for (Point x = 0; x < map.size(); ++x)
    for (Point y = x + 1; y < map.size(); ++y) obs.emplace_back(source.dist(x, y), target.dist(map[x], map[y]));
  std::sort(obs.begin(), obs.end());

  std::vector<ControlFunction::Step> up;
  for (const auto& [t, v] : obs) {
    if (!up.empty() && up.back().threshold == t) {
      up.back().value = std::max(up.back().value, v);
    } else {
      Rational prev = up.empty() ? Rational(0) : up.back().value;
      up.push_back({t, std::max(prev, v)});
    }
  }
  std::vector<ControlFunction::Step> low;
  for (auto it = obs.rbegin(); it != obs.rend(); ++it) {
    const auto& [t, v] = *it;
    if (!low.empty() && low.back().threshold == t) {
      low.back().value = std::min(low.back().value, v);
    } else {
      Rational next = low.empty() ? v : std::min(low.back().value, v);
      low.push_back({t, next});
    }
  }
  std::reverse(low.begin(), low.end());
  Rational last_up = up.empty() ? Rational(0) : up.back().value;
  Rational last_low_t = low.empty() ? Rational(0) : low.back().threshold;
  Rational last_low_v = low.empty() ? Rational(0) : low.back().value;
  return {ControlFunction(std::move(up), Rational(0), last_up),
          ControlFunction(std::move(low), Rational(1), last_low_v - last_low_t)};
}

}  // namespace coarsekit
