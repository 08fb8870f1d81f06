#pragma once

#include "coarsekit/cover.hpp"
#include "coarsekit/serialize.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace coarsekit {

/// fdc: the decomposition game (challenger asserts scales, defender answers
/// with decompositions of the current family). asc: the game-theoretic
/// asymptotic property C (player II asserts increasing scales, player I
/// answers with bounded disjoint families).
enum class GameKind { fdc, asc };
enum class GameStatus { ongoing, defender_won, playerI_won, move_limit_reached };

inline const char* to_string(GameKind k) { return k == GameKind::fdc ? "fdc" : "asc"; }

inline GameKind parse_game_kind(const std::string& s) {
  if (s == "fdc") return GameKind::fdc;
  if (s == "asc") return GameKind::asc;
  throw Error("unknown game kind '" + s + "'");
}

inline const char* to_string(GameStatus s) {
  switch (s) {
    case GameStatus::ongoing: return "ongoing";
    case GameStatus::defender_won: return "defender_won";
    case GameStatus::playerI_won: return "playerI_won";
    case GameStatus::move_limit_reached: return "move_limit_reached";
  }
  return "unknown";
}

inline GameStatus parse_game_status(const std::string& s) {
  for (auto st : {GameStatus::ongoing, GameStatus::defender_won, GameStatus::playerI_won,
                  GameStatus::move_limit_reached})
    if (s == to_string(st)) return st;
  throw Error("unknown game status '" + s + "'");
}

/// Role names per game kind: the scale-asserting side and the answering side.
inline const char* challenger_name(GameKind k) { return k == GameKind::fdc ? "challenger" : "playerII"; }
inline const char* responder_name(GameKind k) { return k == GameKind::fdc ? "defender" : "playerI"; }

struct Move {
  std::size_t round = 0;  // 1-based
  std::string actor;
  std::variant<Rational, RDecomposition, Family> payload;

  bool is_challenge() const { return std::holds_alternative<Rational>(payload); }
};

class MoveError : public Error {
 public:
  MoveError(std::string kind, const std::string& what, Verdict verdict = {})
      : Error(what), kind_(std::move(kind)), verdict_(std::move(verdict)) {}
  /// "finished", "turn", "scale" or "payload".
  const std::string& kind() const { return kind_; }
  const Verdict& verdict() const { return verdict_; }

 private:
  std::string kind_;
  Verdict verdict_;
};

/// A game value. Transitions validate completely before mutating, so a
/// rejected move leaves the session unchanged.
class GameSession {
 public:
  static GameSession create(std::shared_ptr<const FiniteMetricSpace> space, GameKind kind, Rational bound,
                            std::size_t max_rounds, bool monotone_challenges = false) {
    if (!space) throw Error("game: no space");
    if (bound < 0) throw Error("game: bound must be nonnegative");
    if (max_rounds < 1) throw Error("game: max_rounds must be at least 1");
    GameSession s;
    s.space_ = std::move(space);
    s.kind_ = kind;
    s.bound_ = bound;
    s.max_rounds_ = max_rounds;
    s.monotone_ = kind == GameKind::asc || monotone_challenges;
    s.family_ = {s.space_->all_points()};
    s.uncovered_ = s.space_->all_points();
    s.chain_.space = s.space_->name();
    s.chain_.bound = bound;
    s.chain_.partition = true;
    s.covers_.space = s.space_->name();
    s.covers_.bound = bound;
    if (kind == GameKind::fdc && mesh(*s.space_, s.family_) <= bound) {
      s.status_ = GameStatus::defender_won;
      s.chain_.complete = true;
    }
    return s;
  }

  GameKind kind() const { return kind_; }
  const FiniteMetricSpace& space() const { return *space_; }
  std::shared_ptr<const FiniteMetricSpace> space_ptr() const { return space_; }
  const Rational& bound() const { return bound_; }
  std::size_t max_rounds() const { return max_rounds_; }
  bool monotone_challenges() const { return monotone_; }
  GameStatus status() const { return status_; }
  bool finished() const { return status_ != GameStatus::ongoing; }
  /// Number of challenges issued so far.
  std::size_t round() const { return scales_.size(); }
  bool challenger_to_move() const { return !pending_; }
  std::string actor_to_move() const {
    return challenger_to_move() ? challenger_name(kind_) : responder_name(kind_);
  }
  const std::optional<Rational>& pending_challenge() const { return pending_; }
  const std::vector<Rational>& scales() const { return scales_; }
  const std::vector<Move>& history() const { return history_; }
  /// fdc: the current family and the accumulated chain.
  const Family& family() const { return family_; }
  const DecompositionChain& chain() const { return chain_; }
  /// asc: the accumulated families and the points not yet covered.
  const CoverSequence& covers() const { return covers_; }
  const PointSet& uncovered() const { return uncovered_; }

  GameSession& submit_challenge(const Rational& r) {
    require_ongoing();
    if (pending_) throw MoveError("turn", std::string("it is the ") + responder_name(kind_) + "'s turn");
    if (r <= 0) throw MoveError("scale", "challenge must be positive");
    if (monotone_ && !scales_.empty() && r <= scales_.back())
      throw MoveError("scale", "challenge " + to_string(r) + " does not exceed the previous " +
                                   to_string(scales_.back()));
    pending_ = r;
    scales_.push_back(r);
    history_.push_back({scales_.size(), challenger_name(kind_), r});
    return *this;
  }

  GameSession& submit_response(const RDecomposition& d) {
    require_ongoing();
    require_response_turn();
    if (kind_ != GameKind::fdc) throw MoveError("payload", "asc responses are families, not decompositions");
    Verdict v;
    if (d.scale != *pending_)
      v.add("scale", "decomposition at scale " + to_string(d.scale) + " answers challenge " + to_string(*pending_));
    if (d.parent() != family_) v.add("linkage", "splits must decompose the current family member by member, in order");
    v.merge(verify_decomposition(*space_, d), "");
    if (!v) throw MoveError("payload", "illegal decomposition\n" + v.summary(), v);

    RDecomposition step = d;
    step.partition = step.partition && verify_decomposition(*space_, step).ok();
    if (!step.partition) chain_.partition = false;
    family_ = step.pieces();
    chain_.schedule.push_back(*pending_);
    chain_.steps.push_back(step);
    history_.push_back({scales_.size(), responder_name(kind_), std::move(step)});
    pending_.reset();
    if (mesh(*space_, family_) <= bound_) {
      status_ = GameStatus::defender_won;
      chain_.complete = true;
    } else if (round() >= max_rounds_) {
      status_ = GameStatus::move_limit_reached;
    }
    return *this;
  }

  GameSession& submit_response(const Family& f) {
    require_ongoing();
    require_response_turn();
    if (kind_ != GameKind::asc) throw MoveError("payload", "fdc responses are decompositions, not families");
    Verdict v;
    for (const auto& m : f) {
      if (m.empty()) v.add("member", "empty member");
      if (!space_->contains(m)) v.add("member", "point outside the space");
    }
    if (v.ok()) {
      detail::check_disjoint_family(*space_, f, *pending_, "family", v);
      Rational m = mesh(*space_, f);
      if (m > bound_) v.add("mesh", "mesh " + to_string(m) + " exceeds bound " + to_string(bound_));
    }
    if (!v) throw MoveError("payload", "illegal family\n" + v.summary(), v);

    covers_.schedule.push_back(*pending_);
    covers_.covers.push_back(f);
    uncovered_ = set_difference(uncovered_, family_union(f));
    history_.push_back({scales_.size(), responder_name(kind_), f});
    pending_.reset();
    if (uncovered_.empty()) status_ = GameStatus::playerI_won;
    else if (round() >= max_rounds_) status_ = GameStatus::move_limit_reached;
    return *this;
  }

  /// Applies a move after checking its actor and round against the state.
  GameSession& apply(const Move& m) {
    require_ongoing();
    if (m.actor != actor_to_move())
      throw MoveError("turn", "move by '" + m.actor + "' but it is the " + actor_to_move() + "'s turn");
    const std::size_t expect_round = challenger_to_move() ? round() + 1 : round();
    if (m.round != 0 && m.round != expect_round)
      throw MoveError("turn", "move labelled round " + std::to_string(m.round) + " but the game is at round " +
                                  std::to_string(expect_round));
    return std::visit([this](const auto& p) -> GameSession& { return dispatch(p); }, m.payload);
  }

 private:
  GameSession& dispatch(const Rational& r) { return submit_challenge(r); }
  GameSession& dispatch(const RDecomposition& d) {
    if (!pending_) throw MoveError("turn", std::string("it is the ") + challenger_name(kind_) + "'s turn");
    return submit_response(d);
  }
  GameSession& dispatch(const Family& f) {
    if (!pending_) throw MoveError("turn", std::string("it is the ") + challenger_name(kind_) + "'s turn");
    return submit_response(f);
  }

  void require_ongoing() const {
    if (finished()) throw MoveError("finished", std::string("game is over: ") + to_string(status_));
  }
  void require_response_turn() const {
    if (!pending_) throw MoveError("turn", std::string("it is the ") + challenger_name(kind_) + "'s turn");
  }

  std::shared_ptr<const FiniteMetricSpace> space_;
  GameKind kind_ = GameKind::fdc;
  Rational bound_{0};
  std::size_t max_rounds_ = 1;
  bool monotone_ = false;
  GameStatus status_ = GameStatus::ongoing;
  std::optional<Rational> pending_;
  std::vector<Rational> scales_;
  std::vector<Move> history_;
  Family family_;
  DecompositionChain chain_;
  CoverSequence covers_;
  PointSet uncovered_;
};

/// Pure transition: the session after `m`, or MoveError.
inline GameSession advance(GameSession s, const Move& m) {
  s.apply(m);
  return s;
}

// ---------------------------------------------------------------------------
// Machine strategies

/// A built-in strategy for either side. Challengers: fixed, doubling,
/// mesh-adversary, geometric. Responders: components, radial, peel,
/// exhaustive, stall (fdc), greedy (asc; alias greedy-components).
struct Strategy {
  std::string name;
  std::vector<Rational> schedule;  // fixed
  Rational start{1};               // doubling, mesh-adversary
  std::int64_t n = 1;              // geometric
  std::optional<Point> base;       // radial
  std::uint64_t seed = 0;          // greedy packing order

  static Strategy named(std::string n) { return Strategy{std::move(n)}; }
};

inline bool is_challenger_strategy(const std::string& name) {
  return name == "fixed" || name == "doubling" || name == "mesh-adversary" || name == "mesh_adversary" ||
         name == "geometric";
}

inline const std::vector<std::string>& challenger_strategies() {
  static const std::vector<std::string> v{"fixed", "doubling", "mesh-adversary", "geometric"};
  return v;
}

inline const std::vector<std::string>& responder_strategies(GameKind k) {
  static const std::vector<std::string> fdc{"components", "radial", "peel", "exhaustive", "stall"};
  static const std::vector<std::string> asc{"greedy", "peel", "exhaustive"};
  return k == GameKind::fdc ? fdc : asc;
}

namespace detail {

/// Closed-form challengers continue with previous + 1 past this scale; every
/// scale above the diameter plays alike and 4^i n would overflow int64.
constexpr std::int64_t kScaleCeiling = std::int64_t(1) << 40;

inline Rational next_challenge(const GameSession& s, const Strategy& st) {
  const std::size_t i = s.round();  // 0-based index of the challenge to issue
  const auto& name = st.name;
  auto past_ceiling = [&] { return s.scales().empty() ? Rational(kScaleCeiling) : s.scales().back() + 1; };
  if (name == "fixed") {
    if (st.schedule.empty()) throw Error("fixed challenger needs a schedule");
    return *Schedule(st.schedule, true).at(i);
  }
  if (name == "doubling") {
    Rational r = st.start;
    for (std::size_t k = 0; k < i; ++k)
      if ((r *= 2) > kScaleCeiling) return past_ceiling();
    return r;
  }
  if (name == "geometric") {
    Rational r(st.n);
    for (std::size_t k = 0; k <= i; ++k)
      if ((r *= 4) > kScaleCeiling) return past_ceiling();
    return r;
  }
  if (name == "mesh-adversary" || name == "mesh_adversary") {
    if (i == 0) return st.start;
    Rational last_mesh = s.kind() == GameKind::asc ? mesh(s.space(), s.covers().covers.back())
                                                   : mesh(s.space(), s.family());
    // a zero-mesh answer would repeat the scale; the sequence must increase
    if (last_mesh == 0) last_mesh = 1;
    return s.scales().back() + last_mesh;
  }
  throw Error("unknown challenger strategy '" + name + "'");
}

/// Components of the uncovered points that are already bounded, then a
/// seeded greedy packing of B/2-balls kept r-far from everything chosen.
inline Family greedy_asc_response(const FiniteMetricSpace& s, const PointSet& uncovered, const Rational& r,
                                  const Rational& bound, std::uint64_t seed, std::size_t round) {
  Family chosen = greedy_cover_step(s, uncovered, r, bound);
  PointSet taken = family_union(chosen);
  std::vector<Point> order = set_difference(uncovered, taken);
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + round);
  std::shuffle(order.begin(), order.end(), rng);
  const std::int64_t r_units = s.floor_units(r);
  const std::int64_t half = s.floor_units(bound / 2);
  for (Point p : order) {
    if (std::binary_search(taken.begin(), taken.end(), p)) continue;
    auto far_from_chosen = [&](Point q) {
      for (const auto& c : chosen)
        if (point_set_distance_units(s, q, c) <= r_units) return false;
      return true;
    };
    if (!far_from_chosen(p)) continue;
    PointSet piece;
    for (Point q : uncovered)
      if (s.units(p, q) <= half && !std::binary_search(taken.begin(), taken.end(), q) && far_from_chosen(q))
        piece.push_back(q);
    taken = set_union(taken, piece);
    chosen.push_back(std::move(piece));
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

/// Largest coverable subset for this round alone (ties lexicographic).
inline Family exhaustive_asc_response(const FiniteMetricSpace& s, const PointSet& uncovered, const Rational& r,
                                      const Rational& bound) {
  if (uncovered.size() > size_limit())
    throw Error("exhaustive responder limited to " + std::to_string(size_limit()) + " uncovered points");
  const std::int64_t limit = s.floor_units(r), b = s.floor_units(bound);
  std::optional<Family> best;
  std::size_t best_count = 0;
  const std::size_t n = uncovered.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    PointSet sub;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) sub.push_back(uncovered[i]);
    Family comps = point_components(s, sub, limit);
    bool ok = true;
    for (const auto& c : comps) ok = ok && diameter_units(s, c) <= b;
    if (!ok) continue;
    std::sort(comps.begin(), comps.end());
    if (!best || sub.size() > best_count || (sub.size() == best_count && comps < *best)) {
      best = std::move(comps);
      best_count = sub.size();
    }
  }
  return *best;
}

}  // namespace detail

/// A legal move for the side to move; deterministic in (session, strategy).
inline Move auto_move(const GameSession& s, const Strategy& st) {
  if (s.finished()) throw MoveError("finished", "game is over");
  if (s.challenger_to_move()) {
    if (!is_challenger_strategy(st.name)) throw Error("'" + st.name + "' is not a challenger strategy");
    return {s.round() + 1, challenger_name(s.kind()), detail::next_challenge(s, st)};
  }
  const Rational r = *s.pending_challenge();
  if (s.kind() == GameKind::fdc) {
    MemberStrategy ms;
    if (st.name == "stall") ms = MemberStrategy::stall();
    else if (st.name == "radial") ms = MemberStrategy::radial(st.base);
    else ms = parse_member_strategy(st.name);
    const std::int64_t b = s.space().floor_units(s.bound());
    RDecomposition d{r, {}, true};
    for (const auto& m : s.family()) {
      if (ms.kind != MemberStrategy::Kind::stall && diameter_units(s.space(), m) <= b) d.splits.push_back({m, {m}, {}});
      else d.splits.push_back(decompose_member(s.space(), m, r, ms));
    }
    return {s.round(), responder_name(s.kind()), std::move(d)};
  }
  Family f;
  if (st.name == "greedy" || st.name == "greedy-components" || st.name == "greedy_components" ||
      st.name == "components")
    f = detail::greedy_asc_response(s.space(), s.uncovered(), r, s.bound(), st.seed, s.round());
  else if (st.name == "peel")
    f = {{s.uncovered().front()}};
  else if (st.name == "exhaustive")
    f = detail::exhaustive_asc_response(s.space(), s.uncovered(), r, s.bound());
  else
    throw Error("'" + st.name + "' is not an asc responder strategy");
  return {s.round(), responder_name(s.kind()), std::move(f)};
}

/// Alternates the two strategies until the game ends.
inline GameSession play(GameSession s, const Strategy& challenger, const Strategy& responder) {
  while (!s.finished()) s.apply(auto_move(s, s.challenger_to_move() ? challenger : responder));
  return s;
}

// ---------------------------------------------------------------------------
// Transcripts

inline Json move_json(const GameSession& s, const Move& m) {
  Json j{{"round", m.round}, {"actor", m.actor}};
  if (auto* r = std::get_if<Rational>(&m.payload)) j["challenge"] = rational_json(*r);
  else if (auto* d = std::get_if<RDecomposition>(&m.payload)) j["response"] = decomposition_json(s.space().name(), *d);
  else j["response"] = family_json(std::get<Family>(m.payload));
  return j;
}

inline Json transcript_json(const GameSession& s) {
  Json moves = Json::array();
  for (const auto& m : s.history()) moves.push_back(move_json(s, m));
  return Json{{"kind", to_string(s.kind())},
              {"space", s.space().name()},
              {"bound", rational_json(s.bound())},
              {"max_rounds", s.max_rounds()},
              {"monotone", s.monotone_challenges()},
              {"moves", moves},
              {"status", to_string(s.status())}};
}

/// Parses one move against the session it is about to be applied to.
inline Move move_from_json(const GameSession& s, const Json& j) {
  Move m;
  m.round = j.value("round", std::size_t{0});
  m.actor = j.value("actor", s.actor_to_move());
  if (j.contains("challenge")) {
    m.payload = rational_from_json(j.at("challenge"));
  } else if (j.contains("response")) {
    const Json& r = j.at("response");
    if (s.kind() == GameKind::fdc) m.payload = decomposition_from_json(r, s.pending_challenge());
    else m.payload = family_from_json(r.is_object() ? r.at("members") : r);
  } else {
    throw Error("move needs 'challenge' or 'response'");
  }
  return m;
}

class ReplayError : public Error {
 public:
  ReplayError(std::size_t index, const std::string& what) : Error(what), index_(index) {}
  /// 0-based index of the offending move (moves.size() for a status mismatch).
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

using SpaceResolver = std::function<std::shared_ptr<const FiniteMetricSpace>(const std::string&)>;

/// Re-validates every move; rejects at the first illegal one and checks the
/// recorded status.
inline GameSession replay(const Json& t, const SpaceResolver& resolve) {
  if (!t.is_object() || !t.contains("kind") || !t.contains("moves")) throw Error("malformed transcript");
  auto space = resolve(t.at("space").get<std::string>());
  if (!space) throw Error("transcript refers to unknown space '" + t.at("space").get<std::string>() + "'");
  GameSession s = GameSession::create(space, parse_game_kind(t.at("kind").get<std::string>()),
                                      rational_from_json(t.at("bound")), t.value("max_rounds", std::size_t{1000}),
                                      t.value("monotone", false));
  const Json& moves = t.at("moves");
  for (std::size_t i = 0; i < moves.size(); ++i) {
    try {
      s.apply(move_from_json(s, moves[i]));
    } catch (const Error& e) {
      throw ReplayError(i, "transcript rejected at move " + std::to_string(i) + " (round " +
                               std::to_string(moves[i].value("round", std::size_t{0})) + "): " + e.what());
    }
  }
  if (t.contains("status") && t.at("status").get<std::string>() != to_string(s.status()))
    throw ReplayError(moves.size(), std::string("transcript status '") + t.at("status").get<std::string>() +
                                        "' but replay ends '" + to_string(s.status()) + "'");
  return s;
}

/// Current state, for clients polling a session.
inline Json snapshot_json(const GameSession& s) {
  Json j{{"kind", to_string(s.kind())},
         {"space", s.space().name()},
         {"bound", rational_json(s.bound())},
         {"max_rounds", s.max_rounds()},
         {"status", to_string(s.status())},
         {"round", s.round()},
         {"to_move", s.finished() ? Json(nullptr) : Json(s.actor_to_move())},
         {"pending_challenge", s.pending_challenge() ? rational_json(*s.pending_challenge()) : Json(nullptr)},
         {"scales", rationals_json(s.scales())}};
  if (s.kind() == GameKind::fdc) {
    j["family"] = family_json(s.family());
    j["mesh"] = rational_json(mesh(s.space(), s.family()));
  } else {
    Json covers = Json::array();
    for (const auto& f : s.covers().covers) covers.push_back(family_json(f));
    j["covers"] = covers;
    j["uncovered"] = point_set_json(s.uncovered());
  }
  return j;
}

}  // namespace coarsekit
