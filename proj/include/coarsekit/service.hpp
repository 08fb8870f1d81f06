#pragma once

#include "coarsekit/games.hpp"
#include "coarsekit/spacegen.hpp"

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>

namespace coarsekit {

/// A strategy is a name or an object {"name", "seed", "start", "n",
/// "schedule", "base"}.
inline Strategy strategy_from_json(const Json& j) {
  if (j.is_string()) return Strategy::named(j.get<std::string>());
  if (!j.is_object() || !j.contains("name")) throw Error("strategy must be a name or an object with 'name'");
  Strategy s = Strategy::named(j.at("name").get<std::string>());
  s.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("start")) s.start = rational_from_json(j.at("start"));
  s.n = j.value("n", std::int64_t{1});
  if (j.contains("schedule")) s.schedule = rationals_from_json(j.at("schedule"));
  if (j.contains("base")) s.base = j.at("base").get<Point>();
  return s;
}

inline Json strategy_json(const Strategy& s) {
  Json j{{"name", s.name}, {"seed", s.seed}, {"start", rational_json(s.start)}, {"n", s.n}};
  if (!s.schedule.empty()) j["schedule"] = rationals_json(s.schedule);
  if (s.base) j["base"] = *s.base;
  return j;
}

/// Which side a machine plays. Accepts the per-kind names
/// (challenger/defender, playerII/playerI) and the neutral ones.
inline bool machine_is_challenger(GameKind k, const std::string& role) {
  if (role == "challenger" || role == challenger_name(k)) return true;
  if (role == "responder" || role == "defender" || role == responder_name(k)) return false;
  throw Error("unknown role '" + role + "' for a " + std::string(to_string(k)) + " game");
}

struct ServiceResponse {
  int status = 200;
  Json body;
};

/// Space catalog plus game sessions. Every method returns an HTTP-shaped
/// response; the transport binding lives in http.hpp.
class SessionStore {
 public:
  explicit SessionStore(std::optional<std::filesystem::path> state_dir = {}) : state_dir_(std::move(state_dir)) {
    if (state_dir_) restore();
  }

  ServiceResponse post_space(const Json& body) {
    std::shared_ptr<const FiniteMetricSpace> space;
    try {
      if (body.is_object() && body.contains("metric")) {
        space = std::make_shared<const FiniteMetricSpace>(space_from_json(body));
      } else {
        auto spec = generator_spec_from_json(body);
        if (spec.kind == GeneratorKind::file) return error(400, "file generators are not available over HTTP");
        space = std::make_shared<const FiniteMetricSpace>(generate(spec));
      }
    } catch (const MetricError& e) {
      Json j = error_body(e.what());
      const auto& v = e.violation();
      j["violation"] = {{"kind", to_string(v.kind)}, {"triple", Json::array({v.i, v.j, v.k})}};
      return {400, j};
    } catch (const std::exception& e) {
      return error(400, e.what());
    }
    if (!valid_name(space->name())) return error(400, "space name must match [A-Za-z0-9._-]+");
    std::unique_lock lock(mu_);
    if (auto it = spaces_.find(space->name()); it != spaces_.end()) {
      if (*it->second == *space) return {200, Json{{"name", space->name()}, {"size", space->size()}}};
      return error(409, "a different space named '" + space->name() + "' exists");
    }
    spaces_[space->name()] = space;
    if (state_dir_) write_json_file(path_for("spaces", space->name()).string(), space_json(*space));
    return {201, Json{{"name", space->name()}, {"size", space->size()}}};
  }

  ServiceResponse list_spaces() const {
    std::shared_lock lock(mu_);
    Json a = Json::array();
    for (const auto& [name, s] : spaces_) a.push_back({{"name", name}, {"size", s->size()}});
    return {200, a};
  }

  ServiceResponse get_space(const std::string& name) const {
    auto s = find_space(name);
    if (!s) return error(404, "unknown space '" + name + "'");
    return {200, space_json(*s)};
  }

  ServiceResponse create_session(const Json& body) {
    std::shared_ptr<Entry> entry;
    try {
      if (!body.is_object() || !body.contains("space") || !body.contains("kind") || !body.contains("bound"))
        return error(400, "session needs 'space', 'kind' and 'bound'");
      auto space = find_space(body.at("space").get<std::string>());
      if (!space) return error(404, "unknown space '" + body.at("space").get<std::string>() + "'");
      const GameKind kind = parse_game_kind(body.at("kind").get<std::string>());
      const Rational bound = rational_from_json(body.at("bound"));
      const auto max_rounds = body.value("max_rounds", std::int64_t{100});
      if (max_rounds < 1) return error(400, "max_rounds must be at least 1");
      entry = std::make_shared<Entry>(GameSession::create(space, kind, bound, std::size_t(max_rounds),
                                                          body.value("monotone", false)));
      if (body.contains("machine_role") && !body.at("machine_role").is_null()) {
        Machine m;
        m.challenger = machine_is_challenger(kind, body.at("machine_role").get<std::string>());
        if (!body.contains("strategy")) return error(400, "machine_role needs a 'strategy'");
        m.strategy = strategy_from_json(body.at("strategy"));
        if (is_challenger_strategy(m.strategy.name) != m.challenger)
          return error(400, "strategy '" + m.strategy.name + "' does not fit role '" +
                                body.at("machine_role").get<std::string>() + "'");
        entry->machine = std::move(m);
      }
      entry->id = fresh_id();
      machine_reply(*entry);
    } catch (const std::exception& e) {
      return error(400, e.what());
    }
    publish(*entry);
    std::unique_lock lock(mu_);
    sessions_[entry->id] = entry;
    return {201, *entry->view};
  }

  /// Body {"expect_version": k, "move": {...}}; the move uses the transcript
  /// move format (round optional).
  ServiceResponse post_move(const std::string& id, const Json& body) {
    auto entry = find_session(id);
    if (!entry) return error(404, "unknown session '" + id + "'");
    if (!body.is_object() || !body.contains("expect_version") || !body.contains("move"))
      return error(400, "body needs 'expect_version' and 'move'");
    std::lock_guard g(entry->mu);
    const auto version = entry->session.history().size();
    if (body.at("expect_version").get<std::int64_t>() != std::int64_t(version)) {
      Json j = error_body("version mismatch");
      j["version"] = version;
      return {409, j};
    }
    GameSession next = entry->session;
    try {
      next.apply(move_from_json(next, body.at("move")));
    } catch (const MoveError& e) {
      Json j = error_body(e.what());
      j["kind"] = e.kind();
      j["verdict"] = verdict_json(e.verdict());
      return {422, j};
    } catch (const std::exception& e) {
      Json j = error_body(e.what());
      j["kind"] = "payload";
      return {422, j};
    }
    entry->session = std::move(next);
    try {
      machine_reply(*entry);
    } catch (const std::exception& e) {
      // the human move stands; the machine could not answer
      entry->machine_error = e.what();
    }
    publish(*entry);
    return {200, *std::atomic_load(&entry->view)};
  }

  ServiceResponse get_session(const std::string& id) const {
    auto entry = find_session(id);
    if (!entry) return error(404, "unknown session '" + id + "'");
    return {200, *std::atomic_load(&entry->view)};
  }

  ServiceResponse get_transcript(const std::string& id) const {
    auto entry = find_session(id);
    if (!entry) return error(404, "unknown session '" + id + "'");
    return {200, *std::atomic_load(&entry->transcript)};
  }

  std::size_t session_count() const {
    std::shared_lock lock(mu_);
    return sessions_.size();
  }

 private:
  struct Machine {
    bool challenger = true;
    Strategy strategy;
  };

  struct Entry {
    explicit Entry(GameSession s) : session(std::move(s)) {}
    std::mutex mu;
    std::string id;
    GameSession session;
    std::optional<Machine> machine;
    std::string machine_error;
    // immutable published copies for readers
    std::shared_ptr<const Json> view;
    std::shared_ptr<const Json> transcript;
  };

  static Json error_body(const std::string& what) { return Json{{"error", what}}; }
  static ServiceResponse error(int status, const std::string& what) { return {status, error_body(what)}; }

  static bool valid_name(const std::string& n) {
    if (n.empty() || n == "." || n == "..") return false;
    for (char c : n)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '_' && c != '-') return false;
    return true;
  }

  std::filesystem::path path_for(const char* sub, const std::string& name) const {
    return *state_dir_ / sub / (name + ".json");
  }

  std::string fresh_id() {
    std::lock_guard g(id_mu_);
    std::uniform_int_distribution<std::uint64_t> d;
    for (;;) {
      char buf[17];
      std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d(rng_)));
      std::shared_lock lock(mu_);
      if (!sessions_.count(buf)) return buf;
    }
  }

  std::shared_ptr<const FiniteMetricSpace> find_space(const std::string& name) const {
    std::shared_lock lock(mu_);
    auto it = spaces_.find(name);
    return it == spaces_.end() ? nullptr : it->second;
  }

  std::shared_ptr<Entry> find_session(const std::string& id) const {
    std::shared_lock lock(mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  static void machine_reply(Entry& e) {
    e.machine_error.clear();
    if (!e.machine || e.session.finished()) return;
    if (e.session.challenger_to_move() != e.machine->challenger) return;
    e.session.apply(auto_move(e.session, e.machine->strategy));
  }

  /// Caller holds e.mu, or e is not yet shared.
  void publish(Entry& e) {
    auto transcript = std::make_shared<const Json>(transcript_json(e.session));
    Json v{{"id", e.id}, {"version", e.session.history().size()}};
    v["machine"] = e.machine ? Json{{"role", e.machine->challenger ? challenger_name(e.session.kind())
                                                                    : responder_name(e.session.kind())},
                                    {"strategy", strategy_json(e.machine->strategy)}}
                             : Json(nullptr);
    if (!e.machine_error.empty()) v["machine_error"] = e.machine_error;
    v["session"] = snapshot_json(e.session);
    std::atomic_store(&e.view, std::shared_ptr<const Json>(std::make_shared<const Json>(std::move(v))));
    std::atomic_store(&e.transcript, transcript);
    if (state_dir_) {
      Json saved{{"id", e.id}, {"machine", (*e.view)["machine"]}, {"transcript", *transcript}};
      write_json_file(path_for("sessions", e.id).string(), saved);
    }
  }

  void restore() {
    namespace fs = std::filesystem;
    fs::create_directories(*state_dir_ / "spaces");
    fs::create_directories(*state_dir_ / "sessions");
    for (const auto& f : fs::directory_iterator(*state_dir_ / "spaces")) {
      if (f.path().extension() != ".json") continue;
      auto s = std::make_shared<const FiniteMetricSpace>(load_space(f.path().string()));
      spaces_[s->name()] = s;
    }
    auto resolve = [this](const std::string& n) -> std::shared_ptr<const FiniteMetricSpace> {
      auto it = spaces_.find(n);
      return it == spaces_.end() ? nullptr : it->second;
    };
    for (const auto& f : fs::directory_iterator(*state_dir_ / "sessions")) {
      if (f.path().extension() != ".json") continue;
      Json saved = read_json_file(f.path().string());
      auto e = std::make_shared<Entry>(replay(saved.at("transcript"), resolve));
      e->id = saved.at("id").get<std::string>();
      if (saved.contains("machine") && !saved.at("machine").is_null()) {
        const Json& m = saved.at("machine");
        e->machine = Machine{machine_is_challenger(e->session.kind(), m.at("role").get<std::string>()),
                             strategy_from_json(m.at("strategy"))};
      }
      std::lock_guard g(e->mu);
      publish(*e);
      sessions_[e->id] = e;
    }
  }

  std::optional<std::filesystem::path> state_dir_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<const FiniteMetricSpace>> spaces_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::mutex id_mu_;
  std::mt19937_64 rng_{std::random_device{}()};
};

}  // namespace coarsekit
