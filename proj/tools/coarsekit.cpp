// coarsekit command-line tool. Exit codes: 0 ok, 2 usage, 3 generation,
// 4 solver, 5 validation.

#include "coarsekit/http.hpp"
#include "coarsekit/pullback.hpp"
#include "coarsekit/shorthand.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace coarsekit;

namespace {

constexpr int kOk = 0, kUsage = 2, kGeneration = 3, kSolver = 4, kValidation = 5;

struct Exit {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) { throw Exit{code, message}; }

std::vector<Rational> parse_list(const std::string& s) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    auto item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      out.push_back(parse_rational(item));
    } catch (const std::exception& e) {
      fail(kUsage, "bad scale list '" + s + "': " + e.what());
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Rational parse_flag(const std::string& name, const std::string& v) {
  try {
    return parse_rational(v);
  } catch (const std::exception& e) {
    fail(kUsage, "--" + name + ": " + e.what());
  }
}

std::shared_ptr<const FiniteMetricSpace> load_space_flag(const std::string& path) {
  Json j;
  try {
    j = read_json_file(path);
  } catch (const std::exception& e) {
    fail(kUsage, e.what());
  }
  try {
    return std::make_shared<const FiniteMetricSpace>(space_from_json(j));
  } catch (const std::exception& e) {
    fail(kValidation, path + ": " + e.what());
  }
}

void emit(const std::string& out, const Json& j) {
  if (out.empty() || out == "-") std::cout << dump(j);
  else write_json_file(out, j);
}

MemberStrategy member_strategy(const std::string& name, std::optional<Point> base) {
  MemberStrategy ms;
  try {
    ms = parse_member_strategy(name);
  } catch (const std::exception& e) {
    fail(kUsage, e.what());
  }
  if (base) {
    if (ms.kind != MemberStrategy::Kind::radial) fail(kUsage, "--base applies to the radial strategy only");
    ms.base = base;
  }
  return ms;
}

// ---------------------------------------------------------------- gen

struct GenOpts {
  std::string kind, p = "1/2", name, input, out;
  std::int64_t n = 0, width = 0, height = 0, branching = 0, depth = -1, radius = 0;
  std::optional<std::uint64_t> seed;
};

int run_gen(const GenOpts& o) {
  GeneratorSpec g;
  try {
    g.kind = parse_generator_kind(o.kind);
  } catch (const std::exception& e) {
    fail(kUsage, e.what());
  }
  auto need = [](bool ok, const char* what) {
    if (!ok) fail(kUsage, std::string("gen: ") + what);
  };
  switch (g.kind) {
    case GeneratorKind::path: need(o.n > 0, "path needs --n > 0"); break;
    case GeneratorKind::grid: need(o.width > 0 && o.height > 0, "grid needs --width and --height > 0"); break;
    case GeneratorKind::tree: need(o.branching > 0 && o.depth >= 0, "tree needs --branching > 0 and --depth >= 0"); break;
    case GeneratorKind::sum_ball_a:
    case GeneratorKind::sum_ball_b: need(o.radius > 0, "sum balls need --radius > 0"); break;
    case GeneratorKind::random_graph:
      need(o.n > 0, "random-graph needs --n > 0");
      need(o.seed.has_value(), "random-graph needs --seed");
      break;
    case GeneratorKind::file: need(!o.input.empty(), "file needs --input"); break;
  }
  g.n = o.n;
  g.width = o.width;
  g.height = o.height;
  g.branching = o.branching;
  g.depth = o.depth;
  g.radius = o.radius;
  g.edge_probability = parse_flag("p", o.p);
  g.seed = o.seed;
  g.path = o.input;
  g.name = o.name;
  FiniteMetricSpace s = [&] {
    try {
      return generate(g);
    } catch (const std::exception& e) {
      fail(kGeneration, e.what());
    }
  }();
  emit(o.out, space_json(s));
  std::cerr << "generated " << s.name() << " (" << s.size() << " points)\n";
  return kOk;
}

// ---------------------------------------------------------------- solvers

struct SolveOpts {
  std::string space, r, schedule, bound = "0", strategy, out;
  std::optional<Point> base;
  std::optional<std::int64_t> geometric;
  std::size_t max_steps = 64;
  bool no_extend = false, allow_partial = false;
  std::string family;
};

int run_decompose(const SolveOpts& o) {
  const Rational r = parse_flag("r", o.r);
  if (r <= 0) fail(kUsage, "decompose: scale must be positive");
  const auto ms = member_strategy(o.strategy.empty() ? "components" : o.strategy, o.base);
  auto s = load_space_flag(o.space);
  Family parent{s->all_points()};
  if (!o.family.empty()) {
    try {
      Json j = read_json_file(o.family);
      parent = family_from_json(j.is_object() ? j.at("members") : j);
    } catch (const std::exception& e) {
      fail(kUsage, "--family: " + std::string(e.what()));
    }
    for (const auto& m : parent)
      if (m.empty() || !s->contains(m)) fail(kValidation, "--family: members must be nonempty subsets of the space");
  }
  RDecomposition d{r, {}, true};
  try {
    for (const auto& m : parent) d.splits.push_back(decompose_member(*s, m, r, ms));
  } catch (const std::exception& e) {
    fail(kSolver, e.what());
  }
  for (const auto& sp : d.splits) d.partition = d.partition && shorthand::pieces_disjoint(sp);
  const Verdict v = verify_decomposition(*s, d);
  Json j = decomposition_json(s->name(), d);
  j["verdict"] = verdict_json(v);
  if (!v && !o.allow_partial) fail(kSolver, "decomposition does not verify\n" + v.summary());
  emit(o.out, j);
  return v ? kOk : kSolver;
}

int run_chain(const SolveOpts& o) {
  if (o.schedule.empty() == !o.geometric) fail(kUsage, "chain: give exactly one of --schedule and --geometric");
  const Rational bound = parse_flag("bound", o.bound);
  if (bound < 0) fail(kUsage, "chain: bound must be nonnegative");
  if (o.max_steps < 1) fail(kUsage, "chain: --max-steps must be at least 1");
  const auto ms = member_strategy(o.strategy.empty() ? "radial" : o.strategy, o.base);
  std::optional<Schedule> schedule;
  ChallengeSource source;
  if (o.geometric) {
    if (*o.geometric < 1) fail(kUsage, "chain: --geometric needs n >= 1");
    source = geometric_challenges(*o.geometric);
  } else {
    try {
      schedule.emplace(parse_list(o.schedule), !o.no_extend);
    } catch (const Exit&) {
      throw;
    } catch (const std::exception& e) {
      fail(kUsage, e.what());
    }
    source = from_schedule(*schedule);
  }
  auto s = load_space_flag(o.space);
  DecompositionChain c;
  try {
    c = solve_chain(*s, source, bound, ms, o.max_steps);
  } catch (const std::exception& e) {
    fail(kSolver, e.what());
  }
  const Verdict v = verify_chain(*s, c);
  Json j = chain_json(c);
  j["verdict"] = verdict_json(v);
  const bool ok = v.ok() && c.complete;
  if (!ok && !o.allow_partial)
    fail(kSolver, c.complete ? "chain does not verify\n" + v.summary()
                             : "chain incomplete after " + std::to_string(c.depth()) + " steps (mesh " +
                                   to_string(mesh(*s, c.final_family(*s))) + " > " + to_string(bound) + ")");
  emit(o.out, j);
  std::cerr << (c.complete ? "complete" : "partial") << " chain of depth " << c.depth() << "\n";
  return ok ? kOk : kSolver;
}

int run_cover(const SolveOpts& o) {
  if (o.schedule.empty()) fail(kUsage, "cover: --schedule is required");
  const auto schedule = parse_list(o.schedule);
  if (auto why = Schedule::problem(schedule)) fail(kUsage, "cover: " + *why);
  const Rational bound = parse_flag("bound", o.bound);
  if (bound < 0) fail(kUsage, "cover: bound must be nonnegative");
  CoverMethod method;
  const std::string name = o.strategy.empty() ? "greedy" : o.strategy;
  if (name == "greedy" || name == "greedy-components" || name == "greedy_components")
    method = CoverMethod::greedy_components;
  else if (name == "exhaustive") method = CoverMethod::exhaustive;
  else fail(kUsage, "cover: strategy must be greedy or exhaustive");
  auto s = load_space_flag(o.space);
  CoverResult res;
  try {
    res = asc_cover(*s, schedule, bound, method);
  } catch (const std::exception& e) {
    fail(kSolver, e.what());
  }
  const Verdict v = verify_cover(*s, res.cover, res.ok);
  Json j = cover_json(res.cover);
  j["verdict"] = verdict_json(v);
  if (!res.ok) j["uncovered"] = point_set_json(res.uncovered);
  const bool ok = res.ok && v.ok();
  if (!ok && !o.allow_partial)
    fail(kSolver, res.ok ? "cover does not verify\n" + v.summary()
                         : "schedule exhausted with " + std::to_string(res.uncovered.size()) + " points uncovered");
  emit(o.out, j);
  std::cerr << (res.ok ? "cover" : "partial cover") << " with " << res.cover.covers.size() << " families\n";
  return ok ? kOk : kSolver;
}

// ---------------------------------------------------------------- game

struct GameOpts {
  std::string space, kind = "fdc", bound = "0", challenger, defender, interactive, transcript, start = "1", schedule;
  std::size_t max_rounds = 100;
  std::uint64_t seed = 0;
  std::int64_t n = 1;
  std::optional<Point> base;
  bool monotone = false, verify_amalgam = false;
};

Strategy make_strategy(const GameOpts& o, const std::string& name) {
  Strategy st = Strategy::named(name);
  st.seed = o.seed;
  st.start = parse_flag("start", o.start);
  st.n = o.n;
  st.base = o.base;
  if (!o.schedule.empty()) st.schedule = parse_list(o.schedule);
  return st;
}

void print_repl_help(GameKind k) {
  std::cout << "moves:\n  challenge R\n";
  if (k == GameKind::fdc) std::cout << "  split i: [0-4|10-11] / [5-9]; j: [...] / [...]   (unnamed members pass through)\n";
  else std::cout << "  cover [0,1|3,4]\n";
  std::cout << "  {JSON move}\ncommands: show, help, quit\n";
}

int run_game(const GameOpts& o) {
  GameKind kind;
  try {
    kind = parse_game_kind(o.kind);
  } catch (const std::exception& e) {
    fail(kUsage, e.what());
  }
  const Rational bound = parse_flag("bound", o.bound);
  if (bound < 0) fail(kUsage, "game: bound must be nonnegative");
  if (o.max_rounds < 1) fail(kUsage, "game: --max-rounds must be at least 1");
  std::optional<bool> human_challenges;
  if (!o.interactive.empty()) {
    try {
      human_challenges = machine_is_challenger(kind, o.interactive);
    } catch (const std::exception& e) {
      fail(kUsage, e.what());
    }
  }
  const bool need_challenger = !human_challenges || !*human_challenges;
  const bool need_responder = !human_challenges || *human_challenges;
  if (need_challenger && o.challenger.empty()) fail(kUsage, "game: --challenger is required");
  if (need_responder && o.defender.empty()) fail(kUsage, "game: --defender is required");
  if (need_challenger && !is_challenger_strategy(o.challenger))
    fail(kUsage, "game: unknown challenger '" + o.challenger + "'");
  if (need_responder) {
    const auto& names = responder_strategies(kind);
    bool known = std::find(names.begin(), names.end(), o.defender) != names.end() ||
                 (kind == GameKind::asc && (o.defender == "greedy-components" || o.defender == "greedy_components" ||
                                            o.defender == "components"));
    if (!known) fail(kUsage, "game: unknown " + std::string(responder_name(kind)) + " strategy '" + o.defender + "'");
  }
  if (need_challenger && o.challenger == "fixed" && o.schedule.empty())
    fail(kUsage, "game: the fixed challenger needs --schedule");
  const Strategy challenger = need_challenger ? make_strategy(o, o.challenger) : Strategy{};
  const Strategy responder = need_responder ? make_strategy(o, o.defender) : Strategy{};
  auto space = load_space_flag(o.space);

  GameSession s = GameSession::create(space, kind, bound, o.max_rounds, o.monotone);
  auto write_transcript = [&] {
    if (!o.transcript.empty()) write_json_file(o.transcript, transcript_json(s));
  };
  auto machine = [&] {
    while (!s.finished() && (!human_challenges || s.challenger_to_move() != *human_challenges)) {
      try {
        s.apply(auto_move(s, s.challenger_to_move() ? challenger : responder));
      } catch (const std::exception& e) {
        write_transcript();
        fail(kSolver, std::string("machine ") + s.actor_to_move() + " failed: " + e.what());
      }
    }
  };

  machine();
  if (human_challenges) {
    std::cout << "coarsekit " << to_string(kind) << " game on " << space->name() << " (" << space->size()
              << " points), bound " << to_string(bound) << "; you are the " << s.actor_to_move()
              << ". Type 'help' for the move syntax.\n";
    std::string line;
    while (!s.finished()) {
      std::cout << "[round " << (s.challenger_to_move() ? s.round() + 1 : s.round()) << "] " << s.actor_to_move()
                << "> " << std::flush;
      if (!std::getline(std::cin, line)) break;
      auto t = shorthand::trim(line);
      if (t.empty()) continue;
      if (t == "quit" || t == "exit") break;
      if (t == "help") {
        print_repl_help(kind);
        continue;
      }
      if (t == "show") {
        std::cout << dump(snapshot_json(s));
        continue;
      }
      try {
        s.apply(shorthand::parse_move(s, t));
        std::cout << "accepted\n";
      } catch (const MoveError& e) {
        std::cout << "rejected: " << e.what() << "\n";
        continue;
      } catch (const std::exception& e) {
        std::cout << "rejected: " << e.what() << "\n";
        continue;
      }
      const std::size_t before = s.history().size();
      machine();
      for (std::size_t i = before; i < s.history().size(); ++i)
        std::cout << "machine: " << move_json(s, s.history()[i]).dump() << "\n";
    }
  }
  write_transcript();
  std::cout << "status: " << to_string(s.status()) << " after " << s.round() << " rounds\n";

  if (o.verify_amalgam) {
    if (kind != GameKind::asc || s.status() != GameStatus::playerI_won)
      fail(kUsage, "--verify-amalgam needs an asc game won by playerI");
    auto rep = amalgamate_play(*space, s.covers());
    for (const auto& st : rep.stages) {
      std::cout << "stage " << st.index << ": mesh " << to_string(st.mesh) << ", "
                << (st.disjoint ? "disjoint" : "NOT disjoint") << ", union " << (st.union_matches ? "ok" : "MISMATCH");
      if (st.witness)
        std::cout << ", witness " << describe(st.witness->first) << " " << describe(st.witness->second);
      std::cout << "\n";
    }
    std::cout << "result: " << rep.result.size() << " members, " << (rep.result_covers ? "covers" : "does NOT cover")
              << ", " << (rep.result_disjoint ? "disjoint" : "NOT disjoint") << "\n";
    if (!rep.ok()) fail(kValidation, "amalgamation stage check failed at stage " +
                                         std::to_string(rep.first_failed_stage().value_or(0)));
  }
  return kOk;
}

// ---------------------------------------------------------------- witness

struct WitnessOpts {
  std::string space, eps, r, strategy = "radial", bound, cutoff = "1", out;
  std::optional<std::int64_t> n;
  std::int64_t n_max = 8;
  std::size_t max_steps = 8;
  std::optional<Point> base;
};

int run_witness(const WitnessOpts& o) {
  const auto ms = member_strategy(o.strategy, o.base);
  if (o.max_steps < 1) fail(kUsage, "witness: --max-steps must be at least 1");
  std::optional<Rational> bound;
  if (!o.bound.empty()) {
    bound = parse_flag("bound", o.bound);
    if (*bound < 0) fail(kUsage, "witness: bound must be nonnegative");
  }
  if (o.n) {
    if (*o.n < 1) fail(kUsage, "witness: --n must be positive");
    if (!o.eps.empty() || !o.r.empty()) fail(kUsage, "witness: --n excludes --eps/--r");
    const Rational cutoff = parse_flag("cutoff", o.cutoff);
    auto s = load_space_flag(o.space);
    DecompositionChain c;
    PartitionTree t;
    try {
      c = solve_chain(*s, geometric_challenges(*o.n), bound.value_or(Rational(4 * *o.n)), ms, o.max_steps);
      if (!c.complete) fail(kSolver, "witness: chain incomplete after " + std::to_string(c.depth()) + " steps");
      t = build_partition_tree(*s, c, *o.n);
    } catch (const Exit&) {
      throw;
    } catch (const std::exception& e) {
      fail(kSolver, e.what());
    }
    auto rep = variation_report(*s, t, cutoff);
    emit(o.out, witness_report_json(s->name(), rep));
    std::cerr << "n=" << *o.n << " m=" << rep.m << " max adjacent variation " << rep.max_adjacent << "\n";
    return kOk;
  }
  if (o.eps.empty() || o.r.empty()) fail(kUsage, "witness: give --n, or --eps and --r");
  double eps;
  try {
    eps = std::stod(o.eps);
  } catch (const std::exception&) {
    fail(kUsage, "witness: --eps must be a number");
  }
  const Rational r = parse_flag("r", o.r);
  if (!(eps > 0) || r <= 0) fail(kUsage, "witness: --eps and --r must be positive");
  if (o.n_max < 1) fail(kUsage, "witness: --n-max must be at least 1");
  auto s = load_space_flag(o.space);
  PropertyACheck res;
  try {
    res = property_a_check(*s, eps, r, ms, o.n_max, bound, o.max_steps);
  } catch (const std::exception& e) {
    fail(kSolver, e.what());
  }
  if (!res.ok) fail(kSolver, "witness: no n <= " + std::to_string(o.n_max) + " reaches variation < " + o.eps +
                                 " (best " + std::to_string(res.best) + ")");
  Json j = witness_report_json(s->name(), *res.report);
  j["property_a"] = {{"eps", float_json(eps)},
                     {"R", rational_json(r)},
                     {"n", res.n},
                     {"S", rational_json(res.support_radius)},
                     {"achieved", float_json(res.achieved)}};
  emit(o.out, j);
  std::cerr << "n=" << res.n << " S=" << to_string(res.support_radius) << " variation " << res.achieved << "\n";
  return kOk;
}

// ---------------------------------------------------------------- check

std::string detect_kind(const Json& j) {
  if (!j.is_object()) return "unknown";
  if (j.contains("metric")) return "space";
  if (j.contains("moves") && j.contains("kind")) return "transcript";
  if (j.contains("variation")) return "witness";
  if (j.contains("steps")) return "chain";
  if (j.contains("covers")) return "cover";
  if (j.contains("splits")) return "decomposition";
  if (j.contains("members")) return "family";
  return "unknown";
}

/// Finds the space named `name`: the --space file, else a space file with
/// that name next to the checked file.
std::shared_ptr<const FiniteMetricSpace> resolve_space(const std::string& name, const std::string& flag,
                                                       const fs::path& near) {
  if (!flag.empty()) {
    auto s = load_space_flag(flag);
    if (!name.empty() && s->name() != name)
      fail(kValidation, "--space holds '" + s->name() + "' but the file refers to '" + name + "'");
    return s;
  }
  const fs::path dir = near.has_parent_path() ? near.parent_path() : fs::path(".");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      Json j = read_json_file(f.string());
      if (j.is_object() && j.contains("metric") && j.value("name", std::string()) == name)
        return std::make_shared<const FiniteMetricSpace>(space_from_json(j));
    } catch (const std::exception&) {
    }
  }
  fail(kValidation, "cannot find space '" + name + "' (pass --space)");
}

int run_check(const std::string& file, const std::string& space_flag) {
  Json j;
  try {
    j = read_json_file(file);
  } catch (const std::exception& e) {
    fail(kValidation, e.what());
  }
  const std::string kind = detect_kind(j);
  Verdict v;
  auto space_of = [&] { return resolve_space(j.value("space", std::string()), space_flag, fs::path(file)); };
  try {
    if (kind == "space") {
      auto s = space_from_json(j);
      (void)s;
    } else if (kind == "decomposition") {
      auto s = space_of();
      v = verify_decomposition(*s, decomposition_from_json(j));
    } else if (kind == "chain") {
      auto s = space_of();
      v = verify_chain(*s, chain_from_json(j));
    } else if (kind == "cover") {
      auto s = space_of();
      auto c = cover_from_json(j);
      const bool claims_cover = !j.contains("uncovered");
      v = verify_cover(*s, c, claims_cover);
    } else if (kind == "family") {
      auto s = space_of();
      for (const auto& m : family_from_json(j.at("members")))
        if (m.empty() || !s->contains(m)) v.add("member", "member " + describe(m) + " is not a nonempty subset");
    } else if (kind == "transcript") {
      auto resolver = [&](const std::string& name) { return resolve_space(name, space_flag, fs::path(file)); };
      try {
        GameSession g = replay(j, resolver);
        if (transcript_json(g).at("moves") != j.at("moves"))
          v.add("replay", "replayed moves do not reproduce the recorded ones");
      } catch (const ReplayError& e) {
        v.add("replay", e.what());
      }
    } else if (kind == "witness") {
      v = verify_witness_report_json(j);
    } else {
      fail(kValidation, file + ": unrecognized artifact");
    }
  } catch (const Exit&) {
    throw;
  } catch (const MetricError& e) {
    v.add(to_string(e.violation().kind), e.what());
  } catch (const std::exception& e) {
    v.add("format", e.what());
  }
  if (!v) {
    std::cerr << file << ": invalid " << kind << "\n";
    for (const auto& x : v.violations) std::cerr << "  " << x.kind << ": " << x.detail << "\n";
    return kValidation;
  }
  std::cout << file << ": valid " << kind << "\n";
  return kOk;
}

// ---------------------------------------------------------------- serve

int run_serve(const std::string& addr, int port, const std::string& state_dir) {
  if (port < 0 || port > 65535) fail(kUsage, "serve: bad port");
  std::optional<fs::path> dir;
  if (!state_dir.empty()) dir = fs::path(state_dir);
  SessionStore store(dir);
  httplib::Server server;
  bind_routes(server, store);
  if (port == 0) {
    port = server.bind_to_any_port(addr);
    if (port < 0) fail(kUsage, "serve: cannot bind " + addr);
    std::cout << "listening on " << addr << ":" << port << std::endl;
    return server.listen_after_bind() ? kOk : kUsage;
  }
  if (!server.bind_to_port(addr, port)) fail(kUsage, "serve: cannot bind " + addr + ":" + std::to_string(port));
  std::cout << "listening on " << addr << ":" << port << std::endl;
  return server.listen_after_bind() ? kOk : kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-scale decomposition complexity toolkit"};
  app.require_subcommand(1);

  GenOpts gen;
  auto* g = app.add_subcommand("gen", "generate a metric space");
  g->add_option("--kind", gen.kind, "path|grid|tree|sum-ball-a|sum-ball-b|random-graph|file")->required();
  g->add_option("--n", gen.n, "number of points");
  g->add_option("--width", gen.width);
  g->add_option("--height", gen.height);
  g->add_option("--branching", gen.branching);
  g->add_option("--depth", gen.depth);
  g->add_option("--radius", gen.radius);
  g->add_option("--p", gen.p, "edge probability (rational)");
  g->add_option("--seed", gen.seed);
  g->add_option("--name", gen.name);
  g->add_option("--input", gen.input, "space file (kind file)");
  g->add_option("-o,--out", gen.out);

  SolveOpts dec, ch, cov;
  auto add_common = [](CLI::App* c, SolveOpts& o) {
    c->add_option("--space", o.space)->required();
    c->add_option("--bound", o.bound);
    c->add_option("--strategy", o.strategy);
    c->add_option("-o,--out", o.out);
    c->add_flag("--allow-partial", o.allow_partial, "write output even when the solver fails");
  };
  auto* d = app.add_subcommand("decompose", "R-decompose the space (or a family)");
  add_common(d, dec);
  d->add_option("--r", dec.r)->required();
  d->add_option("--base", dec.base);
  d->add_option("--family", dec.family, "family file to decompose member by member");
  auto* c = app.add_subcommand("chain", "decomposition chain along a schedule");
  add_common(c, ch);
  c->add_option("--schedule", ch.schedule, "comma-separated increasing scales");
  c->add_option("--geometric", ch.geometric, "use R_i = 4^i n");
  c->add_option("--base", ch.base);
  c->add_option("--max-steps", ch.max_steps);
  c->add_flag("--no-extend", ch.no_extend, "do not continue the schedule past its last entry");
  auto* v = app.add_subcommand("cover", "bounded disjoint families covering the space");
  add_common(v, cov);
  v->add_option("--schedule", cov.schedule)->required();

  GameOpts game;
  auto* gm = app.add_subcommand("game", "play an fdc or asc game");
  gm->add_option("--space", game.space)->required();
  gm->add_option("--kind", game.kind, "fdc|asc");
  gm->add_option("--bound", game.bound);
  gm->add_option("--max-rounds", game.max_rounds);
  gm->add_option("--challenger", game.challenger, "fixed|doubling|mesh-adversary|geometric");
  gm->add_option("--defender,--player", game.defender, "components|radial|peel|exhaustive|stall|greedy");
  gm->add_option("--interactive", game.interactive, "role played from stdin");
  gm->add_option("--transcript", game.transcript);
  gm->add_option("--seed", game.seed);
  gm->add_option("--start", game.start, "first scale of doubling and mesh-adversary");
  gm->add_option("--n", game.n, "parameter of the geometric challenger");
  gm->add_option("--schedule", game.schedule, "scales of the fixed challenger");
  gm->add_option("--base", game.base);
  gm->add_flag("--monotone", game.monotone, "require increasing fdc challenges");
  gm->add_flag("--verify-amalgam", game.verify_amalgam, "run the amalgamation check on a won asc game");

  WitnessOpts wit;
  auto* w = app.add_subcommand("witness", "anchored measures and their variation");
  w->add_option("--space", wit.space)->required();
  w->add_option("--n", wit.n);
  w->add_option("--eps", wit.eps);
  w->add_option("--r", wit.r);
  w->add_option("--n-max", wit.n_max);
  w->add_option("--strategy", wit.strategy);
  w->add_option("--base", wit.base);
  w->add_option("--bound", wit.bound, "final mesh (default 4n)");
  w->add_option("--max-steps", wit.max_steps);
  w->add_option("--cutoff", wit.cutoff, "largest distance reported (with --n)");
  w->add_option("-o,--out", wit.out);

  std::string check_file, check_space;
  auto* k = app.add_subcommand("check", "validate any artifact file");
  k->add_option("--file", check_file)->required();
  k->add_option("--space", check_space);

  std::string addr = "127.0.0.1", state_dir;
  int port = 8080;
  auto* sv = app.add_subcommand("serve", "HTTP game service");
  sv->add_option("--addr", addr);
  sv->add_option("--port", port, "0 picks a free port");
  sv->add_option("--state-dir", state_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return run_gen(gen);
    if (*d) return run_decompose(dec);
    if (*c) return run_chain(ch);
    if (*v) return run_cover(cov);
    if (*gm) return run_game(game);
    if (*w) return run_witness(wit);
    if (*k) return run_check(check_file, check_space);
    if (*sv) return run_serve(addr, port, state_dir);
  } catch (const Exit& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
