// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: acceptance [path-to-coarsekit-cli]
#include "coarsekit/games.hpp"
#include "coarsekit/pullback.hpp"
#include "coarsekit/serialize.hpp"
#include "coarsekit/spacegen.hpp"
#include "coarsekit/witness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <unistd.h>

using namespace coarsekit;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  std::size_t failures = 0;

  void fail(const std::string& why) {
    pass = false;
    if (failures++ < 5) notes.push_back(why);
  }
  void note(const std::string& n) { notes.push_back(n); }
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

SpacePtr share(FiniteMetricSpace s) { return std::make_shared<const FiniteMetricSpace>(std::move(s)); }

PointSet random_subset(std::mt19937_64& rng, const PointSet& from, unsigned one_in) {
  PointSet out;
  for (Point p : from)
    if (rng() % one_in == 0) out.push_back(p);
  return out;
}

std::vector<Rational> positive_distances(const FiniteMetricSpace& s) {
  std::set<Rational> seen;
  for (Point x = 0; x < s.size(); ++x)
    for (Point y = x + 1; y < s.size(); ++y) seen.insert(s.dist(x, y));
  return {seen.begin(), seen.end()};
}

// Pulls d back at every realized source distance; admissible scales must
// verify and the rest must be refused.
void check_pullbacks(const CoarseMap& f, const RDecomposition& d, Outcome& out, std::size_t& admissible,
                     std::size_t& refused) {
  for (const auto& r : positive_distances(*f.source)) {
    if (f.upper(r) <= d.scale) {
      ++admissible;
      auto pulled = pullback_decomposition(f, d, r);
      if (auto v = verify_decomposition(*f.source, pulled); !v)
        out.fail("pullback at R=" + to_string(r) + " on " + f.source->name() + ": " + v.summary());
    } else {
      ++refused;
      try {
        pullback_decomposition(f, d, r);
        out.fail("pullback at R=" + to_string(r) + " accepted although upper(R) > " + to_string(d.scale));
      } catch (const PreconditionError&) {
      }
    }
  }
}

RDecomposition whole_space_step(const FiniteMetricSpace& s, const Rational& r, const MemberStrategy& ms) {
  return RDecomposition{r, {decompose_member(s, s.all_points(), r, ms)}, true};
}

bool annulus_ok(const FiniteMetricSpace& s, const PointSet& z, const PointSet& x, const Rational& r,
                std::string& why) {
  auto [first, second] = annulus_split(s, z, x, r);
  if (!is_r_disjoint(s, first, r).ok) return why = "first family not R-disjoint", false;
  if (!is_r_disjoint(s, second, r).ok) return why = "second family not R-disjoint", false;
  if (set_union(family_union(first), family_union(second)) != z) return why = "families do not cover Z", false;
  if (first.empty() || first.front() != x) return why = "first family does not start with X", false;
  const PointSet outside = set_difference(z, x);
  for (std::size_t i = 1; i < first.size(); ++i)
    if (!is_subset(first[i], outside)) return why = "band meets X", false;
  for (const auto& band : second)
    if (!is_subset(band, outside)) return why = "band meets X", false;
  return true;
}

// ---------------------------------------------------------------------------

Outcome verifier_soundness() {
  Outcome out;
  std::size_t chains = 0, covers = 0, annuli = 0, admissible = 0, refused = 0;
  const std::vector<Rational> probabilities{Rational(1, 8), Rational(1, 4), Rational(1, 2)};
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    std::mt19937_64 rng(seed);
    const auto n = std::int64_t(3 + rng() % 38);
    FiniteMetricSpace s = [&] {
      try {
        return generate(GeneratorSpec::random_graph_of(n, probabilities[rng() % 3], seed));
      } catch (const Error&) {
        return generate(GeneratorSpec::random_graph_of(n, Rational(1, 2), seed));
      }
    }();
    const Rational bound(std::int64_t(rng() % 3));

    std::vector<MemberStrategy> strategies{MemberStrategy::components(), MemberStrategy::radial(),
                                           MemberStrategy::peel(), MemberStrategy::stall()};
    if (s.size() <= size_limit()) strategies.push_back(MemberStrategy::exhaustive());
    for (const auto& ms : strategies) {
      auto c = solve_chain(s, Schedule({Rational(1), Rational(2), Rational(3)}, true), bound, ms, 60);
      ++chains;
      if (auto v = verify_chain(s, c); !v)
        out.fail(s.name() + " chain (" + to_string(ms.kind) + "): " + v.summary());
    }

    std::vector<Rational> schedule;
    for (std::int64_t i = 1; i <= 12; ++i) schedule.push_back(Rational(i));
    std::vector<CoverMethod> methods{CoverMethod::greedy_components};
    if (s.size() <= 8) methods.push_back(CoverMethod::exhaustive);
    for (auto method : methods) {
      auto res = asc_cover(s, schedule, bound + 1, method);
      ++covers;
      if (auto v = verify_cover(s, res.cover, res.ok); !v) out.fail(s.name() + " cover: " + v.summary());
    }

    for (int trial = 0; trial < 3; ++trial) {
      PointSet z = random_subset(rng, s.all_points(), 2);
      if (z.empty()) z = s.all_points();
      PointSet x = random_subset(rng, z, 3);
      if (x.empty()) x = {z.front()};
      const Rational r(std::int64_t(1 + rng() % 4));
      std::string why;
      ++annuli;
      if (!annulus_ok(s, z, x, r, why)) out.fail(s.name() + " annulus: " + why);
    }

    auto target = share(generate(GeneratorSpec::random_graph_of(std::int64_t(2 + rng() % 8), Rational(1, 2), rng())));
    CoarseMap f{share(s), target, {}, {}, {}};
    for (Point p = 0; p < s.size(); ++p) f.map.push_back(Point(rng() % target->size()));
    std::tie(f.upper, f.lower) = fit_controls(*f.source, *target, f.map);
    if (check_coarse_map(f)) {
      out.fail(s.name() + ": fitted controls rejected");
      continue;
    }
    for (std::int64_t r = 1; r <= 3; ++r)
      check_pullbacks(f, whole_space_step(*target, Rational(r), MemberStrategy::radial()), out, admissible, refused);
    auto tc = solve_chain(*target, Schedule({Rational(1), Rational(2)}, true), Rational(0), MemberStrategy::peel(), 20);
    std::vector<Rational> src_schedule;
    for (const auto& step : tc.steps) {
      auto t = f.upper.sup_preimage(step.scale);
      if (!t || *t <= 0 || (!src_schedule.empty() && *t <= src_schedule.back())) break;
      src_schedule.push_back(*t);
    }
    if (!tc.steps.empty() && src_schedule.size() == tc.steps.size()) {
      auto pc = pullback_chain(f, tc, src_schedule);
      if (auto v = verify_chain(s, pc); !v) out.fail(s.name() + " pulled chain: " + v.summary());
    }
  }
  out.note(std::to_string(chains) + " chains, " + std::to_string(covers) + " covers, " + std::to_string(annuli) +
           " annulus splits, " + std::to_string(admissible) + " admissible pullbacks, " + std::to_string(refused) +
           " refused");
  return out;
}

// Every metric on n <= 5 points with distances in {1,2,3}, one per
// relabelling class.
std::vector<FiniteMetricSpace> small_metrics() {
  std::vector<FiniteMetricSpace> spaces;
  for (std::size_t n = 1; n <= 5; ++n) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<std::vector<std::size_t>> perms;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));

    std::set<std::vector<int>> classes;
    std::size_t total = 1;
    for (std::size_t k = 0; k < pairs.size(); ++k) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<std::vector<int>> d(n, std::vector<int>(n, 0));
      std::size_t c = code;
      for (auto [i, j] : pairs) {
        d[i][j] = d[j][i] = int(1 + c % 3);
        c /= 3;
      }
      bool metric = true;
      for (std::size_t i = 0; i < n && metric; ++i)
        for (std::size_t j = 0; j < n && metric; ++j)
          for (std::size_t k = 0; k < n && metric; ++k)
            if (d[i][j] > d[i][k] + d[k][j]) metric = false;
      if (!metric) continue;
      std::vector<int> canon;
      for (const auto& p : perms) {
        std::vector<int> key;
        for (auto [i, j] : pairs) key.push_back(d[p[i]][p[j]]);
        if (canon.empty() || key < canon) canon = key;
      }
      if (!classes.insert(canon).second) continue;
      Matrix m(n, std::vector<Rational>(n, Rational(0)));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = Rational(d[i][j]);
      spaces.push_back(FiniteMetricSpace::from_matrix("small-" + std::to_string(n) + "-" + std::to_string(code), m));
    }
  }
  return spaces;
}

Outcome oracle_agreement() {
  Outcome out;
  const std::vector<Rational> schedule{Rational(1), Rational(2), Rational(3), Rational(4), Rational(5)};
  const auto spaces = small_metrics();
  std::size_t solver_runs = 0;
  for (const auto& s : spaces) {
    auto oracle = minimal_depth_oracle(s, schedule, Rational(0));
    if (oracle.depth) {
      if (!oracle.chain || !verify_chain(s, *oracle.chain)) out.fail(s.name() + ": oracle chain does not verify");
      else if (oracle.chain->depth() != *oracle.depth) out.fail(s.name() + ": oracle chain depth differs");
    }
    for (const auto& ms : {MemberStrategy::components(), MemberStrategy::radial(), MemberStrategy::peel(),
                           MemberStrategy::exhaustive()}) {
      auto c = solve_chain(s, Schedule(schedule), Rational(0), ms, schedule.size());
      ++solver_runs;
      if (!c.complete) continue;
      if (!oracle.depth)
        out.fail(s.name() + ": " + to_string(ms.kind) + " finished where the oracle found no chain");
      else if (c.depth() < *oracle.depth)
        out.fail(s.name() + ": " + to_string(ms.kind) + " depth " + std::to_string(c.depth()) + " beats oracle " +
                 std::to_string(*oracle.depth));
    }
  }
  const auto p3 = generate(GeneratorSpec::path_of(3));
  auto p3_oracle = minimal_depth_oracle(p3, schedule, Rational(0));
  const std::string p3_value = p3_oracle.depth ? std::to_string(*p3_oracle.depth) : "none";
  if (p3_value != "2") {
    std::string split;
    if (p3_oracle.chain && !p3_oracle.chain->steps.empty()) {
      const auto& sp = p3_oracle.chain->steps.front().splits.front();
      split = " via V1=" + describe(family_union(sp.v1)) + " V2=" + describe(family_union(sp.v2));
    }
    out.fail("P3 oracle depth is " + p3_value + ", expected 2" + split);
  }
  out.note(std::to_string(spaces.size()) + " spaces up to relabelling, " + std::to_string(solver_runs) +
           " solver runs, P3 oracle depth " + p3_value);
  return out;
}

Outcome amalgamation() {
  Outcome out;
  auto grid = share(generate(GeneratorSpec::grid_of(8, 8)));
  std::size_t won = 0, failed = 0, seed = 0;
  Strategy challenger = Strategy::named("mesh-adversary");
  challenger.start = Rational(1);
  while (won < 200 && seed < 1000) {
    Strategy player = Strategy::named("greedy");
    player.seed = ++seed;
    auto g = play(GameSession::create(grid, GameKind::asc, Rational(2), 100), challenger, player);
    if (g.status() != GameStatus::playerI_won) continue;
    ++won;
    auto rep = amalgamate_play(*grid, g.covers());
    bool bad = !rep.result_covers;
    for (const auto& st : rep.stages)
      if (!st.disjoint || !st.union_matches) bad = true;
    if (bad) {
      ++failed;
      std::ostringstream why;
      why << "seed " << seed << ":";
      if (auto i = rep.first_failed_stage()) {
        const auto& st = *std::find_if(rep.stages.begin(), rep.stages.end(),
                                       [&](const AmalgamationStage& x) { return x.index == *i; });
        why << " stage " << *i << (st.disjoint ? "" : " not R_i-disjoint") << (st.union_matches ? "" : " union differs");
        if (st.witness)
          why << " " << describe(st.witness->first) << " " << describe(st.witness->second) << " at distance "
              << to_string(set_distance(*grid, st.witness->first, st.witness->second)) << ", R_i "
              << to_string(g.covers().schedule[*i - 1]);
      }
      if (!rep.result_covers) why << " final family misses points";
      out.fail(why.str());
    }
  }
  if (won < 200) out.fail("only " + std::to_string(won) + " of " + std::to_string(seed) + " plays won by player I");
  out.note(std::to_string(won) + " won plays, " + std::to_string(failed) + " with a failed stage");
  return out;
}

Outcome witness_suite() {
  Outcome out;
  auto p200 = generate(GeneratorSpec::path_of(200));
  std::map<std::int64_t, double> adjacent;
  for (std::int64_t n = 1; n <= 3; ++n) {
    auto c = solve_chain(p200, geometric_challenges(n), Rational(4 * n), MemberStrategy::radial(), 8);
    if (!c.complete) {
      out.fail("n=" + std::to_string(n) + ": radial chain incomplete");
      continue;
    }
    auto rep = variation_report(p200, build_partition_tree(p200, c, n), Rational(1));
    adjacent[n] = rep.max_adjacent;
    const std::string tag = "n=" + std::to_string(n) + ": ";
    if (rep.max_normalization_error > 1e-9)
      out.fail(tag + "normalization error " + std::to_string(rep.max_normalization_error));
    if (!rep.weights_nonnegative) out.fail(tag + "negative weight");
    if (!(rep.support_radius <= rep.leaf_mesh))
      out.fail(tag + "support radius " + to_string(rep.support_radius) + " exceeds leaf mesh " +
               to_string(rep.leaf_mesh));
    if (!rep.support_within_anchor_set) out.fail(tag + "support outside the anchor set");
    if (!rep.variation_bound_holds())
      out.fail(tag + "adjacent variation " + std::to_string(rep.max_adjacent) + " above 2^(m+2)/R_m = " +
               std::to_string(*rep.variation_bound) +
               " (open question: the product-difference estimate behind this bound is unproven for m >= 2)");
    std::ostringstream n_note;
    n_note << tag << "m=" << rep.m << " max adjacent " << rep.max_adjacent;
    if (rep.variation_bound) n_note << " bound " << *rep.variation_bound;
    out.note(n_note.str());
  }
  if (adjacent.count(1) && adjacent.count(3) && !(adjacent[3] < adjacent[1]))
    out.fail("n=3 variation " + std::to_string(adjacent[3]) + " not below n=1 " + std::to_string(adjacent[1]));

  auto p12 = generate(GeneratorSpec::path_of(12));
  auto c12 = solve_chain(p12, Schedule({Rational(4)}), Rational(4), MemberStrategy::radial(0), 4);
  auto t12 = build_partition_tree(p12, c12, 1);
  auto a4 = witness_measure(p12, t12, 4), a5 = witness_measure(p12, t12, 5);
  const double tol = 1e-12;
  if (std::fabs(a4.weight_at(0) - 4.0 / 7) > tol || std::fabs(a4.weight_at(5) - 3.0 / 7) > tol ||
      a4.weights.size() != 2)
    out.fail("P12 a(4) differs from (4/7, 3/7)");
  if (std::fabs(l1_distance(a4, a5) - 2.0 / 7) > tol) out.fail("P12 |a(4)-a(5)| differs from 2/7");
  return out;
}

Outcome annulus_exhaustive() {
  Outcome out;
  std::size_t cases = 0;
  for (std::int64_t n = 1; n <= 30; ++n) {
    auto s = generate(GeneratorSpec::path_of(n));
    for (std::int64_t k = 1; k <= n; ++k) {
      PointSet x(std::size_t(k), 0);
      std::iota(x.begin(), x.end(), Point(0));
      for (std::int64_t z_end = k; z_end <= n; ++z_end) {
        PointSet z(std::size_t(z_end), 0);
        std::iota(z.begin(), z.end(), Point(0));
        for (std::int64_t r = 1; r <= 5; ++r) {
          std::string why;
          ++cases;
          if (!annulus_ok(s, z, x, Rational(r), why))
            out.fail("P" + std::to_string(n) + " X=[0," + std::to_string(k) + ") Z=[0," + std::to_string(z_end) +
                     ") R=" + std::to_string(r) + ": " + why);
        }
      }
    }
  }
  out.note(std::to_string(cases) + " cases");
  return out;
}

Outcome pullback_guarantee() {
  Outcome out;
  std::size_t admissible = 0, refused = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::mt19937_64 rng(seed);
    const std::int64_t w = 4 + std::int64_t(rng() % 6), h = 4 + std::int64_t(rng() % 6), k = 2 + std::int64_t(rng() % 2);
    const std::int64_t tw = (w + k - 1) / k, th = (h + k - 1) / k;
    auto src = share(generate(GeneratorSpec::grid_of(w, h)));
    auto tgt = share(generate(GeneratorSpec::grid_of(tw, th)));
    CoarseMap f{src, tgt, {}, {}, {}};
    for (Point p = 0; p < src->size(); ++p) {
      const auto x = std::int64_t(p) % w, y = std::int64_t(p) / w;
      f.map.push_back(Point((y / k) * tw + x / k));
    }
    std::tie(f.upper, f.lower) = fit_controls(*src, *tgt, f.map);
    if (auto v = check_coarse_map(f)) {
      out.fail(src->name() + ": controls do not verify");
      continue;
    }
    for (std::int64_t r = 1; r <= 4; ++r)
      for (const auto& ms : {MemberStrategy::radial(), MemberStrategy::peel()})
        check_pullbacks(f, whole_space_step(*tgt, Rational(r), ms), out, admissible, refused);
  }
  if (!admissible || !refused) out.fail("no admissible or no refused scale exercised");
  out.note(std::to_string(admissible) + " admissible pullbacks verified, " + std::to_string(refused) +
           " precondition violations refused");
  return out;
}

Outcome generators() {
  Outcome out;
  const auto a3 = generate(GeneratorSpec::sum_ball_a_of(3)).size();
  const auto b3 = generate(GeneratorSpec::sum_ball_b_of(3)).size();
  if (a3 != 15) out.fail("sum-ball-a(3) has " + std::to_string(a3) + " points");
  if (b3 != 7) out.fail("sum-ball-b(3) has " + std::to_string(b3) + " points");
  std::ostringstream sizes;
  for (std::int64_t r = 1; r <= 6; ++r)
    for (const auto& spec : {GeneratorSpec::sum_ball_a_of(r), GeneratorSpec::sum_ball_b_of(r)}) {
      auto s = generate(spec);
      sizes << " " << s.name() << "=" << s.size();
      if (!std::holds_alternative<FiniteMetricSpace>(check_metric(s.name(), s.matrix())))
        out.fail(s.name() + " fails check_metric");
    }
  out.note("sizes" + sizes.str());
  return out;
}

std::vector<Strategy> all_challengers() {
  Strategy fixed = Strategy::named("fixed");
  fixed.schedule = {Rational(1), Rational(2), Rational(3)};
  Strategy doubling = Strategy::named("doubling");
  Strategy adversary = Strategy::named("mesh-adversary");
  Strategy geometric = Strategy::named("geometric");
  return {fixed, doubling, adversary, geometric};
}

bool replays_identically(const GameSession& g) {
  const auto t = transcript_json(g);
  auto space = g.space_ptr();
  auto again = replay(Json::parse(t.dump()), [&](const std::string&) { return space; });
  return transcript_json(again).dump() == t.dump() && snapshot_json(again).dump() == snapshot_json(g).dump();
}

bool run_cli_checks(const std::string& cli, Outcome& out) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("coarsekit-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string q = "'" + cli + "'", d = dir.string() + "/";
  const std::vector<std::pair<std::string, std::string>> runs{
      {"p12", "gen --kind path --n 12 -o " + d + "p12.json"},
      {"g6", "gen --kind grid --width 6 --height 6 -o " + d + "g6.json"},
      {"chain", "chain --space " + d + "p12.json --bound 4 --schedule 4 --strategy radial -o " + d + "chain.json"},
      {"dec", "decompose --space " + d + "p12.json --r 2 --bound 2 -o " + d + "dec.json"},
      {"cover", "cover --space " + d + "p12.json --bound 1 --schedule 1,2 --strategy exhaustive -o " + d + "cover.json"},
      {"fdc", "game --space " + d + "p12.json --kind fdc --bound 4 --challenger doubling --defender radial --transcript " +
                  d + "fdc.json"},
      {"asc", "game --space " + d + "g6.json --kind asc --bound 2 --challenger mesh-adversary --player greedy --transcript " +
                  d + "asc.json"},
      {"witness", "witness --space " + d + "p12.json --n 1 -o " + d + "witness.json"},
  };
  bool ok = true;
  for (const auto& [name, args] : runs) {
    if (std::system((q + " " + args + " >/dev/null 2>&1").c_str()) != 0) {
      out.fail("CLI run '" + name + "' failed");
      ok = false;
      continue;
    }
    const std::string space = name == "asc" || name == "g6" ? "g6.json" : "p12.json";
    if (std::system((q + " check --file " + d + name + ".json --space " + d + space + " >/dev/null 2>&1").c_str()) != 0) {
      out.fail("CLI output '" + name + "' fails check");
      ok = false;
    }
  }
  fs::remove_all(dir);
  return ok;
}

Outcome game_engine(const std::string& cli) {
  Outcome out;
  auto p100 = share(generate(GeneratorSpec::path_of(100)));
  for (const auto& ch : all_challengers()) {
    auto g = play(GameSession::create(p100, GameKind::fdc, Rational(10), 50), ch, Strategy::named("stall"));
    if (g.status() == GameStatus::defender_won) out.fail("stall won against " + ch.name);
    if (!replays_identically(g)) out.fail("replay differs (stall vs " + ch.name + ")");
  }
  std::vector<SpacePtr> spaces{share(generate(GeneratorSpec::path_of(40))), share(generate(GeneratorSpec::grid_of(6, 6))),
                               share(generate(GeneratorSpec::tree_of(2, 4)))};
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    spaces.push_back(share(generate(GeneratorSpec::random_graph_of(30, Rational(1, 6), seed))));
  std::size_t games = 0;
  for (const auto& s : spaces)
    for (const auto& bound : {Rational(0), Rational(2)})
      for (const auto& ch : all_challengers()) {
        auto g = play(GameSession::create(s, GameKind::fdc, bound, 100), ch, Strategy::named("peel"));
        ++games;
        if (g.status() != GameStatus::defender_won)
          out.fail("peel did not win on " + s->name() + " B=" + to_string(bound) + " against " + ch.name);
        if (!replays_identically(g)) out.fail("replay differs on " + s->name() + " against " + ch.name);
      }
  out.note(std::to_string(games) + " peel games");
  if (cli.empty())
    out.fail("no CLI path given; CLI outputs not checked");
  else if (run_cli_checks(cli, out))
    out.note("CLI outputs pass check");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"verifier soundness", verifier_soundness},
      {"oracle agreement", oracle_agreement},
      {"amalgamation stages", amalgamation},
      {"witness suite", witness_suite},
      {"annulus exhaustive", annulus_exhaustive},
      {"pullback guarantee", pullback_guarantee},
      {"generators", generators},
      {"game engine", [&] { return game_engine(cli); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << ")";
    if (o.failures) std::cout << " " << o.failures << " failure(s)";
    std::cout << " [" << std::fixed << std::setprecision(1) << secs << "s]\n";
    for (const auto& n : o.notes) std::cout << "    " << n << "\n";
    if (!o.pass) ++failed;
  }
  return failed ? 1 : 0;
}
