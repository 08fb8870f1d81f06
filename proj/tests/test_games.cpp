#include "coarsekit/games.hpp"
#include "coarsekit/shorthand.hpp"
#include "coarsekit/spacegen.hpp"

#include <gtest/gtest.h>

using namespace coarsekit;

namespace {

std::shared_ptr<const FiniteMetricSpace> path(std::int64_t n) {
  return std::make_shared<const FiniteMetricSpace>(generate(GeneratorSpec::path_of(n)));
}

SpaceResolver resolver(std::shared_ptr<const FiniteMetricSpace> s) {
  return [s](const std::string& name) { return name == s->name() ? s : nullptr; };
}

Strategy challenger(const std::string& name) {
  Strategy st = Strategy::named(name);
  if (name == "fixed") st.schedule = {Rational(1), Rational(2)};
  return st;
}

}  // namespace

TEST(GameSession, Creation) {
  auto p6 = path(6);
  EXPECT_EQ(GameSession::create(p6, GameKind::fdc, Rational(10), 10).status(), GameStatus::defender_won);
  auto fdc = GameSession::create(p6, GameKind::fdc, Rational(1), 10);
  EXPECT_EQ(fdc.status(), GameStatus::ongoing);
  EXPECT_EQ(fdc.actor_to_move(), "challenger");
  auto asc = GameSession::create(p6, GameKind::asc, Rational(1), 10);
  EXPECT_EQ(asc.status(), GameStatus::ongoing);
  EXPECT_EQ(asc.actor_to_move(), "playerII");
  EXPECT_THROW(GameSession::create(p6, GameKind::fdc, Rational(-1), 10), Error);
  EXPECT_THROW(GameSession::create(p6, GameKind::fdc, Rational(1), 0), Error);
}

TEST(GameSession, FdcRadialWinOnP12) {
  auto p12 = path(12);
  auto s = GameSession::create(p12, GameKind::fdc, Rational(4), 10);
  s.submit_challenge(Rational(4));
  EXPECT_EQ(s.actor_to_move(), "defender");
  RDecomposition d{Rational(4), {Split{p12->all_points(), {{0, 1, 2, 3, 4}, {10, 11}}, {{5, 6, 7, 8, 9}}}}, true};
  s.submit_response(d);
  EXPECT_EQ(s.status(), GameStatus::defender_won);
  EXPECT_TRUE(s.chain().complete);
  EXPECT_TRUE(verify_chain(*p12, s.chain()).ok());
  EXPECT_EQ(s.history().size(), 2u);
  EXPECT_THROW(s.submit_challenge(Rational(8)), MoveError);
}

TEST(GameSession, AscWinOnP6) {
  auto p6 = path(6);
  auto s = GameSession::create(p6, GameKind::asc, Rational(1), 10);
  s.submit_challenge(Rational(1));
  s.submit_response(Family{{0, 1}, {3, 4}});
  EXPECT_EQ(s.status(), GameStatus::ongoing);
  EXPECT_EQ(s.uncovered(), (PointSet{2, 5}));
  s.submit_challenge(Rational(2));
  s.submit_response(Family{{2}, {5}});
  EXPECT_EQ(s.status(), GameStatus::playerI_won);
  EXPECT_TRUE(verify_cover(*p6, s.covers()).ok());
}

TEST(GameSession, RejectionsLeaveStateUnchanged) {
  auto p6 = path(6);
  auto s = GameSession::create(p6, GameKind::asc, Rational(1), 10);
  EXPECT_THROW(s.submit_response(Family{{0}}), MoveError);
  s.submit_challenge(Rational(2));
  auto before = transcript_json(s);
  try {
    s.submit_response(Family{{0, 1}, {3}});
    FAIL() << "expected rejection";
  } catch (const MoveError& e) {
    EXPECT_EQ(e.kind(), "payload");
    ASSERT_TRUE(e.verdict().has("disjointness"));
    for (const auto& v : e.verdict().violations) {
      if (v.kind == "disjointness") {
        EXPECT_EQ(v.pair, (std::pair<PointSet, PointSet>{{0, 1}, {3}}));
      }
    }
  }
  EXPECT_EQ(transcript_json(s), before);
  EXPECT_THROW(s.submit_challenge(Rational(3)), MoveError);
  s.submit_response(Family{{0}});
  try {
    s.submit_challenge(Rational(2));
    FAIL() << "expected a scale error";
  } catch (const MoveError& e) {
    EXPECT_EQ(e.kind(), "scale");
  }

  auto fdc = GameSession::create(p6, GameKind::fdc, Rational(0), 10);
  fdc.submit_challenge(Rational(3));
  fdc.submit_response(RDecomposition{Rational(3), {Split{p6->all_points(), {{0, 1, 2, 3, 4, 5}}, {}}}, true});
  EXPECT_NO_THROW(fdc.submit_challenge(Rational(2)));
  auto mono = GameSession::create(p6, GameKind::fdc, Rational(0), 10, true);
  mono.submit_challenge(Rational(3));
  mono.submit_response(RDecomposition{Rational(3), {Split{p6->all_points(), {{0, 1, 2, 3, 4, 5}}, {}}}, true});
  EXPECT_THROW(mono.submit_challenge(Rational(2)), MoveError);
}

TEST(GameSession, ApplyChecksActorAndRound) {
  auto p6 = path(6);
  auto s = GameSession::create(p6, GameKind::fdc, Rational(1), 10);
  EXPECT_THROW(s.apply(Move{1, "defender", Rational(1)}), MoveError);
  EXPECT_THROW(s.apply(Move{2, "challenger", Rational(1)}), MoveError);
  auto t = advance(s, Move{1, "challenger", Rational(1)});
  EXPECT_EQ(s.round(), 0u);
  EXPECT_EQ(t.round(), 1u);
}

TEST(Strategies, MeshAdversaryAndGeometric) {
  auto p6 = path(6);
  auto s = GameSession::create(p6, GameKind::asc, Rational(3), 10);
  s.submit_challenge(Rational(2));
  s.submit_response(Family{{0, 1, 2, 3}});
  auto m = auto_move(s, Strategy::named("mesh-adversary"));
  EXPECT_EQ(std::get<Rational>(m.payload), Rational(5));

  auto g = GameSession::create(path(100), GameKind::fdc, Rational(0), 10);
  Strategy geo = Strategy::named("geometric");
  geo.n = 2;
  for (int i = 0; i < 2; ++i) {
    g.apply(auto_move(g, geo));
    g.apply(auto_move(g, Strategy::named("stall")));
  }
  EXPECT_EQ(std::get<Rational>(auto_move(g, geo).payload), Rational(128));

  Strategy dbl = Strategy::named("doubling");
  dbl.start = Rational(3);
  EXPECT_EQ(std::get<Rational>(auto_move(g, dbl).payload), Rational(12));
  EXPECT_THROW(auto_move(g, Strategy::named("peel")), Error);
}

TEST(Strategies, StallNeverProgresses) {
  auto p12 = path(12);
  auto s = GameSession::create(p12, GameKind::fdc, Rational(1), 5);
  s = play(s, Strategy::named("doubling"), Strategy::named("stall"));
  EXPECT_EQ(s.status(), GameStatus::move_limit_reached);
  EXPECT_EQ(s.family(), (Family{p12->all_points()}));
  EXPECT_EQ(s.round(), 5u);
}

TEST(Strategies, PeelTerminatesAgainstEveryChallenger) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto sp = std::make_shared<const FiniteMetricSpace>(
        generate(GeneratorSpec::random_graph_of(10 + std::int64_t(seed * 3), Rational(1, 5), seed)));
    for (const auto& name : challenger_strategies()) {
      auto s = GameSession::create(sp, GameKind::fdc, Rational(0), sp->size(), true);
      s = play(s, challenger(name), Strategy::named("peel"));
      EXPECT_EQ(s.status(), GameStatus::defender_won) << name << " seed " << seed;
      EXPECT_TRUE(verify_chain(*sp, s.chain()).ok());
    }
  }
}

TEST(Strategies, AscResponsesAreLegal) {
  auto grid = std::make_shared<const FiniteMetricSpace>(generate(GeneratorSpec::grid_of(6, 6)));
  for (const auto& name : {"greedy", "peel"}) {
    auto s = GameSession::create(grid, GameKind::asc, Rational(2), 60);
    Strategy adv = Strategy::named("mesh-adversary");
    s = play(s, adv, Strategy::named(name));
    EXPECT_EQ(s.status(), GameStatus::playerI_won) << name;
    EXPECT_TRUE(verify_cover(*grid, s.covers()).ok());
  }
  auto p6 = path(6);
  auto s = play(GameSession::create(p6, GameKind::asc, Rational(1), 10), challenger("fixed"),
                Strategy::named("exhaustive"));
  EXPECT_EQ(s.status(), GameStatus::playerI_won);
}

TEST(Strategies, Deterministic) {
  auto grid = std::make_shared<const FiniteMetricSpace>(generate(GeneratorSpec::grid_of(8, 8)));
  Strategy greedy = Strategy::named("greedy");
  greedy.seed = 17;
  auto a = play(GameSession::create(grid, GameKind::asc, Rational(2), 50), Strategy::named("mesh-adversary"), greedy);
  auto b = play(GameSession::create(grid, GameKind::asc, Rational(2), 50), Strategy::named("mesh-adversary"), greedy);
  EXPECT_EQ(transcript_json(a).dump(), transcript_json(b).dump());
}

TEST(Transcript, RoundTrip) {
  auto p12 = path(12);
  auto s = play(GameSession::create(p12, GameKind::fdc, Rational(1), 20), Strategy::named("doubling"),
                Strategy::named("radial"));
  auto t = transcript_json(s);
  auto r = replay(t, resolver(p12));
  EXPECT_EQ(transcript_json(r), t);
  EXPECT_EQ(r.family(), s.family());
  EXPECT_EQ(r.chain(), s.chain());

  auto grid = std::make_shared<const FiniteMetricSpace>(generate(GeneratorSpec::grid_of(5, 5)));
  auto a = play(GameSession::create(grid, GameKind::asc, Rational(2), 20), Strategy::named("mesh-adversary"),
                Strategy::named("greedy"));
  auto ta = transcript_json(a);
  EXPECT_EQ(transcript_json(replay(ta, resolver(grid))).dump(), ta.dump());
}

TEST(Transcript, TamperedScaleOrderingRejected) {
  auto p6 = path(6);
  auto s = GameSession::create(p6, GameKind::asc, Rational(1), 10);
  s.submit_challenge(Rational(1)).submit_response(Family{{0, 1}, {3, 4}});
  s.submit_challenge(Rational(2)).submit_response(Family{{2}, {5}});
  auto t = transcript_json(s);
  t["moves"][2]["challenge"] = "1/2";
  try {
    replay(t, resolver(p6));
    FAIL() << "expected rejection";
  } catch (const ReplayError& e) {
    EXPECT_EQ(e.index(), 2u);
  }
  auto wrong_status = transcript_json(s);
  wrong_status["status"] = "ongoing";
  EXPECT_THROW(replay(wrong_status, resolver(p6)), ReplayError);
}

TEST(Transcript, EmptyIsFreshSession) {
  auto p6 = path(6);
  Json t{{"kind", "fdc"}, {"space", "path-6"}, {"bound", "1"}, {"moves", Json::array()}};
  auto s = replay(t, resolver(p6));
  EXPECT_EQ(s.status(), GameStatus::ongoing);
  EXPECT_TRUE(s.history().empty());
  EXPECT_THROW(replay(Json::object(), resolver(p6)), Error);
  t["space"] = "nowhere";
  EXPECT_THROW(replay(t, resolver(p6)), Error);
}

TEST(Shorthand, Parsers) {
  using namespace shorthand;
  EXPECT_EQ(parse_piece("0-4,7"), (PointSet{0, 1, 2, 3, 4, 7}));
  EXPECT_EQ(parse_family("[0-1|3,4]"), (Family{{0, 1}, {3, 4}}));
  EXPECT_EQ(parse_family("[]"), Family{});
  EXPECT_THROW(parse_piece("4-1"), Error);
  EXPECT_THROW(parse_index("x"), Error);

  auto p12 = path(12);
  auto s = GameSession::create(p12, GameKind::fdc, Rational(4), 10);
  auto c = parse_move(s, "challenge 4");
  EXPECT_EQ(std::get<Rational>(c.payload), Rational(4));
  s.apply(c);
  auto m = parse_move(s, "split 0: [0-4|10-11] / [5-9]");
  s.apply(m);
  EXPECT_EQ(s.status(), GameStatus::defender_won);

  auto p6 = path(6);
  auto a = GameSession::create(p6, GameKind::asc, Rational(1), 10);
  a.apply(parse_move(a, "challenge 1"));
  a.apply(parse_move(a, "cover [0,1|3,4]"));
  a.apply(parse_move(a, R"({"challenge": "2"})"));
  a.apply(parse_move(a, "[[2],[5]]"));
  EXPECT_EQ(a.status(), GameStatus::playerI_won);
  EXPECT_THROW(parse_move(a, "jump 3"), Error);
}

TEST(Shorthand, UnnamedMembersPassThrough) {
  auto p6 = path(6);
  auto s = GameSession::create(p6, GameKind::fdc, Rational(0), 10);
  s.apply(shorthand::parse_move(s, "challenge 1"));
  s.apply(shorthand::parse_move(s, "split 0: [0,1|4,5] / [2,3]"));
  s.apply(shorthand::parse_move(s, "challenge 2"));
  auto m = shorthand::parse_move(s, "split 1: [4] / [5]");
  const auto& d = std::get<RDecomposition>(m.payload);
  ASSERT_EQ(d.splits.size(), 3u);
  EXPECT_EQ(d.splits[0].v1, (Family{{0, 1}}));
  EXPECT_TRUE(d.splits[0].v2.empty());
  s.apply(m);
  EXPECT_EQ(s.status(), GameStatus::ongoing);
}
