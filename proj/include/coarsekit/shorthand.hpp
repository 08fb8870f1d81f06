#pragma once

#include "coarsekit/games.hpp"

#include <cctype>
#include <string>
#include <string_view>

namespace coarsekit {

/// Move shorthand for the REPL:
///   challenge 4
///   split 0: [0-4|10-11] / [5-9]; 1: [...] / [...]
///   cover [0,1|3,4]
/// A family is [piece|piece|...]; a piece is a comma list of points and
/// ranges a-b. Members not named in a split pass through unchanged.
namespace shorthand {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::int64_t parse_index(std::string_view s) {
  s = trim(s);
  if (s.empty()) throw Error("expected a point index");
  std::int64_t v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw Error("bad point index '" + std::string(s) + "'");
    v = v * 10 + (c - '0');
    if (v > (std::int64_t(1) << 31)) throw Error("point index too large");
  }
  return v;
}

inline PointSet parse_piece(std::string_view s) {
  std::vector<Point> pts;
  while (true) {
    auto comma = s.find(',');
    std::string_view item = trim(s.substr(0, comma));
    auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      pts.push_back(Point(parse_index(item)));
    } else {
      auto a = parse_index(item.substr(0, dash)), b = parse_index(item.substr(dash + 1));
      if (a > b) throw Error("empty range '" + std::string(item) + "'");
      for (auto p = a; p <= b; ++p) pts.push_back(Point(p));
    }
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return make_point_set(std::move(pts));
}

inline Family parse_family(std::string_view s) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw Error("a family is written [piece|piece|...]");
  s = trim(s.substr(1, s.size() - 2));
  Family f;
  if (s.empty()) return f;
  while (true) {
    auto bar = s.find('|');
    f.push_back(parse_piece(s.substr(0, bar)));
    if (bar == std::string_view::npos) break;
    s.remove_prefix(bar + 1);
  }
  return f;
}

inline bool pieces_disjoint(const Split& sp) {
  Family all = sp.v1;
  all.insert(all.end(), sp.v2.begin(), sp.v2.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (intersects(all[i], all[j])) return false;
  return true;
}

/// "0: [..] / [..]; 1: [..] / [..]" against the current family at scale r.
inline RDecomposition parse_split(std::string_view s, const Family& current, const Rational& r) {
  RDecomposition d{r, {}, true};
  for (const auto& m : current) d.splits.push_back({m, {m}, {}});
  while (!trim(s).empty()) {
    auto semi = s.find(';');
    std::string_view one = trim(s.substr(0, semi));
    std::size_t idx = 0;
    if (auto colon = one.find(':'); colon != std::string_view::npos) {
      idx = std::size_t(parse_index(one.substr(0, colon)));
      one = one.substr(colon + 1);
    }
    if (idx >= current.size())
      throw Error("member " + std::to_string(idx) + " does not exist (family has " + std::to_string(current.size()) +
                  " members)");
    auto slash = one.find('/');
    if (slash == std::string_view::npos) throw Error("a split is written [v1 pieces] / [v2 pieces]");
    d.splits[idx].v1 = parse_family(one.substr(0, slash));
    d.splits[idx].v2 = parse_family(one.substr(slash + 1));
    if (semi == std::string_view::npos) break;
    s.remove_prefix(semi + 1);
  }
  for (const auto& sp : d.splits) d.partition = d.partition && pieces_disjoint(sp);
  return d;
}

/// A move for the side to move in `s`; JSON fragments use the transcript
/// move format (or a bare family for asc responses).
inline Move parse_move(const GameSession& s, std::string_view line) {
  line = trim(line);
  if (!line.empty() && (line.front() == '{' || (line.front() == '[' && s.kind() == GameKind::asc))) {
    Json j = Json::parse(line);
    if (j.is_array()) return {s.round(), s.actor_to_move(), family_from_json(j)};
    return move_from_json(s, j);
  }
  auto space = line.find(' ');
  std::string_view verb = line.substr(0, space), rest = space == std::string_view::npos ? "" : line.substr(space + 1);
  if (verb == "challenge") {
    return {s.round() + 1, challenger_name(s.kind()), parse_rational(std::string(trim(rest)))};
  }
  if (verb == "split") {
    if (!s.pending_challenge()) throw Error("no pending challenge to answer");
    if (s.kind() != GameKind::fdc) throw Error("'split' answers fdc challenges; use 'cover'");
    return {s.round(), responder_name(s.kind()), parse_split(rest, s.family(), *s.pending_challenge())};
  }
  if (verb == "cover") {
    if (s.kind() != GameKind::asc) throw Error("'cover' answers asc challenges; use 'split'");
    return {s.round(), responder_name(s.kind()), parse_family(rest)};
  }
  throw Error("unknown move '" + std::string(verb) + "' (challenge R | split i: [..] / [..] | cover [..] | JSON)");
}

}  // namespace shorthand
}  // namespace coarsekit
