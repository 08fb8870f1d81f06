#pragma once

#include "coarsekit/service.hpp"

#include <httplib.h>

#include <string>

namespace coarsekit {

/// Routes:
///   POST /spaces, GET /spaces, GET /spaces/{name}
///   POST /sessions, GET /sessions/{id}, GET /sessions/{id}/transcript,
///   POST /sessions/{id}/moves
inline void bind_routes(httplib::Server& server, SessionStore& store) {
  auto reply = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(2), "application/json");
  };
  auto with_body = [reply](auto handler) {
    return [reply, handler](const httplib::Request& req, httplib::Response& res) {
      Json body;
      try {
        body = Json::parse(req.body);
      } catch (const std::exception& e) {
        return reply(res, {400, Json{{"error", std::string("invalid JSON: ") + e.what()}}});
      }
      try {
        reply(res, handler(req, body));
      } catch (const std::exception& e) {
        reply(res, {400, Json{{"error", e.what()}}});
      }
    };
  };

  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Post("/spaces", with_body([&store](const httplib::Request&, const Json& b) { return store.post_space(b); }));
  server.Get("/spaces", [&store, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, store.list_spaces());
  });
  server.Get(R"(/spaces/([A-Za-z0-9._-]+))", [&store, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, store.get_space(req.matches[1]));
  });
  server.Post("/sessions",
              with_body([&store](const httplib::Request&, const Json& b) { return store.create_session(b); }));
  server.Get(R"(/sessions/([0-9a-f]+))", [&store, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, store.get_session(req.matches[1]));
  });
  server.Get(R"(/sessions/([0-9a-f]+)/transcript)",
             [&store, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, store.get_transcript(req.matches[1]));
             });
  server.Post(R"(/sessions/([0-9a-f]+)/moves)", with_body([&store](const httplib::Request& req, const Json& b) {
                return store.post_move(req.matches[1], b);
              }));
}

}  // namespace coarsekit
