#pragma once

/// \file http.hpp
/// Routes for the explorer API on a cpp-httplib server:
///
///   GET  /api/overview?user=U
///   POST /api/events
///   GET  /api/graph
///   GET  /api/keyframes/{shot_id}
///   GET  /api/profile?user=U

#include <string>

#include <httplib.h>

#include "vidgraph/service.hpp"

namespace vidgraph {

inline void mount(httplib::Server& server, ExplorerService& service) {
  auto send = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Get("/api/overview", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.get_overview(req.get_param_value("user")));
  });
  server.Post("/api/events", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.post_event(req.body));
  });
  server.Get("/api/graph", [&service, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.get_graph());
  });
  server.Get("/api/profile", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.get_profile(req.get_param_value("user")));
  });
  server.Get(R"(/api/keyframes/(.+))", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.get_keyframe(req.matches[1].str()));
  });
}

}  // namespace vidgraph
