// Copyright 2026 The pepper Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <httplib.h>

#include <string>

#include "pepper/serve/service.hpp"

namespace pepper::serve {

inline void reply(httplib::Response& res, const ApiResponse& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

inline std::optional<std::string> query(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  return req.get_param_value(key);
}

// Routes are served both under /api/v1 and the unversioned /api alias.
inline void mount(httplib::Server& srv, AnnotationService& svc) {
  for (std::string prefix : {"/api/v1", "/api"}) {
    srv.Get(prefix + "/queue", [&svc](const httplib::Request& req, httplib::Response& res) {
      reply(res, svc.queue(query(req, "mode").value_or(""), query(req, "limit")));
    });
    srv.Get(prefix + R"(/review/([^/]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
      reply(res, svc.review(req.matches[1]));
    });
    srv.Post(prefix + "/label", [&svc](const httplib::Request& req, httplib::Response& res) {
      reply(res, svc.label(req.body));
    });
    srv.Post(prefix + "/adjudicate", [&svc](const httplib::Request& req, httplib::Response& res) {
      reply(res, svc.adjudicate(req.body));
    });
    srv.Get(prefix + "/agreement", [&svc](const httplib::Request&, httplib::Response& res) {
      reply(res, svc.agreement());
    });
    srv.Get(prefix + "/export", [&svc](const httplib::Request& req, httplib::Response& res) {
      reply(res, svc.export_corpus(query(req, "fmt").value_or("jsonl")));
    });
  }
  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    reply(res, error_response(500, what));
  });
  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) reply(res, error_response(res.status, "not found"));
  });
}

// Binds and serves until stop() is called on the server. Returns false when
// the port cannot be bound.
inline bool listen(httplib::Server& srv, const std::string& host, int port) {
  // Without SO_REUSEPORT a second server on the same port fails to bind
  // instead of silently sharing connections.
  srv.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
  });
  if (port == 0) {
    int bound = srv.bind_to_any_port(host);
    if (bound < 0) return false;
  } else if (!srv.bind_to_port(host, port)) {
    return false;
  }
  return srv.listen_after_bind();
}

}  // namespace pepper::serve
