/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <string>

#include "blockdsa/service.hpp"
#include "httplib.h"

namespace blockdsa {

namespace http_detail {

inline void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  for (const auto& [k, v] : r.headers) res.set_header(k, v);
  if (!r.body.empty()) res.set_content(r.body, "application/json");
}

}  // namespace http_detail

/// Binds the run service endpoints to an httplib server. The browser
/// workspace is served from elsewhere, so every response allows any origin.
inline void mount(httplib::Server& server, RunService& service) {
  using http_detail::reply;

  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type, If-None-Match"},
                              {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                              {"Access-Control-Expose-Headers", "ETag, Location"}});
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Get("/catalog", [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.get_catalog(req.get_header_value("If-None-Match")));
  });
  server.Post("/validate", [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.post_validate(req.body));
  });
  server.Post("/run", [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.post_run(req.body));
  });
  server.Post("/sessions", [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.post_session(req.body));
  });
  server.Get(R"(/sessions/([^/]+)/events)", [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.get_events(req.matches[1], req.get_param_value("since")));
  });
  server.Post(R"(/sessions/([^/]+)/answer)", [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.post_answer(req.matches[1], req.body));
  });
  server.Delete(R"(/sessions/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.delete_session(req.matches[1]));
  });
}

}  // namespace blockdsa
