// Copyright 2026 The IntentGrasp Authors. All Rights Reserved.
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

#include "intentgrasp/http.hpp"

#include <functional>

#include <httplib.h>

namespace intentgrasp {
namespace {

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw ApiError(ApiCode::kBadRequest, std::string("malformed JSON body: ") + e.what());
  }
}

using Handler = std::function<json(const httplib::Request&)>;

httplib::Server::Handler wrap(Handler handler, int ok_status = 200) {
  return [handler = std::move(handler), ok_status](const httplib::Request& req,
                                                   httplib::Response& res) {
    try {
      send(res, ok_status, handler(req));
    } catch (const ApiError& e) {
      send(res, http_status(e.code()), e.to_json());
    } catch (const Error& e) {
      const ApiError api = to_api_error(e);
      send(res, http_status(api.code()), api.to_json());
    } catch (const std::exception& e) {
      send(res, 500, ApiError(ApiCode::kEngineError, e.what()).to_json());
    }
  };
}

}  // namespace

void mount_routes(httplib::Server& server, SessionStore& store) {
  server.Get("/healthz", wrap([](const httplib::Request&) { return json{{"status", "ok"}}; }));

  server.Post("/sessions", wrap([&store](const httplib::Request& req) {
                return store.create_session(parse_body(req));
              }, 201));
  server.Get(R"(/sessions/([^/]+))", wrap([&store](const httplib::Request& req) {
               return store.get_session(req.matches[1]);
             }));
  server.Post(R"(/sessions/([^/]+)/answer)", wrap([&store](const httplib::Request& req) {
                return store.post_answer(req.matches[1], parse_body(req));
              }));
  server.Post(R"(/sessions/([^/]+)/finalize)", wrap([&store](const httplib::Request& req) {
                return store.finalize(req.matches[1]);
              }));

  server.Post("/scenes", wrap([&store](const httplib::Request& req) {
                const Scene scene = scene_from_json(parse_body(req));
                store.put_scene(scene);
                return json{{"scene_id", scene.id}};
              }, 201));
  server.Get(R"(/scenes/([^/]+))", wrap([&store](const httplib::Request& req) {
               return store.get_scene(req.matches[1]);
             }));
  server.Delete(R"(/scenes/([^/]+))", wrap([&store](const httplib::Request& req) {
                  store.remove_scene(req.matches[1]);
                  return json{{"deleted", std::string(req.matches[1])}};
                }));
  server.Get(R"(/scenes/([^/]+)/render)", wrap([&store](const httplib::Request& req) {
               return store.render_scene(req.matches[1]);
             }));

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty())
      send(res, res.status, ApiError(ApiCode::kNotFound, "no such route").to_json());
  });
}

bool serve(SessionStore& store, const std::string& host, int port) {
  httplib::Server server;
  mount_routes(server, store);
  return server.listen(host, port);
}

}  // namespace intentgrasp
