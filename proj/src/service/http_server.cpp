/*
 * Copyright 2026 The CoAX Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "coax/service/http_server.hpp"

#include <cstdio>

#include "httplib.h"

namespace coax::service {

namespace {

void SendJson(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename Fn>
void Guard(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    SendJson(res, StatusFor(e), Json{{"error", e.what()}});
  }
}

Json ParseBody(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  Json body = Json::parse(req.body);
  if (!body.is_object()) throw ValidationError("request body must be a JSON object");
  return body;
}

}  // namespace

void RegisterRoutes(httplib::Server& server, StudyService& service) {
  server.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
    SendJson(res, 200, Json{{"status", "ok"}});
  });

  server.Post("/api/sessions", [&service](const httplib::Request& req,
                                          httplib::Response& res) {
    Guard(res, [&] {
      const Json body = ParseBody(req);
      CreateRequest request;
      if (body.contains("participant_id")) {
        request.participant_id = body.at("participant_id").get<std::string>();
      }
      const CreateResponse created = service.CreateSession(request);
      SendJson(res, 201, Json{{"token", created.token},
                              {"session_id", created.session_id},
                              {"assignment", created.assignment},
                              {"payload", created.payload}});
    });
  });

  server.Get(R"(/api/sessions/([0-9a-f]+)/trial)",
             [&service](const httplib::Request& req, httplib::Response& res) {
               Guard(res, [&] { SendJson(res, 200, service.CurrentTrial(req.matches[1])); });
             });

  server.Post(R"(/api/sessions/([0-9a-f]+)/decision)",
              [&service](const httplib::Request& req, httplib::Response& res) {
                Guard(res, [&] {
                  const Json body = ParseBody(req);
                  Submission submission;
                  submission.trial_index = body.at("trial_index").get<int>();
                  if (body.contains("label")) {
                    const int label = body.at("label").get<int>();
                    if (label != 1 && label != 2) throw ValidationError("label must be 1 or 2");
                    submission.label = label == 1 ? Label::kOne : Label::kTwo;
                  }
                  if (body.contains("choice")) submission.choice = body.at("choice").get<int>();
                  SendJson(res, 200, service.Submit(req.matches[1], submission));
                });
              });

  server.Get("/api/export", [&service](const httplib::Request& req, httplib::Response& res) {
    const std::string& expected = service.config().admin_token;
    if (expected.empty() || req.get_header_value("X-Admin-Token") != expected) {
      SendJson(res, 403, Json{{"error", "admin token required"}});
      return;
    }
    Guard(res, [&] {
      ExportFilter filter;
      filter.include_excluded = req.get_param_value("excluded") == "1";
      filter.include_incomplete = req.get_param_value("incomplete") == "1";
      res.status = 200;
      res.set_content(service.ExportSessions(filter), "application/x-ndjson");
    });
  });

  const auto& static_dir = service.config().static_dir;
  if (!static_dir.empty()) {
    if (!server.set_mount_point("/", static_dir.string())) {
      throw ConfigError("static directory not found: " + static_dir.string());
    }
  }
}

void Serve(StudyService& service) {
  httplib::Server server;
  RegisterRoutes(server, service);
  const auto& config = service.config();
  std::fprintf(stderr, "listening on %s:%d\n", config.host.c_str(), config.port);
  if (!server.listen(config.host, config.port)) {
    throw ConfigError("cannot listen on " + config.host + ":" + std::to_string(config.port));
  }
}

}  // namespace coax::service
