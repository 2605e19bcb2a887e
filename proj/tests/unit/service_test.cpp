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

#include <array>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "coax/common/error.hpp"
#include "coax/experiment/session_record.hpp"
#include "coax/fitting/session_fit.hpp"
#include "coax/service/http_server.hpp"
#include "coax/service/study_service.hpp"
#include "env_support.hpp"

// After Eigen: resolv.h, pulled in by httplib, defines a macro named _res.
#include "httplib.h"

namespace coax::service {
namespace {

namespace fs = std::filesystem;

std::shared_ptr<const experiment::StudyEnvironment> SharedEnvironment() {
  static const auto env =
      std::make_shared<const experiment::StudyEnvironment>(testing::SmallEnvironment());
  return env;
}

ServiceConfig TestConfig(const fs::path& dir) {
  ServiceConfig config;
  config.data_dir = dir;
  config.admin_token = "secret";
  config.max_sessions = 64;
  config.seed = 21;
  return config;
}

std::unique_ptr<StudyService> MakeService(const ServiceConfig& config) {
  return std::make_unique<StudyService>(
      config, std::map<data::DatasetName, std::shared_ptr<const experiment::StudyEnvironment>>{
                  {data::DatasetName::kWineQuality, SharedEnvironment()}});
}

// The answer one step of `payload` would receive from a scripted participant.
Submission Answer(const ServiceConfig& config, const Json& payload, Rng& rng) {
  Submission s;
  s.trial_index = payload.at("trial_index").get<int>();
  const std::string phase = payload.at("phase");
  if (phase == "screening") {
    s.choice = config.screening.at(static_cast<size_t>(s.trial_index)).answer;
  } else if (phase != "feedback") {
    s.label = Bernoulli(rng, 0.5) ? Label::kOne : Label::kTwo;
  }
  return s;
}

bool Open(const Json& payload) {
  const std::string phase = payload.at("phase");
  return phase != "complete" && phase != "excluded";
}

// Answers until the session closes; calls `inspect` on every payload.
template <typename Inspect>
Json RunToEnd(StudyService& service, const std::string& token, uint64_t seed, Inspect inspect) {
  Rng rng(seed);
  Json payload = service.CurrentTrial(token);
  while (Open(payload)) {
    inspect(payload);
    payload = service.Submit(token, Answer(service.config(), payload, rng));
  }
  return payload;
}

Json RunToEnd(StudyService& service, const std::string& token, uint64_t seed) {
  return RunToEnd(service, token, seed, [](const Json&) {});
}

TEST(Service, NoneWalkthroughValidates) {
  testing::TempDir dir("svc-none");
  ServiceConfig config = TestConfig(dir.path());
  config.fixed_xai_type = XaiType::kNone;
  auto service = MakeService(config);
  const CreateResponse created = service->CreateSession();
  EXPECT_EQ(created.assignment.at("xai_type"), "none");
  EXPECT_EQ(created.payload.at("phase"), "screening");
  EXPECT_EQ(created.payload.at("progress").at("total"), 3 + 10 * 2 + 36);
  const Json end = RunToEnd(*service, created.token, 1);
  EXPECT_EQ(end.at("phase"), "complete");
  const auto records = service->Records();
  ASSERT_EQ(records.size(), 1u);
  EXPECT_NO_THROW(experiment::ValidateSessionRecord(records[0], true));
  EXPECT_FALSE(records[0].excluded);
  for (const auto& t : records[0].training) EXPECT_FALSE(t.decision_xai.has_value());
}

TEST(Service, PayloadsNeverLeakAndMatchXaiType) {
  testing::TempDir dir("svc-leak");
  auto service = MakeService(TestConfig(dir.path()));
  std::set<std::string> seen_types;
  for (uint64_t i = 0; i < 12; ++i) {
    const CreateResponse created = service->CreateSession();
    const std::string xai = created.assignment.at("xai_type");
    seen_types.insert(xai);
    RunToEnd(*service, created.token, i, [&](const Json& p) {
      const std::string phase = p.at("phase");
      const bool has_expl = p.contains("explanation");
      if (phase == "test") {
        EXPECT_FALSE(p.contains("feedback"));
        EXPECT_EQ(p.dump().find("ai_label"), std::string::npos);
        EXPECT_EQ(has_expl, p.at("condition") == "with_xai");
      } else if (phase == "training_pre" || phase == "screening") {
        EXPECT_FALSE(has_expl);
        EXPECT_FALSE(p.contains("feedback"));
      } else if (phase == "training_xai") {
        EXPECT_TRUE(has_expl);
        EXPECT_NE(xai, "none");
      } else if (phase == "feedback") {
        EXPECT_TRUE(p.at("feedback").contains("ai_label"));
        EXPECT_EQ(has_expl, xai != "none");
      }
      if (has_expl) {
        double largest = 0.0;
        for (double v : p.at("explanation").at("values")) largest = std::max(largest, std::abs(v));
        EXPECT_NEAR(largest, 1.0, 1e-12);
        if (xai == "importance") {
          for (double v : p.at("explanation").at("values")) EXPECT_GE(v, 0.0);
        }
      }
    });
  }
  EXPECT_GE(seen_types.size(), 2u);
  for (const auto& r : service->Records()) EXPECT_NO_THROW(experiment::ValidateSessionRecord(r, true));
}

TEST(Service, DuplicateAndStaleSubmitsConflict) {
  testing::TempDir dir("svc-409");
  auto service = MakeService(TestConfig(dir.path()));
  const CreateResponse created = service->CreateSession();
  Rng rng(1);
  Json payload = created.payload;
  for (int i = 0; i < 6; ++i) payload = service->Submit(created.token, Answer(service->config(), payload, rng));
  const std::string before = service->ExportSessions({false, true});
  Submission stale{5, Label::kOne, std::nullopt};
  EXPECT_THROW(service->Submit(created.token, stale), ConflictError);
  Submission ahead{9, Label::kOne, std::nullopt};
  EXPECT_THROW(service->Submit(created.token, ahead), ConflictError);
  EXPECT_EQ(service->ExportSessions({false, true}), before);
  EXPECT_EQ(service->CurrentTrial(created.token), payload);
  EXPECT_THROW(service->CurrentTrial("ffff"), AuthError);
  EXPECT_THROW(service->Submit("ffff", stale), AuthError);
  Submission unlabeled{6, std::nullopt, std::nullopt};
  if (payload.at("phase") != "feedback") {
    EXPECT_THROW(service->Submit(created.token, unlabeled), ValidationError);
  }
}

TEST(Service, ScreeningFailureExcludes) {
  testing::TempDir dir("svc-screen");
  auto service = MakeService(TestConfig(dir.path()));
  const CreateResponse created = service->CreateSession();
  const int wrong = 1 - service->config().screening[0].answer;
  Json payload = created.payload;
  for (size_t i = 0; i < service->config().screening.size(); ++i) {
    Submission s{static_cast<int>(i), std::nullopt, i == 0 ? wrong : service->config().screening[i].answer};
    payload = service->Submit(created.token, s);
  }
  EXPECT_EQ(payload.at("phase"), "excluded");
  EXPECT_FALSE(payload.contains("attributes"));
  EXPECT_THROW(service->Submit(created.token, {payload.at("trial_index").get<int>(), Label::kOne, {}}),
               ConflictError);
  EXPECT_TRUE(service->Records().empty());
  const auto excluded = service->Records({true, false});
  ASSERT_EQ(excluded.size(), 1u);
  EXPECT_TRUE(excluded[0].excluded);
  EXPECT_EQ(service->ExportSessions(), "");
}

TEST(Service, SecondSessionSkipsScreening) {
  testing::TempDir dir("svc-second");
  auto service = MakeService(TestConfig(dir.path()));
  const CreateResponse first = service->CreateSession({"alice_01"});
  EXPECT_EQ(first.payload.at("phase"), "screening");
  RunToEnd(*service, first.token, 3);
  const CreateResponse second = service->CreateSession({"alice_01"});
  EXPECT_EQ(second.assignment.at("session_index"), 1);
  EXPECT_NE(second.payload.at("phase"), "screening");
  EXPECT_EQ(second.session_id, "alice_01/1");
  EXPECT_THROW(service->CreateSession({"bad id!"}), ValidationError);
}

TEST(Service, CrashRecoveryAcceptsTornSubmitOnce) {
  testing::TempDir dir("svc-crash");
  const ServiceConfig config = TestConfig(dir.path());
  std::string token;
  // Steps 14 and 22 tear an event that also triggered a snapshot.
  for (int tear_at : {5, 14, 22}) {
    std::string reference;
    {
      auto service = MakeService(config);
      if (token.empty()) token = service->CreateSession().token;
      Rng rng(tear_at);
      Json payload = service->CurrentTrial(token);
      while (payload.at("trial_index").get<int>() < tear_at) {
        payload = service->Submit(token, Answer(config, payload, rng));
      }
      ASSERT_EQ(payload.at("trial_index").get<int>(), tear_at);
      reference = service->ExportSessions({false, true});
      service->Submit(token, Answer(config, payload, rng));
    }
    // Drop the tail of the last event, as if the process died mid-write.
    const fs::path log = dir.path() / "sessions" / "s0.log";
    std::string text;
    {
      std::ifstream in(log, std::ios::binary);
      text.assign(std::istreambuf_iterator<char>(in), {});
    }
    const size_t last = text.rfind('\n', text.size() - 2);
    fs::resize_file(log, last + 1 + (text.size() - last - 1) / 2);

    auto restarted = MakeService(config);
    Json payload = restarted->CurrentTrial(token);
    EXPECT_EQ(payload.at("trial_index").get<int>(), tear_at);
    EXPECT_EQ(restarted->ExportSessions({false, true}), reference);
    Rng rng(99);
    const Submission again = Answer(config, payload, rng);
    EXPECT_NO_THROW(restarted->Submit(token, again));
    EXPECT_THROW(restarted->Submit(token, again), ConflictError);
  }
  auto final_run = MakeService(config);
  RunToEnd(*final_run, token, 5);
  ASSERT_EQ(final_run->Records().size(), 1u);
  EXPECT_NO_THROW(experiment::ValidateSessionRecord(final_run->Records()[0], true));
}

TEST(Service, CorruptMiddleLineIsRejected) {
  testing::TempDir dir("svc-corrupt");
  const ServiceConfig config = TestConfig(dir.path());
  {
    auto service = MakeService(config);
    service->CreateSession();
  }
  std::ofstream(dir.path() / "sessions" / "s0.log", std::ios::app) << "{oops\n";
  EXPECT_THROW(MakeService(config), ParseError);
}

TEST(Service, ExportIsByteStableAcrossRestarts) {
  testing::TempDir dir("svc-export");
  const ServiceConfig config = TestConfig(dir.path());
  std::string first;
  {
    auto service = MakeService(config);
    EXPECT_EQ(service->ExportSessions(), "");
    for (uint64_t i = 0; i < 4; ++i) RunToEnd(*service, service->CreateSession().token, i);
    service->CreateSession();  // left incomplete
    first = service->ExportSessions();
    EXPECT_EQ(service->ExportSessions(), first);
    EXPECT_EQ(service->Records().size(), 4u);
    EXPECT_EQ(service->Records({false, true}).size(), 5u);
  }
  auto restarted = MakeService(config);
  EXPECT_EQ(restarted->ExportSessions(), first);
  EXPECT_EQ(restarted->session_count(), 5u);
}

TEST(Service, ExportedRecordsFitLikeInMemoryOnes) {
  testing::TempDir dir("svc-fit");
  ServiceConfig config = TestConfig(dir.path());
  config.fixed_xai_type = XaiType::kAttribution;
  auto service = MakeService(config);
  for (uint64_t i = 0; i < 2; ++i) RunToEnd(*service, service->CreateSession().token, i);
  const fs::path path = dir.path() / "export.jsonl";
  std::ofstream(path) << service->ExportSessions();
  const auto imported = experiment::ReadSessionRecords(path.string());
  const auto in_memory = service->Records();
  ASSERT_EQ(imported.size(), in_memory.size());
  for (size_t i = 0; i < imported.size(); ++i) {
    EXPECT_EQ(imported[i], in_memory[i]);
    for (TestCondition c : {TestCondition::kWithXai, TestCondition::kWithoutXai}) {
      fitting::FitConfig config;
      config.budget = 20;
      config.seed = 3;
      const auto a = fitting::SelectStrategy(fitting::PrepareSession(imported[i], c), config);
      const auto b = fitting::SelectStrategy(fitting::PrepareSession(in_memory[i], c), config);
      EXPECT_EQ(a.best.strategy, b.best.strategy);
      EXPECT_EQ(a.best.nll, b.best.nll);
      EXPECT_EQ(a.best.params, b.best.params);
    }
  }
}

TEST(Service, TokensDistinctAndCapacityBounded) {
  testing::TempDir dir("svc-tokens");
  ServiceConfig config = TestConfig(dir.path());
  config.max_sessions = 20;
  auto service = MakeService(config);
  std::set<std::string> tokens;
  const std::regex hex("[0-9a-f]{32}");
  for (int i = 0; i < 20; ++i) {
    const std::string t = service->CreateSession().token;
    EXPECT_TRUE(std::regex_match(t, hex));
    tokens.insert(t);
  }
  EXPECT_EQ(tokens.size(), 20u);
  EXPECT_THROW(service->CreateSession(), CapacityError);
  for (const auto& entry : fs::directory_iterator(dir.path() / "sessions")) {
    for (const auto& t : tokens) {
      EXPECT_EQ(entry.path().filename().string().find(t), std::string::npos);
    }
  }
}

TEST(Assignment, WeightedDrawsMatchPreset) {
  Rng rng(17);
  std::array<int, 3> counts{};
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++counts[static_cast<size_t>(DrawXaiType({1, 4, 2}, rng))];
  EXPECT_NEAR(counts[0] / double(draws), 1.0 / 7, 0.02);
  EXPECT_NEAR(counts[1] / double(draws), 4.0 / 7, 0.02);
  EXPECT_NEAR(counts[2] / double(draws), 2.0 / 7, 0.02);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(DrawXaiType({0, 0, 3}, rng), XaiType::kAttribution);
}

TEST(Config, JsonAndEnvironmentOverrides) {
  const Json json = Json::parse(R"({"port": 9001, "assignment_weights": "published",
      "xai_type": "importance", "datasets": ["wine", "adult"], "admin_token": "t",
      "screening": {"min_correct": 2}, "environment": {"pool_size": 120}})");
  ServiceConfig config = ServiceConfigFromJson(json);
  EXPECT_EQ(config.port, 9001);
  EXPECT_EQ(config.assignment_weights, (std::array<double, 3>{1, 4, 2}));
  EXPECT_EQ(config.fixed_xai_type, XaiType::kImportance);
  EXPECT_EQ(config.datasets.size(), 2u);
  EXPECT_EQ(config.screening_min_correct, 2u);
  EXPECT_EQ(config.environment.pool_size, 120u);
  const std::map<std::string, std::string> env = {
      {"COAX_PORT", "7070"}, {"COAX_SEED", "5"}, {"COAX_DATA_DIR", "/tmp/x"},
      {"COAX_ASSIGNMENT_WEIGHTS", "1:1:1"}, {"COAX_ADMIN_TOKEN", "abc"}};
  ApplyEnvironmentOverrides(config, [&](const char* key) -> std::optional<std::string> {
    const auto it = env.find(key);
    if (it == env.end()) return std::nullopt;
    return it->second;
  });
  EXPECT_EQ(config.port, 7070);
  EXPECT_EQ(config.seed, 5u);
  EXPECT_EQ(config.data_dir, fs::path("/tmp/x"));
  EXPECT_EQ(config.assignment_weights, (std::array<double, 3>{1, 1, 1}));
  EXPECT_EQ(config.admin_token, "abc");
  EXPECT_THROW(ServiceConfigFromJson(Json::parse(R"({"assignment_weights": "1:x:2"})")),
               ConfigError);
}

TEST(Http, StatusMapping) {
  EXPECT_EQ(StatusFor(AuthError("x")), 401);
  EXPECT_EQ(StatusFor(ConflictError("x")), 409);
  EXPECT_EQ(StatusFor(CapacityError("x")), 503);
  EXPECT_EQ(StatusFor(ValidationError("x")), 400);
  EXPECT_EQ(StatusFor(std::runtime_error("x")), 500);
}

TEST(Http, EndToEndOverLoopback) {
  testing::TempDir dir("svc-http");
  ServiceConfig config = TestConfig(dir.path());
  config.static_dir = dir.path() / "ui";
  fs::create_directories(config.static_dir);
  std::ofstream(config.static_dir / "index.html") << "<html>ui</html>";
  auto service = MakeService(config);
  httplib::Server server;
  RegisterRoutes(server, *service);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/api/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  auto page = client.Get("/index.html");
  ASSERT_TRUE(page);
  EXPECT_EQ(page->body, "<html>ui</html>");

  auto created = client.Post("/api/sessions", "{}", "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const Json body = Json::parse(created->body);
  const std::string token = body.at("token");
  auto trial = client.Get("/api/sessions/" + token + "/trial");
  ASSERT_TRUE(trial);
  EXPECT_EQ(Json::parse(trial->body).at("phase"), "screening");

  const std::string answer = Json{{"trial_index", 0}, {"choice", config.screening[0].answer}}.dump();
  auto ok = client.Post("/api/sessions/" + token + "/decision", answer, "application/json");
  ASSERT_TRUE(ok);
  EXPECT_EQ(ok->status, 200);
  EXPECT_EQ(Json::parse(ok->body).at("trial_index"), 1);
  auto dup = client.Post("/api/sessions/" + token + "/decision", answer, "application/json");
  EXPECT_EQ(dup->status, 409);
  auto bad = client.Post("/api/sessions/" + token + "/decision",
                         R"({"trial_index": 1, "label": 3})", "application/json");
  EXPECT_EQ(bad->status, 400);
  auto junk = client.Post("/api/sessions/" + token + "/decision", "{", "application/json");
  EXPECT_EQ(junk->status, 400);
  auto unknown = client.Get("/api/sessions/0123abcd/trial");
  EXPECT_EQ(unknown->status, 401);

  EXPECT_EQ(client.Get("/api/export")->status, 403);
  httplib::Headers admin = {{"X-Admin-Token", "secret"}};
  auto exported = client.Get("/api/export?incomplete=1", admin);
  ASSERT_TRUE(exported);
  EXPECT_EQ(exported->status, 200);
  EXPECT_EQ(exported->body, service->ExportSessions({false, true}));

  server.stop();
  thread.join();
}

}  // namespace
}  // namespace coax::service
