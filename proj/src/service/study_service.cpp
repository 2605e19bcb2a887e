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

#include "coax/service/study_service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace coax::service {

namespace {

namespace fs = std::filesystem;

int64_t NowMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string HexToken(Rng& rng) {
  static const char* const kDigits = "0123456789abcdef";
  std::string token;
  for (int i = 0; i < 2; ++i) {
    uint64_t v = rng();
    for (int j = 0; j < 16; ++j, v >>= 4) token += kDigits[v & 0xf];
  }
  return token;
}

bool ValidParticipantId(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
  });
}

std::array<double, 3> ParseWeights(const std::string& text) {
  std::array<double, 3> weights{};
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), ':', ' ');
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream in(normalized);
  for (double& w : weights) {
    if (!(in >> w) || w < 0.0) {
      throw ConfigError("assignment weights must be three non-negative numbers");
    }
  }
  std::string rest;
  if (in >> rest) throw ConfigError("assignment weights must be three numbers");
  if (weights[0] + weights[1] + weights[2] <= 0.0) {
    throw ConfigError("assignment weights must not all be zero");
  }
  return weights;
}

void WriteFileAtomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
}

}  // namespace

std::vector<ScreeningItem> DefaultScreeningItems() {
  return {{"In this study, what do you predict on each trial?",
           {"The true label of the instance", "The label the AI predicts"},
           1},
          {"When is the AI's answer shown to you?",
           {"After each training trial", "After each test trial", "Never"},
           0},
          {"Longer bars for an attribute mean the attribute has",
           {"A smaller value", "A larger value"},
           1}};
}

ServiceConfig ServiceConfigFromJson(const Json& json) {
  ServiceConfig config;
  if (!json.is_object()) throw ConfigError("service config must be a JSON object");
  config.host = json.value("host", config.host);
  config.port = json.value("port", config.port);
  config.data_dir = json.value("data_dir", config.data_dir.string());
  config.static_dir = json.value("static_dir", config.static_dir.string());
  if (json.contains("assignment_weights")) {
    const Json& w = json.at("assignment_weights");
    if (w.is_string()) {
      const std::string preset = w.get<std::string>();
      config.assignment_weights = preset == "published" ? std::array<double, 3>{1, 4, 2}
                                                    : ParseWeights(preset);
    } else {
      const auto v = w.get<std::vector<double>>();
      if (v.size() != 3) throw ConfigError("assignment_weights needs three entries");
      config.assignment_weights = ParseWeights(std::to_string(v[0]) + ":" +
                                               std::to_string(v[1]) + ":" +
                                               std::to_string(v[2]));
    }
  }
  if (json.contains("xai_type")) {
    config.fixed_xai_type = ParseXaiType(json.at("xai_type").get<std::string>());
  }
  if (json.contains("datasets")) {
    config.datasets.clear();
    for (const auto& d : json.at("datasets")) {
      config.datasets.push_back(data::ParseDatasetName(d.get<std::string>()));
    }
    if (config.datasets.empty()) throw ConfigError("datasets must not be empty");
  }
  config.seed = json.value("seed", config.seed);
  config.admin_token = json.value("admin_token", config.admin_token);
  config.max_sessions = json.value("max_sessions", config.max_sessions);
  config.snapshot_every = json.value("snapshot_every", config.snapshot_every);
  if (json.contains("screening")) {
    const Json& s = json.at("screening");
    config.screening_min_correct = s.value("min_correct", config.screening_min_correct);
    if (s.contains("items")) {
      config.screening.clear();
      for (const auto& item : s.at("items")) {
        ScreeningItem parsed{item.at("prompt").get<std::string>(),
                             item.at("choices").get<std::vector<std::string>>(),
                             item.at("answer").get<int>()};
        if (parsed.answer < 0 || parsed.answer >= static_cast<int>(parsed.choices.size())) {
          throw ConfigError("screening answer out of range");
        }
        config.screening.push_back(std::move(parsed));
      }
    }
  }
  if (json.contains("environment")) {
    const Json& e = json.at("environment");
    auto& env = config.environment;
    env.csv_path = e.value("csv_path", env.csv_path);
    env.model_training_size = e.value("model_training_size", env.model_training_size);
    env.pool_size = e.value("pool_size", env.pool_size);
    env.background_size = e.value("background_size", env.background_size);
    env.seed = e.value("seed", env.seed);
    env.mlp.epochs = e.value("mlp_epochs", env.mlp.epochs);
    if (e.contains("explainer")) {
      env.explainer.method = xai::ParseMethod(e.at("explainer").get<std::string>());
    }
  }
  if (config.snapshot_every == 0) throw ConfigError("snapshot_every must be positive");
  return config;
}

ServiceConfig LoadServiceConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  Json json;
  try {
    in >> json;
  } catch (const Json::exception& e) {
    throw ConfigError("invalid config " + path.string() + ": " + e.what());
  }
  return ServiceConfigFromJson(json);
}

void ApplyEnvironmentOverrides(ServiceConfig& config, const EnvLookup& lookup) {
  const EnvLookup get = lookup ? lookup : [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (!v) return std::nullopt;
    return std::string(v);
  };
  try {
    if (auto v = get("COAX_PORT")) config.port = std::stoi(*v);
    if (auto v = get("COAX_SEED")) config.seed = std::stoull(*v);
  } catch (const std::logic_error&) {
    throw ConfigError("COAX_PORT and COAX_SEED must be integers");
  }
  if (auto v = get("COAX_DATA_DIR")) config.data_dir = *v;
  if (auto v = get("COAX_ASSIGNMENT_WEIGHTS")) config.assignment_weights = ParseWeights(*v);
  if (auto v = get("COAX_ADMIN_TOKEN")) config.admin_token = *v;
  if (config.port <= 0 || config.port > 65535) throw ConfigError("port out of range");
}

XaiType DrawXaiType(const std::array<double, 3>& weights, Rng& rng) {
  const double total = weights[0] + weights[1] + weights[2];
  double u = Uniform01(rng) * total;
  const XaiType types[] = {XaiType::kNone, XaiType::kImportance, XaiType::kAttribution};
  for (int i = 0; i < 3; ++i) {
    if (u < weights[i]) return types[i];
    u -= weights[i];
  }
  for (int i = 2; i >= 0; --i) {
    if (weights[i] > 0.0) return types[i];
  }
  return XaiType::kNone;
}

std::string ToString(Phase phase) {
  switch (phase) {
    case Phase::kScreening:
      return "screening";
    case Phase::kTrainingPre:
      return "training_pre";
    case Phase::kTrainingXai:
      return "training_xai";
    case Phase::kFeedback:
      return "feedback";
    case Phase::kTest:
      return "test";
    case Phase::kComplete:
      return "complete";
    case Phase::kExcluded:
      return "excluded";
  }
  return "unknown";
}

struct StudyService::Session {
  std::mutex mutex;
  std::string token;
  size_t ordinal = 0;
  data::DatasetName dataset = data::DatasetName::kWineQuality;
  std::vector<Step> steps;
  size_t cursor = 0;
  std::vector<int> screening_answers;
  experiment::SessionRecord record;
  size_t events = 0;

  Phase phase() const {
    if (cursor < steps.size()) return steps[cursor].phase;
    return record.excluded ? Phase::kExcluded : Phase::kComplete;
  }
};

StudyService::StudyService(ServiceConfig config)
    : StudyService(std::move(config), {}) {}

StudyService::StudyService(
    ServiceConfig config,
    std::map<data::DatasetName, std::shared_ptr<const experiment::StudyEnvironment>>
        environments)
    : config_(std::move(config)), environments_(std::move(environments)) {
  std::random_device device;
  token_rng_.seed((static_cast<uint64_t>(device()) << 32) ^ device() ^
                  static_cast<uint64_t>(NowMillis()));
  if (config_.datasets.empty()) throw ConfigError("no datasets configured");
  for (data::DatasetName name : config_.datasets) {
    if (!environments_.count(name)) {
      experiment::EnvironmentConfig env = config_.environment;
      env.dataset = name;
      environments_[name] =
          std::make_shared<const experiment::StudyEnvironment>(
              experiment::StudyEnvironment::Build(env));
    }
    splits_[name] = environments_.at(name)->Splits(
        config_.max_sessions, DeriveSeed(config_.seed, {static_cast<uint64_t>(name), 0x5b1}));
  }
  fs::create_directories(SessionDir());
  LoadFromDisk();
}

StudyService::~StudyService() = default;

fs::path StudyService::SessionDir() const { return config_.data_dir / "sessions"; }

const experiment::StudyEnvironment& StudyService::Environment(data::DatasetName name) const {
  auto it = environments_.find(name);
  if (it == environments_.end()) throw ConfigError("dataset not served: " + data::ToString(name));
  return *it->second;
}

std::unique_ptr<StudyService::Session> StudyService::BuildSession(const Json& created) const {
  auto session = std::make_unique<Session>();
  session->token = created.at("token").get<std::string>();
  session->ordinal = created.at("ordinal").get<size_t>();
  session->dataset = data::ParseDatasetName(created.at("dataset").get<std::string>());
  const auto& env = Environment(session->dataset);
  const XaiType xai_type = ParseXaiType(created.at("xai_type").get<std::string>());
  const bool has_xai = xai_type != XaiType::kNone;

  auto lookup = [&](const std::string& id) {
    for (const auto& instance : env.pool()) {
      if (instance.id == id) return instance;
    }
    throw SchemaError("session refers to unknown instance '" + id + "'");
  };

  experiment::SessionRecord& record = session->record;
  record.participant_id = created.at("participant_id").get<std::string>();
  record.session_index = created.at("session_index").get<int>();
  record.xai_type = xai_type;
  record.dataset = data::ToString(session->dataset);
  record.explainer = has_xai ? xai::ToString(env.config().explainer.method) : "";

  if (created.at("screening").get<bool>()) {
    for (size_t i = 0; i < config_.screening.size(); ++i) {
      session->steps.push_back({Phase::kScreening, i});
    }
  }
  int trial = 0;
  for (const auto& id : created.at("training").get<std::vector<std::string>>()) {
    experiment::TrainingTrial t;
    t.trial_index = trial++;
    t.instance = lookup(id);
    t.ai_label = env.AiLabel(id);
    if (has_xai) t.explanation = env.ExplanationFor(id);
    const size_t item = record.training.size();
    session->steps.push_back({Phase::kTrainingPre, item});
    if (has_xai) session->steps.push_back({Phase::kTrainingXai, item});
    session->steps.push_back({Phase::kFeedback, item});
    record.training.push_back(std::move(t));
  }
  const auto blocks = created.at("blocks").get<std::vector<std::string>>();
  const auto testing = created.at("testing").get<std::vector<std::string>>();
  const size_t per_block = testing.size() / std::max<size_t>(blocks.size(), 1);
  for (size_t i = 0; i < testing.size(); ++i) {
    experiment::TestTrial t;
    t.trial_index = trial++;
    t.block = static_cast<int>(i / per_block);
    t.condition = ParseTestCondition(blocks.at(static_cast<size_t>(t.block)));
    t.instance = lookup(testing[i]);
    t.ai_label = env.AiLabel(testing[i]);
    if (t.condition == TestCondition::kWithXai) t.explanation = env.ExplanationFor(testing[i]);
    session->steps.push_back({Phase::kTest, record.test.size()});
    record.test.push_back(std::move(t));
  }
  session->events = 1;
  return session;
}

void StudyService::Apply(Session& session, const Json& event) const {
  if (event.at("event").get<std::string>() != "answer") {
    throw SchemaError("unexpected event in session log");
  }
  if (event.at("trial_index").get<size_t>() != session.cursor ||
      session.cursor >= session.steps.size()) {
    throw SchemaError("session log out of order");
  }
  const Step step = session.steps[session.cursor];
  auto label = [&] { return event.at("label").get<int>() == 1 ? Label::kOne : Label::kTwo; };
  switch (step.phase) {
    case Phase::kScreening:
      session.screening_answers.push_back(event.at("choice").get<int>());
      break;
    case Phase::kTrainingPre:
      session.record.training[step.item].decision_pre = label();
      break;
    case Phase::kTrainingXai:
      session.record.training[step.item].decision_xai = label();
      break;
    case Phase::kFeedback:
      break;
    case Phase::kTest:
      session.record.test[step.item].decision = label();
      break;
    default:
      throw SchemaError("session log has an answer past the end");
  }
  ++session.cursor;
  ++session.events;
  const bool screening_done =
      step.phase == Phase::kScreening &&
      (session.cursor == session.steps.size() ||
       session.steps[session.cursor].phase != Phase::kScreening);
  if (screening_done) {
    size_t correct = 0;
    for (size_t i = 0; i < session.screening_answers.size(); ++i) {
      correct += session.screening_answers[i] == config_.screening[i].answer;
    }
    const size_t needed = config_.screening_min_correct == 0
                              ? config_.screening.size()
                              : config_.screening_min_correct;
    if (correct < needed) {
      session.record.excluded = true;
      session.cursor = session.steps.size();
    }
  }
}

void StudyService::Append(Session& session, const Json& event) {
  const fs::path path = SessionDir() / ("s" + std::to_string(session.ordinal) + ".log");
  const std::string line = DumpLine(event) + "\n";
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw ConfigError("cannot open session log " + path.string());
  const ssize_t written = ::write(fd, line.data(), line.size());
  ::fsync(fd);
  ::close(fd);
  if (written != static_cast<ssize_t>(line.size())) {
    throw ConfigError("short write to session log " + path.string());
  }
}

void StudyService::WriteSnapshot(const Session& session) const {
  Json snapshot{{"events", session.events},
                {"cursor", session.cursor},
                {"screening_answers", session.screening_answers},
                {"record", experiment::ToJson(session.record)}};
  WriteFileAtomic(SessionDir() / ("s" + std::to_string(session.ordinal) + ".snapshot.json"),
                  DumpLine(snapshot));
}

void StudyService::LoadFromDisk() {
  std::vector<fs::path> logs;
  for (const auto& entry : fs::directory_iterator(SessionDir())) {
    if (entry.path().extension() == ".log") logs.push_back(entry.path());
  }
  std::sort(logs.begin(), logs.end());
  for (const auto& path : logs) {
    std::string text;
    {
      std::ifstream in(path, std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    std::vector<Json> events;
    size_t pos = 0;
    while (true) {
      const size_t end = text.find('\n', pos);
      if (end == std::string::npos) break;
      try {
        events.push_back(Json::parse(text.substr(pos, end - pos)));
      } catch (const Json::exception&) {
        throw ParseError("corrupt session log " + path.string(),
                         static_cast<long>(events.size() + 1));
      }
      pos = end + 1;
    }
    // A crash mid-append leaves a partial last line; drop it.
    if (pos < text.size()) fs::resize_file(path, pos);
    if (events.empty()) continue;

    auto session = BuildSession(events.front());
    size_t start = 1;
    const fs::path snap_path =
        SessionDir() / ("s" + std::to_string(session->ordinal) + ".snapshot.json");
    if (fs::exists(snap_path)) {
      std::ifstream snap_in(snap_path);
      Json snapshot;
      try {
        snap_in >> snapshot;
      } catch (const Json::exception&) {
        snapshot = Json();
      }
      if (snapshot.is_object() && snapshot.at("events").get<size_t>() <= events.size()) {
        session->cursor = snapshot.at("cursor").get<size_t>();
        session->screening_answers = snapshot.at("screening_answers").get<std::vector<int>>();
        session->record = experiment::SessionRecordFromJson(snapshot.at("record"));
        session->events = snapshot.at("events").get<size_t>();
        start = session->events;
      }
    }
    for (size_t i = start; i < events.size(); ++i) Apply(*session, events[i]);
    participant_sessions_[session->record.participant_id] =
        std::max(participant_sessions_[session->record.participant_id],
                 session->record.session_index + 1);
    next_ordinal_ = std::max(next_ordinal_, session->ordinal + 1);
    sessions_[session->token] = std::move(session);
  }
}

CreateResponse StudyService::CreateSession(const CreateRequest& request) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (next_ordinal_ >= config_.max_sessions) {
    throw CapacityError("all " + std::to_string(config_.max_sessions) +
                        " session slots are taken");
  }
  const size_t ordinal = next_ordinal_;
  Rng rng(DeriveSeed(config_.seed, {ordinal, 0xa55}));
  std::string participant_id;
  if (request.participant_id) {
    if (!ValidParticipantId(*request.participant_id)) {
      throw ValidationError("participant_id must be 1-64 of [A-Za-z0-9_-]");
    }
    participant_id = *request.participant_id;
  } else {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "p%06zu", ordinal);
    participant_id = buf;
  }
  const int session_index = participant_sessions_.count(participant_id)
                                ? participant_sessions_.at(participant_id)
                                : 0;
  const data::DatasetName dataset =
      config_.datasets[UniformIndex(rng, config_.datasets.size())];
  const XaiType xai_type = config_.fixed_xai_type
                               ? *config_.fixed_xai_type
                               : DrawXaiType(config_.assignment_weights, rng);
  std::vector<std::string> blocks = {"without_xai", "without_xai"};
  if (xai_type != XaiType::kNone) {
    blocks = {"with_xai", "without_xai"};
    if (Bernoulli(rng, 0.5)) std::swap(blocks[0], blocks[1]);
  }
  const data::StudySplit& split = splits_.at(dataset).at(ordinal);
  std::vector<std::string> training, testing;
  for (const auto& i : split.training) training.push_back(i.id);
  for (const auto& i : split.testing) testing.push_back(i.id);

  std::string token;
  do {
    token = HexToken(token_rng_);
  } while (sessions_.count(token));

  const Json created{{"event", "created"},
                     {"token", token},
                     {"ordinal", ordinal},
                     {"participant_id", participant_id},
                     {"session_index", session_index},
                     {"dataset", data::ToString(dataset)},
                     {"xai_type", ToString(xai_type)},
                     {"blocks", blocks},
                     {"training", training},
                     {"testing", testing},
                     {"screening", session_index == 0 && !config_.screening.empty()},
                     {"ts", NowMillis()}};
  auto session = BuildSession(created);
  Append(*session, created);
  WriteSnapshot(*session);
  next_ordinal_ = ordinal + 1;
  participant_sessions_[participant_id] = session_index + 1;

  CreateResponse response;
  response.token = token;
  response.session_id = session->record.session_id();
  response.assignment = Json{{"dataset", data::ToString(dataset)},
                             {"xai_type", ToString(xai_type)},
                             {"participant_id", participant_id},
                             {"session_index", session_index}};
  response.payload = Payload(*session);
  sessions_[token] = std::move(session);
  return response;
}

StudyService::Session& StudyService::Find(const std::string& token) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) throw AuthError("unknown session token");
  return *it->second;
}

Json StudyService::CurrentTrial(const std::string& token) {
  Session& session = Find(token);
  std::lock_guard<std::mutex> lock(session.mutex);
  return Payload(session);
}

Json StudyService::Submit(const std::string& token, const Submission& submission) {
  Session& session = Find(token);
  std::lock_guard<std::mutex> lock(session.mutex);
  if (session.cursor >= session.steps.size()) {
    throw ConflictError("session has no open trial");
  }
  if (submission.trial_index < 0 ||
      static_cast<size_t>(submission.trial_index) != session.cursor) {
    throw ConflictError("trial " + std::to_string(submission.trial_index) +
                        " is not the current trial " + std::to_string(session.cursor));
  }
  const Step step = session.steps[session.cursor];
  Json event{{"event", "answer"}, {"trial_index", session.cursor}, {"ts", NowMillis()}};
  if (step.phase == Phase::kScreening) {
    const auto& item = config_.screening[step.item];
    if (!submission.choice || *submission.choice < 0 ||
        *submission.choice >= static_cast<int>(item.choices.size())) {
      throw ValidationError("screening answer needs a choice index");
    }
    event["choice"] = *submission.choice;
  } else if (step.phase != Phase::kFeedback) {
    if (!submission.label) throw ValidationError("decision needs a label of 1 or 2");
    event["label"] = ToInt(*submission.label);
  }
  Append(session, event);
  Apply(session, event);
  if (session.events % config_.snapshot_every == 0 ||
      session.cursor >= session.steps.size()) {
    WriteSnapshot(session);
  }
  return Payload(session);
}

Json StudyService::Payload(const Session& session) const {
  const Phase phase = session.phase();
  Json payload{{"trial_index", session.cursor},
               {"phase", ToString(phase)},
               {"session_id", session.record.session_id()},
               {"progress", {{"step", session.cursor}, {"total", session.steps.size()}}}};
  if (phase == Phase::kComplete) {
    payload["message"] = "Session complete. Thank you for taking part.";
    return payload;
  }
  if (phase == Phase::kExcluded) {
    payload["message"] = "Thank you. This study is not available to you.";
    return payload;
  }
  const Step step = session.steps[session.cursor];
  if (phase == Phase::kScreening) {
    const auto& item = config_.screening[step.item];
    payload["screening"] = {{"prompt", item.prompt}, {"choices", item.choices}};
    return payload;
  }
  const auto& env = Environment(session.dataset);
  const XaiType xai_type = session.record.xai_type;
  const data::Instance* instance = nullptr;
  const std::optional<xai::Explanation>* explanation = nullptr;
  bool show_explanation = false;
  if (phase == Phase::kTest) {
    const auto& t = session.record.test[step.item];
    instance = &t.instance;
    explanation = &t.explanation;
    show_explanation = t.condition == TestCondition::kWithXai;
    payload["protocol_trial"] = t.trial_index;
    payload["block"] = t.block;
    payload["condition"] = ToString(t.condition);
  } else {
    const auto& t = session.record.training[step.item];
    instance = &t.instance;
    explanation = &t.explanation;
    show_explanation = phase != Phase::kTrainingPre && xai_type != XaiType::kNone;
    payload["protocol_trial"] = t.trial_index;
    if (phase == Phase::kFeedback) {
      const auto answer = t.decision_xai ? t.decision_xai : t.decision_pre;
      payload["feedback"] = {{"ai_label", ToInt(t.ai_label)},
                             {"your_answer", answer ? Json(ToInt(*answer)) : Json()}};
    }
  }
  Json attributes = Json::array();
  for (size_t r = 0; r < instance->num_features(); ++r) {
    attributes.push_back({{"name", env.spec().attributes.at(r).name},
                          {"value", instance->norm_values[r]},
                          {"raw", instance->raw_values.empty() ? instance->norm_values[r]
                                                               : instance->raw_values[r]}});
  }
  payload["attributes"] = attributes;
  payload["choices"] = {env.spec().label_names.first, env.spec().label_names.second};
  if (show_explanation && explanation->has_value()) {
    const auto shown = experiment::Perceive(*explanation, xai_type);
    payload["explanation"] = {
        {"type", ToString(xai_type)},
        {"values", shown->values},
        {"raw", xai_type == XaiType::kImportance ? (*explanation)->importance
                                                 : xai::TowardLabel1(**explanation)}};
  }
  return payload;
}

std::vector<experiment::SessionRecord> StudyService::Records(const ExportFilter& filter) const {
  std::vector<const Session*> chosen;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (const auto& [token, session] : sessions_) chosen.push_back(session.get());
  }
  std::vector<experiment::SessionRecord> records;
  for (const Session* s : chosen) {
    std::lock_guard<std::mutex> lock(const_cast<Session*>(s)->mutex);
    const Phase phase = s->phase();
    const bool keep = phase == Phase::kComplete ||
                      (phase == Phase::kExcluded && filter.include_excluded) ||
                      (phase != Phase::kComplete && phase != Phase::kExcluded &&
                       filter.include_incomplete);
    if (keep) records.push_back(s->record);
  }
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return a.session_id() < b.session_id();
  });
  return records;
}

std::string StudyService::ExportSessions(const ExportFilter& filter) const {
  std::string out;
  for (const auto& record : Records(filter)) out += DumpLine(experiment::ToJson(record)) + "\n";
  return out;
}

size_t StudyService::session_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return sessions_.size();
}

int StatusFor(const std::exception& error) {
  if (dynamic_cast<const AuthError*>(&error)) return 401;
  if (dynamic_cast<const ConflictError*>(&error)) return 409;
  if (dynamic_cast<const CapacityError*>(&error)) return 503;
  if (dynamic_cast<const ValidationError*>(&error) ||
      dynamic_cast<const ContractViolation*>(&error) ||
      dynamic_cast<const SchemaError*>(&error) || dynamic_cast<const ParseError*>(&error) ||
      dynamic_cast<const ConfigError*>(&error) || dynamic_cast<const Json::exception*>(&error)) {
    return 400;
  }
  return 500;
}

}  // namespace coax::service
