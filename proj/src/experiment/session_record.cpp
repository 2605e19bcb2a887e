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

#include "coax/experiment/session_record.hpp"

#include "coax/common/error.hpp"

namespace coax::experiment {

namespace {

Json OptionalLabel(const std::optional<Label>& label) {
  return label ? Json(ToInt(*label)) : Json(nullptr);
}

std::optional<Label> ReadOptionalLabel(const Json& json, const char* key) {
  if (!json.contains(key) || json.at(key).is_null()) return std::nullopt;
  return LabelFromInt(json.at(key).get<int>());
}

Json OptionalExplanation(const std::string& id,
                         const std::optional<xai::Explanation>& e) {
  return e ? xai::ToJson(id, *e) : Json(nullptr);
}

std::optional<xai::Explanation> ReadOptionalExplanation(const Json& json) {
  if (!json.contains("explanation") || json.at("explanation").is_null()) {
    return std::nullopt;
  }
  return xai::ExplanationFromJson(json.at("explanation"));
}

void Fail(const SessionRecord& record, const std::string& what) {
  throw ValidationError("session " + record.session_id() + ": " + what);
}

}  // namespace

std::string SessionRecord::session_id() const {
  return participant_id + "/" + std::to_string(session_index);
}

Json ToJson(const SessionRecord& record) {
  Json training = Json::array();
  for (const auto& t : record.training) {
    training.push_back({{"trial_index", t.trial_index},
                        {"instance", data::ToJson(t.instance)},
                        {"explanation", OptionalExplanation(t.instance.id, t.explanation)},
                        {"ai_label", ToInt(t.ai_label)},
                        {"decision_pre", OptionalLabel(t.decision_pre)},
                        {"decision_xai", OptionalLabel(t.decision_xai)}});
  }
  Json test = Json::array();
  for (const auto& t : record.test) {
    test.push_back({{"trial_index", t.trial_index},
                    {"block", t.block},
                    {"condition", ToString(t.condition)},
                    {"instance", data::ToJson(t.instance)},
                    {"explanation", OptionalExplanation(t.instance.id, t.explanation)},
                    {"ai_label", ToInt(t.ai_label)},
                    {"decision", OptionalLabel(t.decision)}});
  }
  return Json{{"participant_id", record.participant_id},
              {"session_index", record.session_index},
              {"xai_type", ToString(record.xai_type)},
              {"dataset", record.dataset},
              {"explainer", record.explainer},
              {"excluded", record.excluded},
              {"training", training},
              {"test", test}};
}

SessionRecord SessionRecordFromJson(const Json& json) {
  SessionRecord record;
  try {
    record.participant_id = json.at("participant_id").get<std::string>();
    record.session_index = json.at("session_index").get<int>();
    record.xai_type = ParseXaiType(json.at("xai_type").get<std::string>());
    record.dataset = json.value("dataset", "");
    record.explainer = json.value("explainer", "");
    record.excluded = json.value("excluded", false);
    for (const auto& t : json.at("training")) {
      TrainingTrial trial;
      trial.trial_index = t.at("trial_index").get<int>();
      trial.instance = data::InstanceFromJson(t.at("instance"));
      trial.explanation = ReadOptionalExplanation(t);
      trial.ai_label = LabelFromInt(t.at("ai_label").get<int>());
      trial.decision_pre = ReadOptionalLabel(t, "decision_pre");
      trial.decision_xai = ReadOptionalLabel(t, "decision_xai");
      record.training.push_back(std::move(trial));
    }
    for (const auto& t : json.at("test")) {
      TestTrial trial;
      trial.trial_index = t.at("trial_index").get<int>();
      trial.block = t.at("block").get<int>();
      trial.condition = ParseTestCondition(t.at("condition").get<std::string>());
      trial.instance = data::InstanceFromJson(t.at("instance"));
      trial.explanation = ReadOptionalExplanation(t);
      trial.ai_label = LabelFromInt(t.at("ai_label").get<int>());
      trial.decision = ReadOptionalLabel(t, "decision");
      record.test.push_back(std::move(trial));
    }
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("malformed session record: ") + e.what());
  }
  return record;
}

std::vector<SessionRecord> ReadSessionRecords(const std::string& path) {
  std::vector<SessionRecord> records;
  for (const Json& json : ReadJsonLines(path)) {
    records.push_back(SessionRecordFromJson(json));
  }
  return records;
}

void WriteSessionRecords(const std::string& path,
                         const std::vector<SessionRecord>& records) {
  std::vector<Json> lines;
  lines.reserve(records.size());
  for (const auto& r : records) lines.push_back(ToJson(r));
  WriteJsonLines(path, lines);
}

void ValidateSessionRecord(const SessionRecord& record, bool strict_protocol) {
  const bool has_xai = record.xai_type != XaiType::kNone;
  int last_index = -1;
  size_t width = 0;
  auto check_instance = [&](const data::Instance& instance) {
    if (width == 0) width = instance.num_features();
    if (instance.num_features() != width || width == 0) {
      Fail(record, "inconsistent attribute count");
    }
  };
  auto check_index = [&](int index) {
    if (index <= last_index) Fail(record, "trial indices must increase");
    last_index = index;
  };
  for (const auto& t : record.training) {
    check_index(t.trial_index);
    check_instance(t.instance);
    if (t.explanation.has_value() != has_xai) {
      Fail(record, "training explanation presence does not match XAI type");
    }
    if (t.explanation && t.explanation->num_features() != width) {
      Fail(record, "explanation width differs from instance width");
    }
    if (!has_xai && t.decision_xai) {
      Fail(record, "with-XAI decision recorded for a session without XAI");
    }
  }
  int with = 0, without = 0;
  for (const auto& t : record.test) {
    check_index(t.trial_index);
    check_instance(t.instance);
    const bool with_xai = t.condition == TestCondition::kWithXai;
    if (with_xai && !has_xai) Fail(record, "with-XAI test in a session without XAI");
    if (t.explanation.has_value() != with_xai) {
      Fail(record, "test explanation presence does not match condition");
    }
    (with_xai ? with : without)++;
  }
  if (!record.training.empty() && !record.test.empty() &&
      record.test.front().trial_index < record.training.back().trial_index) {
    Fail(record, "test trials must follow training trials");
  }
  if (!strict_protocol) return;
  if (record.training.size() != kTrainingTrials) {
    Fail(record, "expected 10 training trials");
  }
  const int expected_with = has_xai ? kTrialsPerCondition : 0;
  const int expected_without = has_xai ? kTrialsPerCondition : 2 * kTrialsPerCondition;
  if (with != expected_with || without != expected_without) {
    Fail(record, "unexpected test trial counts per condition");
  }
}

std::optional<cognitive::ShownExplanation> Perceive(
    const std::optional<xai::Explanation>& explanation, XaiType xai_type) {
  if (!explanation || xai_type == XaiType::kNone) return std::nullopt;
  cognitive::ShownExplanation shown;
  shown.type = xai_type;
  shown.values = xai_type == XaiType::kImportance
                     ? xai::DisplayScale(explanation->importance)
                     : xai::DisplayScale(xai::TowardLabel1(*explanation));
  return shown;
}

std::optional<double> Correctness(const SessionRecord& record,
                                  std::optional<TestCondition> condition) {
  int answered = 0, correct = 0;
  for (const auto& t : record.test) {
    if (condition && t.condition != *condition) continue;
    if (!t.decision) continue;
    ++answered;
    if (*t.decision == t.ai_label) ++correct;
  }
  if (answered == 0) return std::nullopt;
  return static_cast<double>(correct) / answered;
}

}  // namespace coax::experiment
