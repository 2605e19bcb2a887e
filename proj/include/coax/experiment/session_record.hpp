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

#ifndef COAX_EXPERIMENT_SESSION_RECORD_HPP_
#define COAX_EXPERIMENT_SESSION_RECORD_HPP_

#include <optional>
#include <string>
#include <vector>

#include "coax/cognitive/strategies.hpp"
#include "coax/common/jsonl.hpp"
#include "coax/common/types.hpp"
#include "coax/data/instance.hpp"
#include "coax/xai/explanation.hpp"

namespace coax::experiment {

inline constexpr int kTrainingTrials = 10;
inline constexpr int kTrialsPerCondition = 18;

// Feedback trial: predict without XAI, then with XAI (when the session has
// an explanation type), then see the AI label.
struct TrainingTrial {
  int trial_index = 0;
  data::Instance instance;
  std::optional<xai::Explanation> explanation;
  Label ai_label = Label::kOne;
  std::optional<Label> decision_pre;
  std::optional<Label> decision_xai;
  bool operator==(const TrainingTrial&) const = default;
};

// Scored trial without feedback. `ai_label` is kept for correctness only and
// never shown to the participant.
struct TestTrial {
  int trial_index = 0;
  int block = 0;
  TestCondition condition = TestCondition::kWithoutXai;
  data::Instance instance;
  std::optional<xai::Explanation> explanation;
  Label ai_label = Label::kOne;
  std::optional<Label> decision;
  bool operator==(const TestTrial&) const = default;
};

struct SessionRecord {
  std::string participant_id;
  int session_index = 0;
  XaiType xai_type = XaiType::kNone;
  std::string dataset;
  std::string explainer;
  bool excluded = false;
  std::vector<TrainingTrial> training;
  std::vector<TestTrial> test;

  // "<participant>/<session>"
  std::string session_id() const;
  bool operator==(const SessionRecord&) const = default;
};

Json ToJson(const SessionRecord& record);
SessionRecord SessionRecordFromJson(const Json& json);
std::vector<SessionRecord> ReadSessionRecords(const std::string& path);
void WriteSessionRecords(const std::string& path,
                         const std::vector<SessionRecord>& records);

// Structural checks shared by simulated and human sessions: ordered trial
// indices, explanation presence matching the XAI type and condition, and
// labels on every answered trial. `strict_protocol` additionally requires
// 10 training trials and 18 test trials per condition.
void ValidateSessionRecord(const SessionRecord& record, bool strict_protocol);

// Display-scaled view of an explanation under an XAI type. kNone and a
// missing explanation yield nullopt.
std::optional<cognitive::ShownExplanation> Perceive(
    const std::optional<xai::Explanation>& explanation, XaiType xai_type);

// Fraction of answered test trials whose decision equals the AI label,
// optionally restricted to one condition. Returns nullopt with no answers.
std::optional<double> Correctness(const SessionRecord& record,
                                  std::optional<TestCondition> condition = {});

}  // namespace coax::experiment

#endif  // COAX_EXPERIMENT_SESSION_RECORD_HPP_
