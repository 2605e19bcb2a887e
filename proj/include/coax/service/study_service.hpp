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

#ifndef COAX_SERVICE_STUDY_SERVICE_HPP_
#define COAX_SERVICE_STUDY_SERVICE_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "coax/common/error.hpp"
#include "coax/common/jsonl.hpp"
#include "coax/common/random.hpp"
#include "coax/common/types.hpp"
#include "coax/experiment/environment.hpp"
#include "coax/experiment/session_record.hpp"

namespace coax::service {

// Unknown session token.
class AuthError : public Error {
 public:
  using Error::Error;
};

// Submission for a trial other than the current one.
class ConflictError : public Error {
 public:
  using Error::Error;
};

struct ScreeningItem {
  std::string prompt;
  std::vector<std::string> choices;
  int answer = 0;
};

// Comprehension checks shown before the first session of a participant.
std::vector<ScreeningItem> DefaultScreeningItems();

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir = "coax-data";
  std::filesystem::path static_dir;  // UI assets, not served when empty
  // Relative weights for None, Importance, Attribution.
  std::array<double, 3> assignment_weights{1.0, 4.0, 2.0};
  std::optional<XaiType> fixed_xai_type;
  std::vector<data::DatasetName> datasets{data::DatasetName::kWineQuality};
  uint64_t seed = 1;
  std::string admin_token;  // export is refused while empty
  size_t max_sessions = 1000;
  std::vector<ScreeningItem> screening = DefaultScreeningItems();
  size_t screening_min_correct = 0;  // 0 means all items
  size_t snapshot_every = 8;
  experiment::EnvironmentConfig environment;
};

// Reads a JSON config file; unset keys keep their defaults.
ServiceConfig ServiceConfigFromJson(const Json& json);
ServiceConfig LoadServiceConfig(const std::filesystem::path& path);

// Applies COAX_PORT, COAX_DATA_DIR, COAX_ASSIGNMENT_WEIGHTS ("1:4:2"),
// COAX_SEED and COAX_ADMIN_TOKEN from `lookup` (std::getenv by default).
using EnvLookup = std::function<std::optional<std::string>(const char*)>;
void ApplyEnvironmentOverrides(ServiceConfig& config, const EnvLookup& lookup = {});

// Weighted draw over None, Importance, Attribution.
XaiType DrawXaiType(const std::array<double, 3>& weights, Rng& rng);

enum class Phase {
  kScreening,
  kTrainingPre,
  kTrainingXai,
  kFeedback,
  kTest,
  kComplete,
  kExcluded
};
std::string ToString(Phase phase);

struct Submission {
  int trial_index = 0;
  std::optional<Label> label;  // training and test decisions
  std::optional<int> choice;   // screening answers
};

struct CreateRequest {
  std::optional<std::string> participant_id;
};

struct CreateResponse {
  std::string token;
  std::string session_id;
  Json assignment;
  Json payload;
};

struct ExportFilter {
  bool include_excluded = false;
  bool include_incomplete = false;
};

// Runs the human protocol over HTTP-agnostic calls. Every accepted action is
// appended to the session's event log before it changes state, and a
// snapshot is written every `snapshot_every` events; construction replays
// whatever is on disk. Operations on one session are serialized.
class StudyService {
 public:
  explicit StudyService(ServiceConfig config);
  // Shares prebuilt environments (keyed by dataset) instead of training.
  StudyService(ServiceConfig config,
               std::map<data::DatasetName, std::shared_ptr<const experiment::StudyEnvironment>>
                   environments);
  ~StudyService();

  const ServiceConfig& config() const { return config_; }

  CreateResponse CreateSession(const CreateRequest& request = {});
  // Throws AuthError on an unknown token.
  Json CurrentTrial(const std::string& token);
  // Throws ConflictError when `trial_index` is not the current step and
  // ValidationError on a malformed answer.
  Json Submit(const std::string& token, const Submission& submission);
  // One record per line, ordered by session id; identical data gives
  // identical bytes.
  std::string ExportSessions(const ExportFilter& filter = {}) const;
  std::vector<experiment::SessionRecord> Records(const ExportFilter& filter = {}) const;
  size_t session_count() const;

 private:
  struct Session;
  struct Step {
    Phase phase;
    size_t item;
  };

  void LoadFromDisk();
  std::unique_ptr<Session> BuildSession(const Json& created) const;
  void Apply(Session& session, const Json& event) const;
  void Append(Session& session, const Json& event);
  void WriteSnapshot(const Session& session) const;
  Json Payload(const Session& session) const;
  Session& Find(const std::string& token);
  const experiment::StudyEnvironment& Environment(data::DatasetName name) const;
  std::filesystem::path SessionDir() const;

  ServiceConfig config_;
  std::map<data::DatasetName, std::shared_ptr<const experiment::StudyEnvironment>>
      environments_;
  std::map<data::DatasetName, std::vector<data::StudySplit>> splits_;
  mutable std::mutex mutex_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
  std::map<std::string, int> participant_sessions_;
  size_t next_ordinal_ = 0;
  Rng token_rng_;
};

// HTTP status for a library error.
int StatusFor(const std::exception& error);

}  // namespace coax::service

#endif  // COAX_SERVICE_STUDY_SERVICE_HPP_
