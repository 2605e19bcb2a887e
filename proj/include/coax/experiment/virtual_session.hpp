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

#ifndef COAX_EXPERIMENT_VIRTUAL_SESSION_HPP_
#define COAX_EXPERIMENT_VIRTUAL_SESSION_HPP_

#include <cstdint>
#include <string>

#include "coax/cognitive/params.hpp"
#include "coax/data/splits.hpp"
#include "coax/experiment/environment.hpp"
#include "coax/experiment/session_record.hpp"

namespace coax::experiment {

struct ProtocolConfig {
  size_t training_trials = kTrainingTrials;
  size_t trials_per_block = kTrialsPerCondition;
  // Randomize which test block comes first for sessions with XAI.
  bool shuffle_blocks = true;
};

struct VirtualSessionResult {
  SessionRecord record;
  size_t memory_size = 0;
  uint64_t hash_after_training = 0;
  uint64_t hash_after_test = 0;
};

// Replays the protocol: each training trial asks for a prediction without
// XAI, then with XAI when the session has an explanation type, then encodes
// the AI label as feedback. Test trials decide without encoding. Responses
// are drawn from the model's label probability. Throws ConfigError when the
// split does not match the protocol.
VirtualSessionResult RunVirtualSessionDetailed(
    const cognitive::CognitiveParams& params, const data::StudySplit& split,
    const StudyEnvironment& env, XaiType xai_type, uint64_t seed,
    const ProtocolConfig& protocol = {});

SessionRecord RunVirtualSession(const cognitive::CognitiveParams& params,
                                const data::StudySplit& split,
                                const StudyEnvironment& env, XaiType xai_type,
                                uint64_t seed, const ProtocolConfig& protocol = {});

}  // namespace coax::experiment

#endif  // COAX_EXPERIMENT_VIRTUAL_SESSION_HPP_
