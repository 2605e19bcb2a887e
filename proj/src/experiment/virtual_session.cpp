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

#include "coax/experiment/virtual_session.hpp"

#include "coax/cognitive/strategies.hpp"
#include "coax/common/error.hpp"
#include "coax/common/random.hpp"

namespace coax::experiment {

namespace {

Label Respond(const cognitive::Decision& decision, Rng& rng) {
  return Bernoulli(rng, decision.proba_label1) ? Label::kOne : Label::kTwo;
}

}  // namespace

VirtualSessionResult RunVirtualSessionDetailed(
    const cognitive::CognitiveParams& params, const data::StudySplit& split,
    const StudyEnvironment& env, XaiType xai_type, uint64_t seed,
    const ProtocolConfig& protocol) {
  if (split.training.size() != protocol.training_trials ||
      split.testing.size() != 2 * protocol.trials_per_block) {
    throw ConfigError("split sizes do not match the session protocol");
  }
  Rng rng(DeriveSeed(seed, {0x5e55}));
  VirtualSessionResult result;
  SessionRecord& record = result.record;
  record.xai_type = xai_type;
  record.dataset = data::ToString(env.spec().name);
  record.explainer = xai_type == XaiType::kNone ? "" : xai::ToString(env.config().explainer.method);

  cognitive::Memory memory;
  int trial = 0;
  for (const auto& instance : split.training) {
    TrainingTrial t;
    t.trial_index = trial;
    t.instance = instance;
    t.ai_label = env.AiLabel(instance.id);
    if (xai_type != XaiType::kNone) t.explanation = env.ExplanationFor(instance.id);
    const auto shown = Perceive(t.explanation, xai_type);
    cognitive::Stimulus bare{instance.norm_values, nullptr, trial};
    t.decision_pre = Respond(cognitive::Decide(bare, memory, params, rng), rng);
    if (shown) {
      cognitive::Stimulus with{instance.norm_values, &*shown, trial};
      t.decision_xai = Respond(cognitive::Decide(with, memory, params, rng), rng);
    }
    cognitive::EncodeTrial(memory, instance.norm_values, shown ? &*shown : nullptr,
                           t.ai_label, trial, params);
    record.training.push_back(std::move(t));
    ++trial;
  }
  result.hash_after_training = memory.Hash();

  std::array<TestCondition, 2> blocks = {TestCondition::kWithoutXai,
                                         TestCondition::kWithoutXai};
  if (xai_type != XaiType::kNone) {
    blocks = {TestCondition::kWithXai, TestCondition::kWithoutXai};
    if (protocol.shuffle_blocks && Bernoulli(rng, 0.5)) std::swap(blocks[0], blocks[1]);
  }
  for (size_t i = 0; i < split.testing.size(); ++i) {
    const auto& instance = split.testing[i];
    TestTrial t;
    t.trial_index = trial;
    t.block = static_cast<int>(i / protocol.trials_per_block);
    t.condition = blocks[static_cast<size_t>(t.block)];
    t.instance = instance;
    t.ai_label = env.AiLabel(instance.id);
    if (t.condition == TestCondition::kWithXai) t.explanation = env.ExplanationFor(instance.id);
    const auto shown = Perceive(t.explanation, xai_type);
    cognitive::Stimulus stimulus{instance.norm_values, shown ? &*shown : nullptr, trial};
    t.decision = Respond(cognitive::Decide(stimulus, memory, params, rng), rng);
    record.test.push_back(std::move(t));
    ++trial;
  }
  result.hash_after_test = memory.Hash();
  result.memory_size = memory.size();
  return result;
}

SessionRecord RunVirtualSession(const cognitive::CognitiveParams& params,
                                const data::StudySplit& split,
                                const StudyEnvironment& env, XaiType xai_type,
                                uint64_t seed, const ProtocolConfig& protocol) {
  return RunVirtualSessionDetailed(params, split, env, xai_type, seed, protocol).record;
}

}  // namespace coax::experiment
