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

#ifndef COAX_DATA_SPLITS_HPP_
#define COAX_DATA_SPLITS_HPP_

#include <cstdint>
#include <vector>

#include "coax/data/instance.hpp"

namespace coax::data {

struct StudySplit {
  std::vector<Instance> training;
  std::vector<Instance> testing;
};

struct SplitOptions {
  size_t training_size = 10;
  size_t testing_size = 36;
};

// Draws one split per session. Each session samples independently, so
// training and testing never share an id within a session but sessions may
// reuse instances. When truth labels are available the sampler takes equal
// numbers of each class for both parts as far as the pool allows; leftover
// slots are filled from whichever class remains. Output is a pure function
// of (instances, sessions, seed, options).
std::vector<StudySplit> MakeSplits(const std::vector<Instance>& instances,
                                   size_t sessions, uint64_t seed,
                                   const SplitOptions& options = {});

}  // namespace coax::data

#endif  // COAX_DATA_SPLITS_HPP_
