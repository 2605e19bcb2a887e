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

#include "coax/data/splits.hpp"

#include <algorithm>
#include <set>

#include "coax/common/error.hpp"
#include "coax/common/random.hpp"

namespace coax::data {

namespace {

// Pops `count` indices, half from each class pool where possible, then fills
// from whatever is left (class pools first, then unlabeled).
std::vector<size_t> TakeBalanced(std::vector<size_t>& class_one,
                                 std::vector<size_t>& class_two,
                                 std::vector<size_t>& unlabeled, size_t count) {
  std::vector<size_t> taken;
  auto take_from = [&](std::vector<size_t>& pool, size_t n) {
    n = std::min(n, pool.size());
    taken.insert(taken.end(), pool.end() - static_cast<long>(n), pool.end());
    pool.resize(pool.size() - n);
  };
  const size_t half = count / 2;
  take_from(class_one, half);
  take_from(class_two, count - half);
  if (taken.size() < count) take_from(class_one, count - taken.size());
  if (taken.size() < count) take_from(class_two, count - taken.size());
  if (taken.size() < count) take_from(unlabeled, count - taken.size());
  return taken;
}

}  // namespace

std::vector<StudySplit> MakeSplits(const std::vector<Instance>& instances,
                                   size_t sessions, uint64_t seed,
                                   const SplitOptions& options) {
  const size_t needed = options.training_size + options.testing_size;
  if (instances.size() < needed) {
    throw CapacityError("need at least " + std::to_string(needed) +
                        " instances per session, have " +
                        std::to_string(instances.size()));
  }
  std::set<std::string> ids;
  for (const auto& instance : instances) {
    if (!ids.insert(instance.id).second) {
      throw ValidationError("duplicate instance id '" + instance.id + "'");
    }
  }

  std::vector<StudySplit> splits;
  splits.reserve(sessions);
  for (size_t session = 0; session < sessions; ++session) {
    Rng rng(DeriveSeed(seed, {session}));
    std::vector<size_t> class_one, class_two, unlabeled;
    for (size_t i = 0; i < instances.size(); ++i) {
      const auto& label = instances[i].truth_label;
      if (!label) {
        unlabeled.push_back(i);
      } else if (*label == Label::kOne) {
        class_one.push_back(i);
      } else {
        class_two.push_back(i);
      }
    }
    Shuffle(class_one, rng);
    Shuffle(class_two, rng);
    Shuffle(unlabeled, rng);

    std::vector<size_t> test =
        TakeBalanced(class_one, class_two, unlabeled, options.testing_size);
    std::vector<size_t> train =
        TakeBalanced(class_one, class_two, unlabeled, options.training_size);
    Shuffle(test, rng);
    Shuffle(train, rng);

    StudySplit split;
    for (size_t i : train) split.training.push_back(instances[i]);
    for (size_t i : test) split.testing.push_back(instances[i]);
    splits.push_back(std::move(split));
  }
  return splits;
}

}  // namespace coax::data
