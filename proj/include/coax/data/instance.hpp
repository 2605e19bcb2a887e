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

#ifndef COAX_DATA_INSTANCE_HPP_
#define COAX_DATA_INSTANCE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "coax/common/jsonl.hpp"
#include "coax/common/types.hpp"

namespace coax::data {

// One tabular example. `norm_values` are min-max scaled to [0,1] with the
// dataset-level ranges and are what models, explainers and the cognitive
// model consume; `raw_values` keep the original units for display.
struct Instance {
  std::string id;
  std::vector<double> raw_values;
  std::vector<double> norm_values;
  std::optional<Label> truth_label;

  size_t num_features() const { return norm_values.size(); }
  friend bool operator==(const Instance&, const Instance&) = default;
};

// Canonical line-delimited record: {"id", "raw", "norm", "label"}.
Json ToJson(const Instance& instance);
Instance InstanceFromJson(const Json& record);

void WriteInstanceRecords(const std::string& path,
                          const std::vector<Instance>& instances);
std::vector<Instance> ReadInstanceRecords(const std::string& path);

}  // namespace coax::data

#endif  // COAX_DATA_INSTANCE_HPP_
