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

#include "coax/data/instance.hpp"

#include <fstream>

#include "coax/common/error.hpp"

namespace coax::data {

Json ToJson(const Instance& instance) {
  Json record;
  record["id"] = instance.id;
  record["raw"] = instance.raw_values;
  record["norm"] = instance.norm_values;
  if (instance.truth_label) {
    record["label"] = ToInt(*instance.truth_label);
  } else {
    record["label"] = nullptr;
  }
  return record;
}

Instance InstanceFromJson(const Json& record) {
  Instance instance;
  try {
    instance.id = record.at("id").get<std::string>();
    instance.raw_values = record.at("raw").get<std::vector<double>>();
    instance.norm_values = record.at("norm").get<std::vector<double>>();
    if (record.contains("label") && !record.at("label").is_null()) {
      instance.truth_label = LabelFromInt(record.at("label").get<int>());
    }
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("bad instance record: ") + e.what());
  }
  if (instance.raw_values.size() != instance.norm_values.size()) {
    throw SchemaError("instance " + instance.id +
                      ": raw and norm lengths differ");
  }
  for (double v : instance.norm_values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError("instance " + instance.id +
                            ": normalized value outside [0,1]");
    }
  }
  return instance;
}

void WriteInstanceRecords(const std::string& path,
                          const std::vector<Instance>& instances) {
  std::vector<Json> records;
  records.reserve(instances.size());
  for (const auto& instance : instances) records.push_back(ToJson(instance));
  WriteJsonLines(path, records);
}

std::vector<Instance> ReadInstanceRecords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open " + path);
  std::vector<Instance> instances;
  ForEachJsonLine(in, [&](const Json& record, long line) {
    try {
      instances.push_back(InstanceFromJson(record));
    } catch (const Error& e) {
      throw ParseError(e.what(), line);
    }
  });
  return instances;
}

}  // namespace coax::data
