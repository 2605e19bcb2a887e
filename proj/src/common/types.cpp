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

#include "coax/common/types.hpp"

#include "coax/common/error.hpp"

namespace coax {

Label LabelFromInt(int value) {
  if (value == 1) return Label::kOne;
  if (value == 2) return Label::kTwo;
  throw ValidationError("label must be 1 or 2, got " + std::to_string(value));
}

std::string_view ToString(XaiType type) {
  switch (type) {
    case XaiType::kNone:
      return "none";
    case XaiType::kImportance:
      return "importance";
    case XaiType::kAttribution:
      return "attribution";
  }
  return "none";
}

std::string_view ToString(TestCondition condition) {
  return condition == TestCondition::kWithXai ? "with_xai" : "without_xai";
}

XaiType ParseXaiType(std::string_view text) {
  if (text == "none") return XaiType::kNone;
  if (text == "importance") return XaiType::kImportance;
  if (text == "attribution") return XaiType::kAttribution;
  throw ConfigError("unknown xai type '" + std::string(text) + "'");
}

TestCondition ParseTestCondition(std::string_view text) {
  if (text == "with_xai") return TestCondition::kWithXai;
  if (text == "without_xai") return TestCondition::kWithoutXai;
  throw ConfigError("unknown test condition '" + std::string(text) + "'");
}

}  // namespace coax
