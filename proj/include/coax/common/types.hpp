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

#ifndef COAX_COMMON_TYPES_HPP_
#define COAX_COMMON_TYPES_HPP_

#include <string>
#include <string_view>

namespace coax {

// Binary class label as shown to participants ("Label 1" / "Label 2").
enum class Label : int { kOne = 1, kTwo = 2 };

inline int ToInt(Label label) { return static_cast<int>(label); }
Label LabelFromInt(int value);
inline Label Opposite(Label label) {
  return label == Label::kOne ? Label::kTwo : Label::kOne;
}

// Which explanation a participant sees during a session.
enum class XaiType { kNone, kImportance, kAttribution };

// Whether a test block shows the explanation.
enum class TestCondition { kWithXai, kWithoutXai };

std::string_view ToString(XaiType type);
std::string_view ToString(TestCondition condition);
XaiType ParseXaiType(std::string_view text);
TestCondition ParseTestCondition(std::string_view text);

}  // namespace coax

#endif  // COAX_COMMON_TYPES_HPP_
