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

#ifndef COAX_COMMON_JSONL_HPP_
#define COAX_COMMON_JSONL_HPP_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace coax {

using Json = nlohmann::json;

// Calls `fn(record, line_number)` for every non-blank line. Line numbers are
// 1-based. Malformed JSON raises ParseError with the line number.
void ForEachJsonLine(std::istream& in,
                     const std::function<void(const Json&, long)>& fn);

std::vector<Json> ReadJsonLines(const std::filesystem::path& path);
void WriteJsonLines(const std::filesystem::path& path,
                    const std::vector<Json>& records);

// Compact single-line serialization with sorted keys (nlohmann objects are
// ordered maps), so equal data always produces identical bytes.
std::string DumpLine(const Json& record);

}  // namespace coax

#endif  // COAX_COMMON_JSONL_HPP_
