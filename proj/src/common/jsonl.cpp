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

#include "coax/common/jsonl.hpp"

#include <fstream>
#include <istream>

#include "coax/common/error.hpp"

namespace coax {

void ForEachJsonLine(std::istream& in,
                     const std::function<void(const Json&, long)>& fn) {
  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(std::string("malformed JSON record: ") + e.what(),
                       line_number);
    }
    fn(record, line_number);
  }
}

std::vector<Json> ReadJsonLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open " + path.string());
  std::vector<Json> records;
  ForEachJsonLine(in, [&](const Json& record, long) { records.push_back(record); });
  return records;
}

void WriteJsonLines(const std::filesystem::path& path,
                    const std::vector<Json>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  for (const auto& record : records) out << DumpLine(record) << '\n';
}

std::string DumpLine(const Json& record) { return record.dump(); }

}  // namespace coax
