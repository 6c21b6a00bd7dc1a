// Copyright 2026 The xspec-eval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Internal text helpers shared by the CSV readers/writers and the CLI.
// Not installed; include only from src/ and tests/.

#ifndef XSPEC_TEXT_UTIL_HPP
#define XSPEC_TEXT_UTIL_HPP

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "xspec/errors.hpp"

namespace xspec::detail {

/// Shortest decimal string that round-trips back to exactly `v`.
/// Infinities print as "inf"/"-inf"; NaN as "nan".
inline std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Strict double parse: the whole field must be consumed, no leading
/// whitespace. Throws ParseError mentioning `context` on failure.
inline double parse_double(std::string_view field, const std::string& context) {
  double out = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), out);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ParseError("invalid number '" + std::string(field) + "' " + context);
  }
  return out;
}

/// Splits one CSV line on ','. No quoting support; identifiers in the
/// toolkit's files never contain commas.
inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

/// Strips one trailing '\r' so CRLF files parse like LF files.
inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace xspec::detail

#endif  // XSPEC_TEXT_UTIL_HPP
