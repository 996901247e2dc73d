// Copyright 2026 The TLA-Net Authors.
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

#ifndef TLA_CSV_H_
#define TLA_CSV_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tla {

struct CsvRecord {
  std::size_t line = 0;  // 1-based line on which the record starts
  std::vector<std::string> fields;
};

// RFC 4180: comma separated, double-quoted fields may hold commas, CR/LF
// and doubled quotes. Accepts LF or CRLF line ends and a missing final
// newline. A leading UTF-8 byte-order mark is skipped. Blank lines are
// dropped. Malformed quoting throws ParseError with the line number.
std::vector<CsvRecord> parse_csv(std::string_view text);

// Quotes the field only when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);
std::string csv_join(const std::vector<std::string>& fields);

}  // namespace tla

#endif  // TLA_CSV_H_
