// Copyright 2026 The entnet Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

// Command-line front end: numeric ranges, CSV output and the subcommand driver.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace entnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Parses "a..b" (unit step), "a:step:b" (inclusive), "a,b,c" or a single value.
/// Throws std::invalid_argument on malformed or empty ranges.
[[nodiscard]] std::vector<double> parse_range(std::string_view text);
/// first, first + step, ... up to last inclusive, each snapped to 12 significant digits.
[[nodiscard]] std::vector<double> inclusive_range(double first, double step, double last);
/// parse_range restricted to integers.
[[nodiscard]] std::vector<int> parse_int_range(std::string_view text);

/// 12 significant digits, shortest form.
[[nodiscard]] std::string format_number(double value);

using Row = std::vector<std::string>;

/// One CSV table: a '#' metadata line, a header row, then data rows.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void metadata(std::string_view command, const std::vector<std::pair<std::string, std::string>>& params);
  void header(const Row& columns);
  void row(const Row& fields);
  void rows(const std::vector<Row>& table);

 private:
  void write_fields(const Row& fields);

  std::ostream& out_;
  std::size_t columns_ = 0;
};

struct ReproduceOptions {
  /// Monte Carlo trials per point; 0 selects the figure's default.
  std::int64_t trials = 0;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

[[nodiscard]] const std::vector<std::string>& reproduce_ids();

/// Writes the data grid behind one figure or table. Throws std::invalid_argument for an unknown id.
void reproduce(std::string_view id, const ReproduceOptions& options, std::ostream& out);

[[nodiscard]] std::string version();

/// Runs the entnet command line. CSV goes to `out` unless --out names a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entnet::cli
