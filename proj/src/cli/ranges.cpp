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

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cli.hpp"

namespace entnet::cli {
namespace {

double parse_number(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty number in range");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<double> inclusive_range(double first, double step, double last) {
  if (!(step > 0.0)) throw std::invalid_argument("range step must be positive");
  if (last < first) throw std::invalid_argument("range end lies below its start");
  const double span = (last - first) / step;
  const auto count = static_cast<long long>(std::floor(span + 1e-9)) + 1;
  if (count > 10000000) throw std::invalid_argument("range has too many points");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    // Snap to 12 significant digits so 0.1 + 2 * 0.1 prints and compares as 0.3.
    out.push_back(std::stod(format_number(first + static_cast<double>(i) * step)));
  }
  return out;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::vector<double> parse_range(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty range");
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    return inclusive_range(parse_number(text.substr(0, dots)), 1.0, parse_number(text.substr(dots + 2)));
  }
  if (const auto c1 = text.find(':'); c1 != std::string_view::npos) {
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
      throw std::invalid_argument("expected start:step:end, got '" + std::string(text) + "'");
    }
    return inclusive_range(parse_number(text.substr(0, c1)), parse_number(text.substr(c1 + 1, c2 - c1 - 1)),
                   parse_number(text.substr(c2 + 1)));
  }
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    out.push_back(parse_number(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<int> parse_int_range(std::string_view text) {
  std::vector<int> out;
  for (double v : parse_range(text)) {
    if (v != std::round(v) || std::abs(v) > 1e9) {
      throw std::invalid_argument("expected integers in '" + std::string(text) + "'");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void CsvWriter::metadata(std::string_view command, const std::vector<std::pair<std::string, std::string>>& params) {
  out_ << "# entnet " << version() << " command=" << command;
  for (const auto& [key, value] : params) out_ << ' ' << key << '=' << value;
  out_ << '\n';
}

void CsvWriter::header(const Row& columns) {
  columns_ = columns.size();
  write_fields(columns);
}

void CsvWriter::row(const Row& fields) {
  if (fields.size() != columns_) throw std::logic_error("CSV row width does not match the header");
  write_fields(fields);
}

void CsvWriter::rows(const std::vector<Row>& table) {
  for (const auto& r : table) row(r);
}

void CsvWriter::write_fields(const Row& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i != 0) out_ << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n") == std::string::npos) {
      out_ << f;
      continue;
    }
    out_ << '"';
    for (char ch : f) {
      if (ch == '"') out_ << '"';
      out_ << ch;
    }
    out_ << '"';
  }
  out_ << '\n';
}

}  // namespace entnet::cli
