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

#include <cstddef>
#include <string>
#include <vector>

#include "cli.hpp"
#include "entnet/parallel.hpp"

namespace entnet::cli {

/// Evaluates fn(i) for every grid index concurrently; rows come back in index order.
template <typename Fn>
std::vector<Row> compute_rows(std::size_t n, unsigned threads, Fn fn) {
  std::vector<Row> rows(n);
  parallel_for(n, threads, [&](std::size_t i) { rows[i] = fn(i); });
  return rows;
}

inline std::string fmt(double v) { return format_number(v); }
inline std::string fmt(int v) { return std::to_string(v); }
inline std::string fmt(long long v) { return std::to_string(v); }

inline std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ";" : "") + format_number(values[i]);
  return out;
}

inline std::string join(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ";" : "") + std::to_string(values[i]);
  return out;
}

}  // namespace entnet::cli
