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

// Choice of GHZ groups for a snapshot with m live links.

#include <vector>

#include "entnet/types.hpp"

namespace entnet {

enum class SearchMethod { Exhaustive, Heuristic };

struct PartitionSearchResult {
  GhzPartition best;
  double qfi = 0.0;
  int candidates_evaluated = 0;
  SearchMethod method = SearchMethod::Exhaustive;
  /// Link indices forming each group of `best` (same order as best.sizes()).
  /// Filled only by optimal_partition_mixed.
  std::vector<std::vector<int>> link_groups;
};

inline constexpr int kMaxExhaustiveLinks = 40;
inline constexpr int kMaxMixedLinks = 10;

/// All multisets of parts >= 2 with sum <= m, empty partition included.
/// Ordered by group count, then lexicographically ascending in canonical form:
/// (), (2), (3), ..., (m), (2, 2), (3, 2), ...
[[nodiscard]] std::vector<GhzPartition> enumerate_partitions(int m);

/// Number of partitions enumerate_partitions(m) returns, by an independent recurrence.
[[nodiscard]] long long count_partitions(int m);

/// True when candidate (a, qa) is preferred over (b, qb): larger QFI beyond a 1e-12
/// relative tie band, then fewer groups, then the lexicographically larger size list.
[[nodiscard]] bool partition_preferred(const GhzPartition& a, double qa, const GhzPartition& b, double qb);

/// Exhaustive argmax of the uniform-fidelity snapshot QFI over enumerate_partitions(m).
/// Throws SizeError for m > kMaxExhaustiveLinks.
[[nodiscard]] PartitionSearchResult optimal_partition(int m, int sensors, double fidelity,
                                                      const EigenSpec& eig = {});

/// Best over the family (z x alpha, (z-1) x (g-alpha)) for z in [3, m], plus () and (2).
/// The argmax does not depend on S, so `sensors` only scales the reported QFI
/// (defaults to m).
[[nodiscard]] PartitionSearchResult heuristic_partition(int m, double fidelity, int sensors = -1,
                                                        const EigenSpec& eig = {});

/// Exhaustive search over set partitions of the links; singleton blocks sense locally.
/// Throws SizeError for more than kMaxMixedLinks links.
[[nodiscard]] PartitionSearchResult optimal_partition_mixed(const std::vector<double>& fidelities, int sensors,
                                                            const EigenSpec& eig = {});

}  // namespace entnet
