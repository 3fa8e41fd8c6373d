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

#include "entnet/partition_opt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "entnet/errors.hpp"
#include "entnet/qfi_core.hpp"

namespace entnet {
namespace {

void check_links(int m, int sensors) {
  if (m < 0) throw std::domain_error("link count must be non-negative");
  if (m > sensors) {
    throw std::domain_error("link count " + std::to_string(m) + " exceeds sensor count " + std::to_string(sensors));
  }
}

// Non-increasing parts >= 2 with exactly `groups` parts, each <= max_part, sum <= budget.
void partitions_with_groups(int groups, int max_part, int budget, std::vector<int>& prefix,
                            std::vector<std::vector<int>>& out) {
  if (groups == 0) {
    out.push_back(prefix);
    return;
  }
  for (int part = 2; part <= std::min(max_part, budget - 2 * (groups - 1)); ++part) {
    prefix.push_back(part);
    partitions_with_groups(groups - 1, part, budget - part, prefix, out);
    prefix.pop_back();
  }
}

// Per-size gain C(x, n) n^2 - n for uniform fidelity; index n.
std::vector<double> uniform_gains(int m, double fidelity) {
  detail::check_fidelity(fidelity);
  const double x = werner_param_from_fidelity(fidelity);
  std::vector<double> gains(static_cast<std::size_t>(std::max(m, 1)) + 1, 0.0);
  for (int n = 2; n <= m; ++n) gains[n] = group_gain(coefficient_C(ghz_coeffs_equal(x, n)), n);
  return gains;
}

double qfi_from_gains(std::span<const int> sizes, const std::vector<double>& gains, int sensors, const EigenSpec& eig) {
  double total = sensors;
  for (int n : sizes) total += gains[n];
  return eig.gap_squared() * total / (static_cast<double>(sensors) * sensors);
}

}  // namespace

std::vector<GhzPartition> enumerate_partitions(int m) {
  if (m < 0) throw std::domain_error("enumerate_partitions: m must be non-negative");
  std::vector<GhzPartition> out;
  std::vector<int> prefix;
  for (int groups = 0; 2 * groups <= m; ++groups) {
    std::vector<std::vector<int>> level;
    partitions_with_groups(groups, m, m, prefix, level);
    // The generator emits non-increasing lists in ascending lexicographic order already.
    for (auto& sizes : level) out.emplace_back(std::move(sizes), m);
  }
  return out;
}

long long count_partitions(int m) {
  if (m < 0) return 0;
  // q[j] = partitions of exactly j into parts >= 2 (coin-change recurrence).
  std::vector<long long> q(static_cast<std::size_t>(m) + 1, 0);
  q[0] = 1;
  for (int part = 2; part <= m; ++part) {
    for (int j = part; j <= m; ++j) q[j] += q[j - part];
  }
  long long total = 0;
  for (long long v : q) total += v;
  return total;
}

bool partition_preferred(const GhzPartition& a, double qa, const GhzPartition& b, double qb) {
  const double scale = std::max(std::abs(qa), std::abs(qb));
  if (std::abs(qa - qb) > 1e-12 * scale) return qa > qb;
  if (a.group_count() != b.group_count()) return a.group_count() < b.group_count();
  return std::lexicographical_compare(b.sizes().begin(), b.sizes().end(), a.sizes().begin(), a.sizes().end());
}

PartitionSearchResult optimal_partition(int m, int sensors, double fidelity, const EigenSpec& eig) {
  check_links(m, sensors);
  if (m > kMaxExhaustiveLinks) {
    throw SizeError("optimal_partition: exhaustive search is capped at m = " + std::to_string(kMaxExhaustiveLinks) +
                    "; use heuristic_partition");
  }
  const std::vector<double> gains = uniform_gains(m, fidelity);
  PartitionSearchResult result;
  result.method = SearchMethod::Exhaustive;
  bool first = true;
  for (const GhzPartition& cand : enumerate_partitions(m)) {
    const double q = qfi_from_gains(cand.sizes(), gains, sensors, eig);
    ++result.candidates_evaluated;
    if (first || partition_preferred(cand, q, result.best, result.qfi)) {
      result.best = cand;
      result.qfi = q;
      first = false;
    }
  }
  result.best = result.best.with_total_sensors(sensors);
  result.qfi = snapshot_qfi_werner(result.best, fidelity, eig);
  return result;
}

PartitionSearchResult heuristic_partition(int m, double fidelity, int sensors, const EigenSpec& eig) {
  if (sensors < 0) sensors = std::max(m, 1);
  check_links(m, sensors);
  const std::vector<double> gains = uniform_gains(m, fidelity);

  std::vector<std::vector<int>> family{{}};
  if (m >= 2) family.push_back({2});
  for (int z = 3; z <= m; ++z) {
    for (int g = 1; g * (z - 1) + 1 <= m; ++g) {
      for (int alpha = 1; alpha <= g; ++alpha) {
        if (alpha * z + (g - alpha) * (z - 1) > m) break;
        std::vector<int> sizes(static_cast<std::size_t>(alpha), z);
        sizes.insert(sizes.end(), static_cast<std::size_t>(g - alpha), z - 1);
        family.push_back(std::move(sizes));
      }
    }
  }

  PartitionSearchResult result;
  result.method = SearchMethod::Heuristic;
  bool first = true;
  for (auto& sizes : family) {
    GhzPartition cand(std::move(sizes), m);
    const double q = qfi_from_gains(cand.sizes(), gains, sensors, eig);
    ++result.candidates_evaluated;
    if (first || partition_preferred(cand, q, result.best, result.qfi)) {
      result.best = cand;
      result.qfi = q;
      first = false;
    }
  }
  result.best = result.best.with_total_sensors(sensors);
  result.qfi = snapshot_qfi_werner(result.best, fidelity, eig);
  return result;
}

PartitionSearchResult optimal_partition_mixed(const std::vector<double>& fidelities, int sensors,
                                              const EigenSpec& eig) {
  const int m = static_cast<int>(fidelities.size());
  check_links(m, sensors);
  if (m > kMaxMixedLinks) {
    throw SizeError("optimal_partition_mixed: set-partition search is capped at " + std::to_string(kMaxMixedLinks) +
                    " links; use Monte Carlo or the uniform heuristic");
  }
  std::vector<double> xs;
  xs.reserve(fidelities.size());
  for (double f : fidelities) {
    detail::check_fidelity(f);
    xs.push_back(werner_param_from_fidelity(f));
  }

  PartitionSearchResult result;
  result.method = SearchMethod::Exhaustive;
  bool first = true;

  // Restricted growth strings: block[i] <= 1 + max(block[0..i-1]).
  std::vector<int> block(static_cast<std::size_t>(m), 0);
  std::vector<std::vector<int>> members;
  std::vector<double> group_xs;
  std::function<void(int, int)> visit = [&](int i, int used) {
    if (i < m) {
      for (int b = 0; b <= used; ++b) {
        block[i] = b;
        visit(i + 1, std::max(used, b + 1));
      }
      return;
    }
    members.assign(static_cast<std::size_t>(used), {});
    for (int j = 0; j < m; ++j) members[block[j]].push_back(j);
    std::vector<std::vector<int>> groups;
    for (auto& mem : members) {
      if (mem.size() >= 2) groups.push_back(mem);
    }
    std::stable_sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
    double total = sensors;
    std::vector<int> sizes;
    for (const auto& grp : groups) {
      group_xs.clear();
      for (int j : grp) group_xs.push_back(xs[j]);
      const int n = static_cast<int>(grp.size());
      total += group_gain(coefficient_C(std::span<const double>(group_xs), n), n);
      sizes.push_back(n);
    }
    const double q = eig.gap_squared() * total / (static_cast<double>(sensors) * sensors);
    GhzPartition cand(std::move(sizes), sensors);
    ++result.candidates_evaluated;
    if (first || partition_preferred(cand, q, result.best, result.qfi)) {
      result.best = std::move(cand);
      result.qfi = q;
      result.link_groups = std::move(groups);
      first = false;
    }
  };
  visit(0, 0);
  return result;
}

}  // namespace entnet
