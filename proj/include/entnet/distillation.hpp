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

// 2 -> 1 recurrence distillation of Werner links and its use inside F-TMBL blocks.

#include <functional>
#include <span>
#include <vector>

#include "entnet/protocols.hpp"

namespace entnet {

struct DistillStep {
  double success_prob = 1.0;
  double out_fidelity = 1.0;
};

/// One distillation attempt on links of fidelity F1 and F2.
[[nodiscard]] DistillStep distill_pair(double f1, double f2);

struct FidelityOutcome {
  /// 0 encodes "no link".
  double fidelity = 0.0;
  double probability = 0.0;
};

/// Discrete distribution over the fidelity of the link a sensor ends up holding.
class FidelityDistribution {
 public:
  FidelityDistribution() = default;

  /// Adds mass, merging with an existing outcome whose fidelity agrees within 1e-14.
  void add(double fidelity, double probability);

  [[nodiscard]] std::span<const FidelityOutcome> outcomes() const noexcept { return outcomes_; }
  [[nodiscard]] std::size_t size() const noexcept { return outcomes_.size(); }
  [[nodiscard]] double total() const;
  [[nodiscard]] double probability_of(double fidelity) const;
  /// Expected fidelity conditioned on holding a link.
  [[nodiscard]] double mean_link_fidelity() const;

 private:
  std::vector<FidelityOutcome> outcomes_;  // sorted by fidelity, ascending
};

/// Nested pairwise distillation of l links of fidelity F.
///
/// Each level distills floor(l/2) disjoint pairs and recurses on the successes.
/// Discard drops unpaired leftovers. Keep remembers the latest (highest-fidelity)
/// leftover and returns it if every deeper attempt fails. A single link, or
/// F <= 0.5 where distillation cannot help, is returned as is. Policy None
/// returns the raw link whenever l >= 1.
[[nodiscard]] FidelityDistribution nested_distill(double fidelity, int links, DistillPolicy policy);

/// Draws one outcome of nested_distill using `uniform` for each pair attempt.
[[nodiscard]] double simulate_nested_distill(double fidelity, int links, DistillPolicy policy,
                                             const std::function<double()>& uniform);

/// Binomial(k, p) over l = 0..k.
[[nodiscard]] std::vector<double> link_count_distribution(double p, int k);

/// Per-sensor final fidelity after k attempts followed by nested_distill.
[[nodiscard]] FidelityDistribution sensor_fidelity_distribution(double p, int k, double fidelity,
                                                                DistillPolicy policy);

/// Snapshot QFI when every sensor holding a link of fidelity > 0.5 joins one GHZ
/// group (if there are at least two) and the rest sense locally.
[[nodiscard]] double distilled_snapshot_qfi(std::span<const double> fidelities, const EigenSpec& eig = {});

enum class DistillMethod { Enumeration, MonteCarlo };

inline constexpr int kMaxEnumerationSensors = 8;
inline constexpr int kMaxEnumerationBlock = 5;

/// F-TMBL average with per-sensor distillation and a maximal GHZ measurement:
/// ((k-1) F0 + E[block snapshot QFI]) / k. Enumeration is exact and limited to
/// S <= 8, k <= 5 (SizeError otherwise).
[[nodiscard]] AvgQfiEstimate ftmbl_distilled_avg_qfi(const NetworkConfig& cfg, int k, DistillPolicy policy,
                                                     DistillMethod method, const MonteCarloOptions& mc = {});

}  // namespace entnet
