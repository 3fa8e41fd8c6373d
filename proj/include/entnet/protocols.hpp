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

// Average QFI of the Immediate, fixed-block (F-TMBL) and variable-block (V-TMBL)
// entanglement distribution protocols.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entnet/types.hpp"

namespace entnet {

/// Star network: S sensors, per-slot link success probability p, link fidelity F.
struct NetworkConfig {
  int sensors = 2;
  double p = 1.0;
  double fidelity = 1.0;
  EigenSpec eig{};

  /// Throws std::domain_error unless S >= 2, p in [0, 1] and F in [0, 1].
  void validate() const;
  /// QFI of a slot sensed with local probes only: gap^2 / S.
  [[nodiscard]] double local_qfi() const;
};

enum class ProtocolKind { Immediate, FixedTMBL, VariableTMBL };
enum class DistillPolicy { None, Discard, Keep };
/// How a snapshot with m links is split into GHZ groups.
enum class PartitionPolicy { Maximal, Optimal };
enum class EstimateMethod { ClosedForm, TruncatedSeries, MonteCarlo };

/// V-TMBL averaging. TimeAverage is the long-run QFI per slot,
/// E[(T-1) F0 + F_M] / E[T]; BlockAverage is the mean per-block ratio
/// E[((T-1) F0 + F_M) / T].
enum class VtmblAveraging { TimeAverage, BlockAverage };

struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::Immediate;
  int k = 1;
  int mu = 2;
  DistillPolicy distill = DistillPolicy::None;

  static ProtocolSpec immediate() { return {}; }
  static ProtocolSpec fixed(int k, DistillPolicy distill = DistillPolicy::None) {
    return {ProtocolKind::FixedTMBL, k, 2, distill};
  }
  static ProtocolSpec variable(int mu) { return {ProtocolKind::VariableTMBL, 1, mu, DistillPolicy::None}; }

  /// Block length in slots for the fixed-length protocols (Immediate is k = 1).
  [[nodiscard]] int block_length() const noexcept { return kind == ProtocolKind::Immediate ? 1 : k; }
  /// Throws std::domain_error / std::invalid_argument for inconsistent settings.
  void validate(int sensors) const;
  [[nodiscard]] std::string to_string() const;
};

struct AvgQfiEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  EstimateMethod method = EstimateMethod::ClosedForm;
  std::optional<std::uint64_t> seed;
  /// Number of slots summed by TruncatedSeries.
  std::int64_t series_terms = 0;
};

inline constexpr double kDefaultTailTolerance = 1e-10;
inline constexpr std::int64_t kMaxSeriesSlots = 100000;

/// Binomial(S, p_eff) over m = 0..S.
[[nodiscard]] std::vector<double> snapshot_distribution(int sensors, double p_eff);

/// Snapshot QFI for m = 0..S live links of fidelity F under `policy`.
[[nodiscard]] std::vector<double> snapshot_qfi_table(const NetworkConfig& cfg, PartitionPolicy policy);

[[nodiscard]] AvgQfiEstimate immediate_avg_qfi(const NetworkConfig& cfg,
                                               PartitionPolicy policy = PartitionPolicy::Maximal);

[[nodiscard]] AvgQfiEstimate ftmbl_avg_qfi(const NetworkConfig& cfg, int k,
                                           PartitionPolicy policy = PartitionPolicy::Maximal);

/// argmax over k in [1, k_max] of (1 - (1-p)^k)^2 / k; ties go to the smaller k.
[[nodiscard]] int ftmbl_k_opt(double p, int k_max = 200);

/// Probability that V-TMBL stops at slot t with m live links.
[[nodiscard]] double vtmbl_joint_prob(int sensors, double p, int mu, int t, int m);

/// Probability that V-TMBL has not stopped after t slots.
[[nodiscard]] double vtmbl_survival(int sensors, double p, int mu, std::int64_t t);

struct VtmblOptions {
  VtmblAveraging averaging = VtmblAveraging::TimeAverage;
  PartitionPolicy policy = PartitionPolicy::Maximal;
  double tail_tolerance = kDefaultTailTolerance;
  // Monte Carlo only.
  std::int64_t trials = 1000000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

/// V-TMBL average QFI for 0 <= mu <= S (mu <= 1 reduces to Immediate).
/// TruncatedSeries throws ConvergenceError if the tail is not below tolerance by kMaxSeriesSlots.
[[nodiscard]] AvgQfiEstimate vtmbl_avg_qfi(const NetworkConfig& cfg, int mu, EstimateMethod method,
                                           const VtmblOptions& options = {});

/// argmax over mu in [2, S] of the truncated-series average; ties go to the smaller mu.
[[nodiscard]] int vtmbl_mu_opt(const NetworkConfig& cfg, const VtmblOptions& options = {});
[[nodiscard]] int vtmbl_mu_opt(int sensors, double p);

/// (S-1) p / S + 1/S, at unit gap.
[[nodiscard]] double qfi_upper_bound(int sensors, double p);

struct MonteCarloOptions {
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  /// 0 = default_thread_count().
  unsigned threads = 0;
  VtmblAveraging averaging = VtmblAveraging::TimeAverage;
};

/// Slotted simulation of whole protocol blocks. Each trial is one block (k slots
/// for the fixed protocols, the stopping time for V-TMBL). Deterministic for a
/// given (seed, trials) under any thread count.
[[nodiscard]] AvgQfiEstimate monte_carlo_avg_qfi(const NetworkConfig& cfg, const ProtocolSpec& spec,
                                                 PartitionPolicy policy, const MonteCarloOptions& options);

}  // namespace entnet
