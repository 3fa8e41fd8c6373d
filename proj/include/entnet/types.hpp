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

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace entnet {

/// Eigenvalues of the single-qubit generator h = diag(lambda0, lambda1).
///
/// Only the gap enters any Fisher information: h = -(gap/2) Z + (lambda0 + gap/2) I,
/// and the identity part cancels under conjugation by the phase unitary.
class EigenSpec {
 public:
  EigenSpec() = default;
  EigenSpec(double lambda0, double lambda1) : lambda0_(lambda0), lambda1_(lambda1) {
    if (!std::isfinite(lambda0) || !std::isfinite(lambda1)) {
      throw std::domain_error("EigenSpec: eigenvalues must be finite");
    }
    if (lambda1 - lambda0 == 0.0) {
      throw std::domain_error("EigenSpec: zero eigenvalue gap makes every Fisher information vanish");
    }
  }

  static EigenSpec from_gap(double gap) { return EigenSpec(0.0, gap); }

  [[nodiscard]] double lambda0() const noexcept { return lambda0_; }
  [[nodiscard]] double lambda1() const noexcept { return lambda1_; }
  [[nodiscard]] double delta_lambda() const noexcept { return lambda1_ - lambda0_; }
  [[nodiscard]] double gap_squared() const noexcept { return delta_lambda() * delta_lambda(); }

  friend bool operator==(const EigenSpec&, const EigenSpec&) = default;

 private:
  double lambda0_ = 0.0;
  double lambda1_ = 1.0;
};

template <typename Scalar>
[[nodiscard]] constexpr Scalar werner_param_from_fidelity(Scalar fidelity) noexcept {
  return (Scalar(4) * fidelity - Scalar(1)) / Scalar(3);
}

template <typename Scalar>
[[nodiscard]] constexpr Scalar fidelity_from_werner_param(Scalar x) noexcept {
  return (Scalar(3) * x + Scalar(1)) / Scalar(4);
}

/// Sensor-hub link in Werner form x Phi + (1-x)/4 I.
class WernerLink {
 public:
  explicit WernerLink(double fidelity) : fidelity_(fidelity), werner_param_(werner_param_from_fidelity(fidelity)) {
    if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
      throw std::domain_error("WernerLink: fidelity must lie in [0, 1], got " + std::to_string(fidelity));
    }
  }

  [[nodiscard]] double fidelity() const noexcept { return fidelity_; }
  [[nodiscard]] double werner_param() const noexcept { return werner_param_; }
  [[nodiscard]] bool distillable() const noexcept { return fidelity_ > 0.5; }

 private:
  double fidelity_;
  double werner_param_;
};

[[nodiscard]] inline WernerLink werner_from_fidelity(double fidelity) { return WernerLink(fidelity); }

/// Sizes of the disjoint GHZ groups formed at the hub out of S sensors.
///
/// Stored in canonical (non-increasing) order. Sensors are laid out group by group
/// in that order, followed by the local |+> probes.
class GhzPartition {
 public:
  GhzPartition() = default;

  GhzPartition(std::vector<int> group_sizes, int total_sensors)
      : sizes_(std::move(group_sizes)), total_sensors_(total_sensors) {
    if (total_sensors < 0) {
      throw std::domain_error("GhzPartition: negative sensor count");
    }
    for (int n : sizes_) {
      if (n < 2) {
        throw std::domain_error("GhzPartition: every GHZ group needs at least two sensors");
      }
    }
    std::sort(sizes_.begin(), sizes_.end(), std::greater<>());
    if (entangled_count() > total_sensors_) {
      throw std::domain_error("GhzPartition: groups use more sensors than the network has");
    }
  }

  static GhzPartition all_local(int total_sensors) { return GhzPartition({}, total_sensors); }

  [[nodiscard]] std::span<const int> sizes() const noexcept { return sizes_; }
  [[nodiscard]] int group_count() const noexcept { return static_cast<int>(sizes_.size()); }
  [[nodiscard]] int size(int group) const { return sizes_.at(static_cast<std::size_t>(group)); }
  [[nodiscard]] int total_sensors() const noexcept { return total_sensors_; }
  [[nodiscard]] int entangled_count() const noexcept { return std::accumulate(sizes_.begin(), sizes_.end(), 0); }
  [[nodiscard]] int local_count() const noexcept { return total_sensors_ - entangled_count(); }
  [[nodiscard]] bool empty() const noexcept { return sizes_.empty(); }

  /// Index of the first sensor of `group` (number of sensors in earlier groups).
  [[nodiscard]] int offset(int group) const {
    if (group < 0 || group > group_count()) {
      throw std::out_of_range("GhzPartition::offset: group index out of range");
    }
    return std::accumulate(sizes_.begin(), sizes_.begin() + group, 0);
  }

  [[nodiscard]] GhzPartition with_total_sensors(int total_sensors) const {
    return GhzPartition(sizes_, total_sensors);
  }

  /// "(3, 2)" style rendering; "()" for the all-local probe.
  [[nodiscard]] std::string to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
      if (i != 0) out += ", ";
      out += std::to_string(sizes_[i]);
    }
    return out + ")";
  }

  friend bool operator==(const GhzPartition&, const GhzPartition&) = default;

 private:
  std::vector<int> sizes_;
  int total_sensors_ = 0;
};

}  // namespace entnet
