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

// Closed-form quantum Fisher information of snapshot probes built from Werner
// links and GHZ projections at the hub. All functions are pure.

#include <cassert>
#include <cmath>
#include <concepts>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "entnet/types.hpp"

namespace entnet {

/// Weights of |Gamma(n)><Gamma(n)| and Z|Gamma(n)><Gamma(n)|Z in the GHZ-diagonal
/// state left on the sensors after the hub's GHZ projection.
template <typename Scalar>
struct GhzDiagonalCoeffs {
  Scalar e00;
  Scalar e10;
};

namespace detail {

template <std::floating_point Scalar>
void check_werner_param(Scalar x) {
  // Werner states are physical for x in [-1/3, 1].
  constexpr Scalar lo = Scalar(-1) / Scalar(3);
  constexpr Scalar slack = Scalar(1e-15);
  if (!(x >= lo - slack && x <= Scalar(1) + slack)) {
    throw std::domain_error("Werner parameter outside [-1/3, 1]: " + std::to_string(static_cast<double>(x)));
  }
}

inline void check_group_size(int n) {
  if (n < 2) {
    throw std::domain_error("GHZ group size must be at least 2, got " + std::to_string(n));
  }
}

template <std::floating_point Scalar>
void check_fidelity(Scalar f) {
  if (!(f >= Scalar(0) && f <= Scalar(1))) {
    throw std::domain_error("fidelity outside [0, 1]: " + std::to_string(static_cast<double>(f)));
  }
}

}  // namespace detail

template <std::floating_point Scalar>
[[nodiscard]] GhzDiagonalCoeffs<Scalar> ghz_coeffs_equal(Scalar x, int n) {
  detail::check_group_size(n);
  detail::check_werner_param(x);
  const Scalar xn = std::pow(x, n);
  const Scalar mixed = (std::pow(Scalar(1) + x, n) + std::pow(Scalar(1) - x, n)) / std::pow(Scalar(2), n);
  return {Scalar(0.5) * (xn + mixed), Scalar(0.5) * (-xn + mixed)};
}

/// Coefficients for unequal Werner parameters, from
///   e00 - e10 = prod x_s,   e00 + e10 = prod (1+x_s)/2 + prod (1-x_s)/2.
template <std::floating_point Scalar>
[[nodiscard]] GhzDiagonalCoeffs<Scalar> ghz_coeffs_mixed(std::span<const Scalar> xs, int n) {
  detail::check_group_size(n);
  if (xs.size() != static_cast<std::size_t>(n)) {
    throw std::domain_error("ghz_coeffs_mixed: expected " + std::to_string(n) + " Werner parameters, got " +
                            std::to_string(xs.size()));
  }
  Scalar diff = 1, plus = 1, minus = 1;
  for (Scalar x : xs) {
    detail::check_werner_param(x);
    diff *= x;
    plus *= (Scalar(1) + x) / Scalar(2);
    minus *= (Scalar(1) - x) / Scalar(2);
  }
  const Scalar sum = plus + minus;
  return {Scalar(0.5) * (sum + diff), Scalar(0.5) * (sum - diff)};
}

template <std::floating_point Scalar>
[[nodiscard]] GhzDiagonalCoeffs<Scalar> ghz_coeffs_mixed(const std::vector<Scalar>& xs, int n) {
  return ghz_coeffs_mixed(std::span<const Scalar>(xs), n);
}

template <std::floating_point Scalar>
[[nodiscard]] Scalar coefficient_C(const GhzDiagonalCoeffs<Scalar>& e) {
  const Scalar diff = e.e00 - e.e10;
  const Scalar sum = e.e00 + e.e10;
  // sum >= prod (1+x_s)/2 >= 3^-n for any physical Werner input.
  assert(sum > Scalar(0));
  return diff * diff / sum;
}

/// C(x, n) = (e00 - e10)^2 / (e00 + e10) for per-link Werner parameters `xs`.
template <std::floating_point Scalar>
[[nodiscard]] Scalar coefficient_C(std::span<const Scalar> xs, int n) {
  return coefficient_C(ghz_coeffs_mixed(xs, n));
}

template <std::floating_point Scalar>
[[nodiscard]] Scalar coefficient_C(const std::vector<Scalar>& xs, int n) {
  return coefficient_C(std::span<const Scalar>(xs), n);
}

/// Uniform-x form 2^n x^{2n} / ((1-x)^n + (1+x)^n).
template <std::floating_point Scalar>
[[nodiscard]] Scalar coefficient_C_equal(Scalar x, int n) {
  detail::check_group_size(n);
  detail::check_werner_param(x);
  return std::pow(Scalar(2), n) * std::pow(x, 2 * n) / (std::pow(Scalar(1) - x, n) + std::pow(Scalar(1) + x, n));
}

/// Net change in S^2 F_theta / gap^2 from turning n local probes into one GHZ group.
template <std::floating_point Scalar>
[[nodiscard]] constexpr Scalar group_gain(Scalar c, int n) noexcept {
  return c * Scalar(n) * Scalar(n) - Scalar(n);
}

/// QFI of theta for pure GHZ groups plus local |+> probes:
///   gap^2 / S^2 (S + sum_nu (n_nu^2 - n_nu)).
template <std::floating_point Scalar = double>
[[nodiscard]] Scalar snapshot_qfi_pure(const GhzPartition& partition, const EigenSpec& eig = {}) {
  const int s = partition.total_sensors();
  if (s <= 0) {
    throw std::domain_error("snapshot_qfi_pure: network needs at least one sensor");
  }
  Scalar total = Scalar(s);
  for (int n : partition.sizes()) total += group_gain(Scalar(1), n);
  return Scalar(eig.gap_squared()) * total / (Scalar(s) * Scalar(s));
}

/// QFI of theta when group nu is projected from links with fidelities
/// `fidelities_per_group[nu]` (one entry per sensor of the group, canonical group order).
template <std::floating_point Scalar>
[[nodiscard]] Scalar snapshot_qfi_werner(const GhzPartition& partition,
                                         const std::vector<std::vector<Scalar>>& fidelities_per_group,
                                         const EigenSpec& eig = {}) {
  const int s = partition.total_sensors();
  if (s <= 0) {
    throw std::domain_error("snapshot_qfi_werner: network needs at least one sensor");
  }
  if (fidelities_per_group.size() != static_cast<std::size_t>(partition.group_count())) {
    throw std::domain_error("snapshot_qfi_werner: one fidelity list per GHZ group required");
  }
  Scalar total = Scalar(s);
  std::vector<Scalar> xs;
  for (int g = 0; g < partition.group_count(); ++g) {
    const auto& fids = fidelities_per_group[static_cast<std::size_t>(g)];
    const int n = partition.size(g);
    if (fids.size() != static_cast<std::size_t>(n)) {
      throw std::domain_error("snapshot_qfi_werner: group " + std::to_string(g) + " has size " + std::to_string(n) +
                              " but " + std::to_string(fids.size()) + " fidelities");
    }
    xs.clear();
    for (Scalar f : fids) {
      detail::check_fidelity(f);
      xs.push_back(werner_param_from_fidelity(f));
    }
    total += group_gain(coefficient_C(std::span<const Scalar>(xs), n), n);
  }
  return Scalar(eig.gap_squared()) * total / (Scalar(s) * Scalar(s));
}

/// Uniform-fidelity snapshot QFI.
template <std::floating_point Scalar>
[[nodiscard]] Scalar snapshot_qfi_werner(const GhzPartition& partition, Scalar fidelity, const EigenSpec& eig = {}) {
  detail::check_fidelity(fidelity);
  const int s = partition.total_sensors();
  if (s <= 0) {
    throw std::domain_error("snapshot_qfi_werner: network needs at least one sensor");
  }
  const Scalar x = werner_param_from_fidelity(fidelity);
  Scalar total = Scalar(s);
  for (int n : partition.sizes()) {
    const auto e = ghz_coeffs_equal(x, n);
    total += group_gain(coefficient_C(e), n);
  }
  return Scalar(eig.gap_squared()) * total / (Scalar(s) * Scalar(s));
}

}  // namespace entnet
