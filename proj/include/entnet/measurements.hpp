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

// Local |+>/|-> measurements on snapshot probes, and the SLD-eigenbasis POVM.

#include <cmath>
#include <complex>
#include <concepts>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "entnet/oracle.hpp"
#include "entnet/qfi_core.hpp"
#include "entnet/types.hpp"

namespace entnet {

template <std::floating_point Scalar>
struct LocalCfiInput {
  GhzPartition partition;
  /// Werner parameters of the links of each group, canonical group order.
  std::vector<std::vector<Scalar>> werner_params_per_group;
  PhaseVector<Scalar> phis;
  EigenSpec eig{};
};

namespace detail {

template <std::floating_point Scalar>
Scalar squared_product(const std::vector<Scalar>& xs) {
  Scalar x2 = 1;
  for (Scalar x : xs) x2 *= x * x;
  return x2;
}

inline void check_params_shape(const GhzPartition& partition, std::size_t groups) {
  if (groups != static_cast<std::size_t>(partition.group_count())) {
    throw std::domain_error("one Werner parameter list per GHZ group required");
  }
}

}  // namespace detail

/// Classical Fisher information of theta when every sensor measures in the |+>, |-> basis:
///   gap^2/S^2 (u + sum_nu n_nu^2 X sin^2(psi) / (1 - X cos^2(psi))),
/// X = prod_{s in nu} x_s^2, psi = gap * (sum of the group's phases).
template <std::floating_point Scalar>
[[nodiscard]] Scalar local_cfi(const LocalCfiInput<Scalar>& in) {
  const GhzPartition& part = in.partition;
  const int s = part.total_sensors();
  if (in.phis.size() != s) throw std::domain_error("local_cfi: phase vector length must equal S");
  detail::check_params_shape(part, in.werner_params_per_group.size());
  const Scalar gap = Scalar(in.eig.delta_lambda());
  Scalar total = Scalar(part.local_count());
  for (int g = 0; g < part.group_count(); ++g) {
    const auto& xs = in.werner_params_per_group[static_cast<std::size_t>(g)];
    const int n = part.size(g);
    if (xs.size() != static_cast<std::size_t>(n)) throw std::domain_error("local_cfi: group parameter count mismatch");
    for (Scalar x : xs) detail::check_werner_param(x);
    const Scalar big_x = detail::squared_product(xs);
    if (big_x == Scalar(1)) {
      // Pure group: the phase dependence cancels.
      total += Scalar(n) * Scalar(n);
      continue;
    }
    Scalar sum = 0;
    for (int q = part.offset(g); q < part.offset(g) + n; ++q) sum += in.phis[q];
    const Scalar psi = gap * sum;
    const Scalar sn = std::sin(psi), cs = std::cos(psi);
    total += Scalar(n) * Scalar(n) * big_x * sn * sn / (Scalar(1) - big_x * cs * cs);
  }
  return gap * gap * total / (Scalar(s) * Scalar(s));
}

/// local_cfi at phases with sin^2(psi) = 1 in every group: gap^2/S^2 (u + sum_nu X n_nu^2).
template <std::floating_point Scalar>
[[nodiscard]] Scalar local_cfi_max(const GhzPartition& partition,
                                   const std::vector<std::vector<Scalar>>& werner_params_per_group,
                                   const EigenSpec& eig = {}) {
  detail::check_params_shape(partition, werner_params_per_group.size());
  const int s = partition.total_sensors();
  Scalar total = Scalar(partition.local_count());
  for (int g = 0; g < partition.group_count(); ++g) {
    const auto& xs = werner_params_per_group[static_cast<std::size_t>(g)];
    const int n = partition.size(g);
    if (xs.size() != static_cast<std::size_t>(n)) {
      throw std::domain_error("local_cfi_max: group parameter count mismatch");
    }
    for (Scalar x : xs) detail::check_werner_param(x);
    total += detail::squared_product(xs) * Scalar(n) * Scalar(n);
  }
  return Scalar(eig.gap_squared()) * total / (Scalar(s) * Scalar(s));
}

/// Fidelity at which the best local-measurement CFI of one n-group equals n local
/// probes: x^{2n} n^2 = n, so x = n^{-1/(2n)}.
[[nodiscard]] inline double cfi_threshold(int n) {
  if (n < 2) throw std::domain_error("cfi_threshold: n must be at least 2, got " + std::to_string(n));
  const double x = std::pow(static_cast<double>(n), -1.0 / (2.0 * n));
  return fidelity_from_werner_param(x);
}

/// ((1 + (-1)^d i)/2) |0...0> + ((1 - (-1)^d i)/2) |1...1>
template <std::floating_point Scalar>
[[nodiscard]] CVector<Scalar> sld_eigenvector(int n, int d) {
  const std::complex<Scalar> sign(0, d == 0 ? Scalar(1) : Scalar(-1));
  CVector<Scalar> v = CVector<Scalar>::Zero(Eigen::Index{1} << n);
  v(0) = (Scalar(1) + sign) / Scalar(2);
  v(v.size() - 1) = (Scalar(1) - sign) / Scalar(2);
  return v;
}

/// POVM built from the SLD eigenbasis: for every GHZ group the projectors onto
/// |c(n,0)>, |c(n,1)> and the complement of span{|0..0>, |1..1>}; for every local
/// sensor |c(1,0)>, |c(1,1)>. Elements are tensor products over groups and locals,
/// rotated by U(phi).
template <std::floating_point Scalar>
[[nodiscard]] std::vector<CMatrix<Scalar>> sld_povm(const GhzPartition& partition, const PhaseVector<Scalar>& phis,
                                                    const EigenSpec& eig = {}) {
  const int s = partition.total_sensors();
  detail::check_qubit_cap(s);
  if (phis.size() != s) throw std::domain_error("sld_povm: phase vector length must equal S");

  std::vector<std::vector<CMatrix<Scalar>>> factors;
  for (int n : partition.sizes()) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    const CVector<Scalar> c0 = sld_eigenvector<Scalar>(n, 0);
    const CVector<Scalar> c1 = sld_eigenvector<Scalar>(n, 1);
    CMatrix<Scalar> rest = CMatrix<Scalar>::Identity(dim, dim);
    rest(0, 0) = 0;
    rest(dim - 1, dim - 1) = 0;
    factors.push_back({c0 * c0.adjoint(), c1 * c1.adjoint(), rest});
  }
  for (int i = 0; i < partition.local_count(); ++i) {
    const CVector<Scalar> c0 = sld_eigenvector<Scalar>(1, 0);
    const CVector<Scalar> c1 = sld_eigenvector<Scalar>(1, 1);
    factors.push_back({c0 * c0.adjoint(), c1 * c1.adjoint()});
  }

  std::vector<CMatrix<Scalar>> povm{CMatrix<Scalar>::Identity(1, 1)};
  for (const auto& options : factors) {
    std::vector<CMatrix<Scalar>> next;
    next.reserve(povm.size() * options.size());
    for (const auto& acc : povm) {
      for (const auto& f : options) next.push_back(Eigen::kroneckerProduct(acc, f).eval());
    }
    povm = std::move(next);
  }

  const CVector<Scalar> u = detail::phase_diagonal(s, phis, eig);
  for (auto& el : povm) el = (u.asDiagonal() * el * u.conjugate().asDiagonal()).eval();
  return povm;
}

}  // namespace entnet
