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

// Dense density-matrix engine used as ground truth for the closed forms.
// Qubit j of an n-qubit state is bit (n-1-j) of the basis index, so Kronecker
// products place earlier factors on lower-numbered qubits.

#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "entnet/errors.hpp"
#include "entnet/types.hpp"

namespace entnet {

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatrixd = CMatrix<double>;
using CVectord = CVector<double>;
using RMatrixd = RMatrix<double>;

inline constexpr int kMaxOracleQubits = 12;

namespace detail {

inline int qubits_for_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw std::domain_error("dense state dimension " + std::to_string(dim) + " is not a power of two");
  }
  return n;
}

inline void check_qubit_cap(int n) {
  if (n > kMaxOracleQubits) {
    throw SizeError("dense oracle is capped at " + std::to_string(kMaxOracleQubits) + " qubits, requested " +
                    std::to_string(n));
  }
}

/// Value of qubit `q` (0 or 1) in basis state `index` of an n-qubit register.
inline int bit_of(Eigen::Index index, int q, int n) { return static_cast<int>((index >> (n - 1 - q)) & 1); }

}  // namespace detail

/// Density matrix on 2^n dimensions: Hermitian, unit trace, positive semidefinite.
template <std::floating_point Scalar>
class DenseState {
 public:
  using Matrix = CMatrix<Scalar>;

  explicit DenseState(Matrix rho, Scalar tol = Scalar(1e-12)) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols()) {
      throw std::domain_error("DenseState: matrix must be square");
    }
    qubits_ = detail::qubits_for_dim(rho_.rows());
    detail::check_qubit_cap(qubits_);
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) {
      throw std::domain_error("DenseState: matrix is not Hermitian");
    }
    const Scalar tr = rho_.trace().real();
    if (std::abs(tr - Scalar(1)) > tol) {
      throw std::domain_error("DenseState: trace is " + std::to_string(static_cast<double>(tr)) + ", expected 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tol) {
      throw std::domain_error("DenseState: matrix has a negative eigenvalue");
    }
  }

  static DenseState pure(const CVector<Scalar>& psi) {
    const CVector<Scalar> v = psi / psi.norm();
    return DenseState(v * v.adjoint());
  }

  [[nodiscard]] const Matrix& matrix() const noexcept { return rho_; }
  [[nodiscard]] int qubits() const noexcept { return qubits_; }
  [[nodiscard]] Eigen::Index dim() const noexcept { return rho_.rows(); }

  /// <psi| rho |psi>
  [[nodiscard]] Scalar expectation(const CVector<Scalar>& psi) const { return (psi.adjoint() * rho_ * psi)(0, 0).real(); }

 private:
  Matrix rho_;
  int qubits_ = 0;
};

using DenseStated = DenseState<double>;

/// Local phases phi_1..phi_S imprinted on the sensors; theta is their mean.
template <std::floating_point Scalar>
class PhaseVector {
 public:
  PhaseVector() = default;
  explicit PhaseVector(std::vector<Scalar> phis) : phis_(std::move(phis)) {
    for (Scalar p : phis_) {
      if (!std::isfinite(p)) throw std::domain_error("PhaseVector: non-finite phase");
    }
  }
  static PhaseVector zeros(int sensors) { return PhaseVector(std::vector<Scalar>(static_cast<std::size_t>(sensors))); }

  [[nodiscard]] int size() const noexcept { return static_cast<int>(phis_.size()); }
  [[nodiscard]] Scalar operator[](int i) const { return phis_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] std::span<const Scalar> values() const noexcept { return phis_; }

  [[nodiscard]] Scalar theta() const {
    if (phis_.empty()) throw std::domain_error("PhaseVector::theta: no phases");
    Scalar sum = 0;
    for (Scalar p : phis_) sum += p;
    return sum / Scalar(phis_.size());
  }

  /// Every phase moved by `delta`.
  [[nodiscard]] PhaseVector shifted(Scalar delta) const {
    std::vector<Scalar> out = phis_;
    for (Scalar& p : out) p += delta;
    return PhaseVector(std::move(out));
  }

 private:
  std::vector<Scalar> phis_;
};

using PhaseVectord = PhaseVector<double>;

template <std::floating_point Scalar>
[[nodiscard]] CMatrix<Scalar> bell_projector() {
  CMatrix<Scalar> phi = CMatrix<Scalar>::Zero(4, 4);
  phi(0, 0) = phi(0, 3) = phi(3, 0) = phi(3, 3) = Scalar(0.5);
  return phi;
}

/// Two-qubit Werner state x Phi + (1-x)/4 I on (sensor, hub).
template <std::floating_point Scalar>
[[nodiscard]] DenseState<Scalar> build_werner(Scalar x) {
  if (!(x >= Scalar(-1) / Scalar(3) - Scalar(1e-15) && x <= Scalar(1) + Scalar(1e-15))) {
    throw std::domain_error("build_werner: Werner parameter outside [-1/3, 1]");
  }
  CMatrix<Scalar> rho = x * bell_projector<Scalar>() + (Scalar(1) - x) / Scalar(4) * CMatrix<Scalar>::Identity(4, 4);
  return DenseState<Scalar>(std::move(rho));
}

template <std::floating_point Scalar>
[[nodiscard]] DenseState<Scalar> plus_state() {
  CMatrix<Scalar> rho = CMatrix<Scalar>::Constant(2, 2, Scalar(0.5));
  return DenseState<Scalar>(std::move(rho));
}

/// |Gamma(n)> = (|0...0> + |1...1>)/sqrt(2) as a vector.
template <std::floating_point Scalar>
[[nodiscard]] CVector<Scalar> ghz_vector(int n) {
  detail::check_qubit_cap(n);
  CVector<Scalar> v = CVector<Scalar>::Zero(Eigen::Index{1} << n);
  v(0) = v(v.size() - 1) = Scalar(1) / std::sqrt(Scalar(2));
  return v;
}

/// Z on the first qubit of |Gamma(n)>.
template <std::floating_point Scalar>
[[nodiscard]] CVector<Scalar> ghz_z_vector(int n) {
  CVector<Scalar> v = ghz_vector<Scalar>(n);
  v(v.size() - 1) = -v(v.size() - 1);
  return v;
}

/// Hub-side projection of links (sensor_i, hub_i) onto |Gamma(n)> over the hub qubits,
/// renormalized to the conditional post-measurement state of the sensors.
///
/// Only the |0..0> and |1..1> hub components of |Gamma(n)> are nonzero, so
///   sigma[a, a'] = 1/2 sum_{b, b' in {0,1}} prod_i beta_i[(a_i b), (a'_i b')].
template <std::floating_point Scalar>
[[nodiscard]] DenseState<Scalar> ghz_project(std::span<const DenseState<Scalar>> links) {
  const int n = static_cast<int>(links.size());
  if (n < 2) throw std::domain_error("ghz_project: need at least two links");
  detail::check_qubit_cap(n);
  for (const auto& link : links) {
    if (link.qubits() != 2) throw std::domain_error("ghz_project: every link must be a two-qubit state");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMatrix<Scalar> sigma(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index ap = 0; ap < dim; ++ap) {
      std::complex<Scalar> acc = 0;
      for (int b = 0; b < 2; ++b) {
        for (int bp = 0; bp < 2; ++bp) {
          std::complex<Scalar> term = Scalar(0.5);
          for (int i = 0; i < n; ++i) {
            const int row = 2 * detail::bit_of(a, i, n) + b;
            const int col = 2 * detail::bit_of(ap, i, n) + bp;
            term *= links[static_cast<std::size_t>(i)].matrix()(row, col);
          }
          acc += term;
        }
      }
      sigma(a, ap) = acc;
    }
  }
  const std::complex<Scalar> tr = sigma.trace();
  if (std::abs(tr) <= Scalar(0)) throw std::domain_error("ghz_project: projection has zero probability");
  sigma /= tr.real();
  return DenseState<Scalar>(std::move(sigma));
}

template <std::floating_point Scalar>
[[nodiscard]] DenseState<Scalar> ghz_project(const std::vector<DenseState<Scalar>>& links, int n) {
  if (links.size() != static_cast<std::size_t>(n)) {
    throw std::domain_error("ghz_project: expected " + std::to_string(n) + " links");
  }
  return ghz_project(std::span<const DenseState<Scalar>>(links));
}

/// Tensor product of states in order.
template <std::floating_point Scalar>
[[nodiscard]] DenseState<Scalar> tensor(std::span<const DenseState<Scalar>> parts) {
  if (parts.empty()) throw std::domain_error("tensor: no factors");
  int total = 0;
  for (const auto& p : parts) total += p.qubits();
  detail::check_qubit_cap(total);
  CMatrix<Scalar> acc = parts.front().matrix();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    CMatrix<Scalar> next = Eigen::kroneckerProduct(acc, parts[i].matrix()).eval();
    acc = std::move(next);
  }
  return DenseState<Scalar>(std::move(acc));
}

/// rho_n = (x)_nu sigma_{n_nu} (x) |+><+|^u with group nu built from links of
/// the given fidelities, in canonical group order.
template <std::floating_point Scalar>
[[nodiscard]] DenseState<Scalar> werner_probe(const GhzPartition& partition,
                                              const std::vector<std::vector<Scalar>>& fidelities_per_group) {
  if (fidelities_per_group.size() != static_cast<std::size_t>(partition.group_count())) {
    throw std::domain_error("werner_probe: one fidelity list per GHZ group required");
  }
  detail::check_qubit_cap(partition.total_sensors());
  std::vector<DenseState<Scalar>> factors;
  for (int g = 0; g < partition.group_count(); ++g) {
    const auto& fids = fidelities_per_group[static_cast<std::size_t>(g)];
    if (fids.size() != static_cast<std::size_t>(partition.size(g))) {
      throw std::domain_error("werner_probe: fidelity count does not match group size");
    }
    std::vector<DenseState<Scalar>> links;
    for (Scalar f : fids) links.push_back(build_werner(werner_param_from_fidelity(f)));
    factors.push_back(ghz_project(std::span<const DenseState<Scalar>>(links)));
  }
  for (int i = 0; i < partition.local_count(); ++i) factors.push_back(plus_state<Scalar>());
  return tensor(std::span<const DenseState<Scalar>>(factors));
}

template <std::floating_point Scalar>
[[nodiscard]] DenseState<Scalar> werner_probe(const GhzPartition& partition, Scalar fidelity) {
  std::vector<std::vector<Scalar>> fids;
  for (int n : partition.sizes()) fids.emplace_back(static_cast<std::size_t>(n), fidelity);
  return werner_probe(partition, fids);
}

namespace detail {

/// Diagonal of U(phi) = (x)_j exp(-i phi_j h_j) with h = -(gap/2) Z.
template <std::floating_point Scalar>
CVector<Scalar> phase_diagonal(int n, const PhaseVector<Scalar>& phis, const EigenSpec& eig) {
  if (phis.size() != n) {
    throw std::domain_error("phase vector has " + std::to_string(phis.size()) + " entries for " + std::to_string(n) +
                            " qubits");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  const Scalar half_gap = Scalar(eig.delta_lambda()) / Scalar(2);
  CVector<Scalar> u(dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    Scalar angle = 0;
    for (int j = 0; j < n; ++j) angle += (bit_of(a, j, n) == 0 ? phis[j] : -phis[j]);
    u(a) = std::polar(Scalar(1), half_gap * angle);
  }
  return u;
}

/// Diagonal of the full local generator h_q = diag(lambda0, lambda1) on qubit q.
template <std::floating_point Scalar>
RVector<Scalar> generator_diagonal(int n, int q, const EigenSpec& eig) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  RVector<Scalar> h(dim);
  for (Eigen::Index a = 0; a < dim; ++a) h(a) = Scalar(bit_of(a, q, n) == 0 ? eig.lambda0() : eig.lambda1());
  return h;
}

template <std::floating_point Scalar>
Scalar trace_product(const CMatrix<Scalar>& a, const CMatrix<Scalar>& b) {
  return a.cwiseProduct(b.transpose()).sum().real();
}

}  // namespace detail

/// U(phi) rho U(phi)^dagger.
template <std::floating_point Scalar>
[[nodiscard]] DenseState<Scalar> apply_phases(const DenseState<Scalar>& state, const PhaseVector<Scalar>& phis,
                                              const EigenSpec& eig = {}) {
  const CVector<Scalar> u = detail::phase_diagonal(state.qubits(), phis, eig);
  CMatrix<Scalar> out = u.asDiagonal() * state.matrix() * u.conjugate().asDiagonal();
  // Conjugation preserves the invariants up to rounding; re-symmetrize.
  out = (out + out.adjoint()).eval() / Scalar(2);
  return DenseState<Scalar>(std::move(out));
}

/// Quantum Fisher information matrix of phi at U(phi) probe U(phi)^dagger:
///   F_ab = sum_{g', g} 4 E_g ((E_g' - E_g)/(E_g' + E_g))^2 Re(<e_g'|h_a|e_g><e_g|h_b|e_g'>),
/// with the full generators diag(lambda0, lambda1). Pairs with E_g + E_g' < 1e-14 are skipped.
template <std::floating_point Scalar>
[[nodiscard]] RMatrix<Scalar> qfim(const DenseState<Scalar>& probe, const PhaseVector<Scalar>& phis,
                                   const EigenSpec& eig = {}) {
  const int n = probe.qubits();
  const DenseState<Scalar> evolved = apply_phases(probe, phis, eig);
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> solver(evolved.matrix());
  const RVector<Scalar> e = solver.eigenvalues().cwiseMax(Scalar(0));
  const CMatrix<Scalar>& v = solver.eigenvectors();
  const Eigen::Index dim = probe.dim();

  RMatrix<Scalar> weight(dim, dim);  // weight(g', g)
  for (Eigen::Index gp = 0; gp < dim; ++gp) {
    for (Eigen::Index g = 0; g < dim; ++g) {
      const Scalar sum = e(gp) + e(g);
      if (sum < Scalar(1e-14)) {
        weight(gp, g) = 0;
      } else {
        const Scalar r = (e(gp) - e(g)) / sum;
        weight(gp, g) = Scalar(4) * e(g) * r * r;
      }
    }
  }

  std::vector<CMatrix<Scalar>> gens;
  gens.reserve(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) {
    gens.push_back(v.adjoint() * detail::generator_diagonal<Scalar>(n, q, eig).asDiagonal() * v);
  }

  RMatrix<Scalar> out(n, n);
  for (int a = 0; a < n; ++a) {
    const CMatrix<Scalar> wa = weight.template cast<std::complex<Scalar>>().cwiseProduct(gens[a]);
    for (int b = a; b < n; ++b) {
      out(a, b) = out(b, a) = wa.cwiseProduct(gens[b].transpose()).sum().real();
    }
  }
  return out;
}

/// J F J^T with J = (1/S, ..., 1/S).
template <typename Derived>
[[nodiscard]] typename Derived::Scalar qfi_theta(const Eigen::MatrixBase<Derived>& fisher) {
  using Scalar = typename Derived::Scalar;
  if (fisher.rows() != fisher.cols() || fisher.rows() == 0) {
    throw std::domain_error("qfi_theta: Fisher matrix must be square and non-empty");
  }
  const Scalar s = Scalar(fisher.rows());
  return fisher.sum() / (s * s);
}

namespace detail {

/// Diagonal of hbar = (1/S) sum_s h_s.
template <std::floating_point Scalar>
RVector<Scalar> mean_generator(int n, const EigenSpec& eig) {
  RVector<Scalar> hbar = RVector<Scalar>::Zero(Eigen::Index{1} << n);
  for (int q = 0; q < n; ++q) hbar += generator_diagonal<Scalar>(n, q, eig);
  return hbar / Scalar(n);
}

/// -i [hbar, m] for diagonal hbar.
template <std::floating_point Scalar>
CMatrix<Scalar> commutator_derivative(const RVector<Scalar>& hbar, const CMatrix<Scalar>& m) {
  CMatrix<Scalar> out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) = std::complex<Scalar>(0, -1) * (hbar(i) - hbar(j)) * m(i, j);
  }
  return out;
}

}  // namespace detail

/// d rho_theta / d theta = -i [hbar, rho_phi] with hbar = (1/S) sum_s h_s.
template <std::floating_point Scalar>
[[nodiscard]] CMatrix<Scalar> theta_derivative(const DenseState<Scalar>& probe, const PhaseVector<Scalar>& phis,
                                               const EigenSpec& eig = {}) {
  const DenseState<Scalar> evolved = apply_phases(probe, phis, eig);
  return detail::commutator_derivative(detail::mean_generator<Scalar>(probe.qubits(), eig), evolved.matrix());
}

/// Symmetric logarithmic derivative L of rho_theta: d rho = (L rho + rho L)/2.
template <std::floating_point Scalar>
[[nodiscard]] CMatrix<Scalar> sld_operator(const DenseState<Scalar>& probe, const PhaseVector<Scalar>& phis,
                                           const EigenSpec& eig = {}) {
  const DenseState<Scalar> evolved = apply_phases(probe, phis, eig);
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> solver(evolved.matrix());
  const RVector<Scalar> e = solver.eigenvalues().cwiseMax(Scalar(0));
  const CMatrix<Scalar>& v = solver.eigenvectors();
  const CMatrix<Scalar> d = v.adjoint() * theta_derivative(probe, phis, eig) * v;
  CMatrix<Scalar> l(d.rows(), d.cols());
  for (Eigen::Index g = 0; g < d.rows(); ++g) {
    for (Eigen::Index gp = 0; gp < d.cols(); ++gp) {
      const Scalar sum = e(g) + e(gp);
      l(g, gp) = sum < Scalar(1e-14) ? std::complex<Scalar>(0) : Scalar(2) * d(g, gp) / sum;
    }
  }
  return v * l * v.adjoint();
}

/// Product POVM measuring every qubit in the |+>, |-> basis (2^n elements).
template <std::floating_point Scalar>
[[nodiscard]] std::vector<CMatrix<Scalar>> plus_minus_povm(int n) {
  detail::check_qubit_cap(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  std::vector<CMatrix<Scalar>> povm;
  povm.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index outcome = 0; outcome < dim; ++outcome) {
    CVector<Scalar> v(dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
      int parity = 0;
      for (int q = 0; q < n; ++q) parity ^= detail::bit_of(outcome, q, n) & detail::bit_of(a, q, n);
      v(a) = (parity ? Scalar(-1) : Scalar(1)) / std::sqrt(Scalar(dim));
    }
    povm.push_back(v * v.adjoint());
  }
  return povm;
}

/// Throws std::domain_error unless every element is Hermitian PSD and the set sums to I.
template <std::floating_point Scalar>
void validate_povm(const std::vector<CMatrix<Scalar>>& povm, Eigen::Index dim, Scalar tol = Scalar(1e-10)) {
  if (povm.empty()) throw std::domain_error("POVM has no elements");
  CMatrix<Scalar> total = CMatrix<Scalar>::Zero(dim, dim);
  for (const auto& el : povm) {
    if (el.rows() != dim || el.cols() != dim) throw std::domain_error("POVM element has the wrong dimension");
    if ((el - el.adjoint()).cwiseAbs().maxCoeff() > tol) throw std::domain_error("POVM element is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> solver(el, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tol) throw std::domain_error("POVM element is not positive");
    total += el;
  }
  if ((total - CMatrix<Scalar>::Identity(dim, dim)).cwiseAbs().maxCoeff() > tol) {
    throw std::domain_error("POVM elements do not sum to the identity");
  }
}

/// Outcome probabilities Tr[Pi_k U(phi) rho U(phi)^dagger].
template <std::floating_point Scalar>
[[nodiscard]] std::vector<Scalar> outcome_probabilities(const DenseState<Scalar>& probe,
                                                        const PhaseVector<Scalar>& phis,
                                                        const std::vector<CMatrix<Scalar>>& povm,
                                                        const EigenSpec& eig = {}) {
  const DenseState<Scalar> evolved = apply_phases(probe, phis, eig);
  std::vector<Scalar> probs;
  probs.reserve(povm.size());
  for (const auto& el : povm) probs.push_back(detail::trace_product(el, evolved.matrix()));
  return probs;
}

/// Classical Fisher information of the POVM outcome distribution with respect to theta,
/// where d/dtheta = (1/S) sum_s d/dphi_s (every phase moved by eps/S).
///
/// Central difference with step `step`. Outcomes with probability below 1e-7 are
/// too ill-conditioned for differencing and use exact derivatives of rho_theta
/// instead: p' = Tr[Pi d rho], and below 1e-13, where p itself is rounding noise,
/// the limit (p')^2/p -> 2 p'' with p'' = Tr[Pi d^2 rho].
template <std::floating_point Scalar>
[[nodiscard]] Scalar measurement_cfi(const DenseState<Scalar>& probe, const PhaseVector<Scalar>& phis,
                                     const std::vector<CMatrix<Scalar>>& povm, const EigenSpec& eig = {},
                                     Scalar step = Scalar(1e-5)) {
  validate_povm(povm, probe.dim());
  const Scalar per_sensor = Scalar(1) / Scalar(phis.size());
  auto probs_at = [&](Scalar eps) { return outcome_probabilities(probe, phis.shifted(eps * per_sensor), povm, eig); };
  const std::vector<Scalar> p0 = probs_at(0);
  const std::vector<Scalar> plus = probs_at(step);
  const std::vector<Scalar> minus = probs_at(-step);

  CMatrix<Scalar> d1, d2;  // filled lazily
  Scalar cfi = 0;
  for (std::size_t k = 0; k < povm.size(); ++k) {
    if (p0[k] >= Scalar(1e-7)) {
      const Scalar dp = (plus[k] - minus[k]) / (Scalar(2) * step);
      cfi += dp * dp / p0[k];
      continue;
    }
    if (d1.size() == 0) {
      const RVector<Scalar> hbar = detail::mean_generator<Scalar>(probe.qubits(), eig);
      d1 = detail::commutator_derivative(hbar, apply_phases(probe, phis, eig).matrix());
      d2 = detail::commutator_derivative(hbar, d1);
    }
    if (p0[k] >= Scalar(1e-13)) {
      const Scalar dp = detail::trace_product(povm[k], d1);
      cfi += dp * dp / p0[k];
    } else {
      const Scalar second = detail::trace_product(povm[k], d2);
      if (second > 0) cfi += Scalar(2) * second;
    }
  }
  return cfi;
}

}  // namespace entnet
