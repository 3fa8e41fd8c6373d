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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "entnet/errors.hpp"
#include "entnet/measurements.hpp"
#include "entnet/partition_opt.hpp"
#include "entnet/thresholds.hpp"

using namespace entnet;
using doctest::Approx;

namespace {

using Groups = std::vector<std::vector<double>>;

Groups uniform_groups(const GhzPartition& part, double value) {
  Groups g;
  for (int n : part.sizes()) g.emplace_back(static_cast<std::size_t>(n), value);
  return g;
}

Groups to_werner(const Groups& fids) {
  Groups xs = fids;
  for (auto& g : xs) {
    for (auto& f : g) f = werner_param_from_fidelity(f);
  }
  return xs;
}

PhaseVectord random_phases(std::mt19937_64& rng, int s) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::vector<double> phis(static_cast<std::size_t>(s));
  for (auto& p : phis) p = angle(rng);
  return PhaseVectord(phis);
}

}  // namespace

TEST_CASE("local_cfi examples") {
  const GhzPartition two({2}, 2);
  const double q = std::numbers::pi / 4;
  CHECK(local_cfi(LocalCfiInput<double>{two, {{0.9, 0.9}}, PhaseVectord({q, q})}) == Approx(0.6561).epsilon(1e-12));
  CHECK(local_cfi(LocalCfiInput<double>{two, {{0.9, 0.9}}, PhaseVectord({0.4, -0.4})}) == 0.0);

  std::mt19937_64 rng(3);
  for (const auto& part : {GhzPartition({5}, 5), GhzPartition({3, 2}, 6), GhzPartition({2}, 4)}) {
    for (int i = 0; i < 10; ++i) {
      const LocalCfiInput<double> in{part, uniform_groups(part, 1.0), random_phases(rng, part.total_sensors())};
      CHECK(local_cfi(in) == Approx(snapshot_qfi_pure<double>(part)).epsilon(1e-12));
    }
  }
  // Group phase sum of zero kills that group's contribution only.
  const GhzPartition mixed({2, 2}, 5);
  const LocalCfiInput<double> in{mixed, {{0.8, 0.8}, {0.7, 0.9}}, PhaseVectord({0.3, -0.3, 0.1, 0.2, 1.0})};
  const double psi = 0.3;
  const double big_x = 0.7 * 0.7 * 0.9 * 0.9;
  const double expected =
      (1.0 + 4.0 * big_x * std::sin(psi) * std::sin(psi) / (1.0 - big_x * std::cos(psi) * std::cos(psi))) / 25.0;
  CHECK(local_cfi(in) == Approx(expected).epsilon(1e-13));

  const LocalCfiInput<float> single{two, {{0.9f, 0.9f}}, PhaseVector<float>({0.785398f, 0.785398f})};
  CHECK(local_cfi(single) == Approx(0.6561).epsilon(1e-5));
}

TEST_CASE("local_cfi against the dense oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> fid(0.55, 0.99);
  for (int s = 2; s <= 6; ++s) {
    for (const auto& base : enumerate_partitions(s)) {
      const GhzPartition part = base.with_total_sensors(s);
      if (part.group_count() == 0) continue;
      Groups fids;
      for (int n : part.sizes()) {
        std::vector<double> g(static_cast<std::size_t>(n));
        for (auto& f : g) f = fid(rng);
        fids.push_back(g);
      }
      const DenseStated probe = werner_probe(part, fids);
      const auto povm = plus_minus_povm<double>(s);
      for (int draw = 0; draw < 20; ++draw) {
        const PhaseVectord phis = random_phases(rng, s);
        const double closed = local_cfi(LocalCfiInput<double>{part, to_werner(fids), phis});
        CAPTURE(part.to_string());
        CHECK(std::abs(closed - measurement_cfi(probe, phis, povm)) < 1e-6);
        CHECK(closed <= snapshot_qfi_werner(part, fids) + 1e-12);
      }
    }
  }
}

TEST_CASE("uniform parameters reduce to the single-x form") {
  const GhzPartition part({3, 2}, 6);
  const PhaseVectord phis({0.1, 0.5, 0.9, -0.2, 0.7, 0.0});
  const double x = werner_param_from_fidelity(0.93);
  const double got = local_cfi(LocalCfiInput<double>{part, uniform_groups(part, x), phis});
  double expected = 1.0;
  const double sums[] = {1.5, 0.5};
  for (int g = 0; g < 2; ++g) {
    const int n = part.size(g);
    const double big_x = std::pow(x, 2 * n);
    expected += n * n * big_x * std::pow(std::sin(sums[g]), 2) / (1.0 - big_x * std::pow(std::cos(sums[g]), 2));
  }
  CHECK(got == Approx(expected / 36.0).epsilon(1e-13));
}

TEST_CASE("local_cfi_max") {
  const GhzPartition five({5}, 5);
  const double x = werner_param_from_fidelity(0.9);
  CHECK(local_cfi_max(five, uniform_groups(five, x)) == Approx(std::pow(x, 10)).epsilon(1e-14));
  CHECK(local_cfi_max(five, uniform_groups(five, x)) == Approx(0.239068).epsilon(1e-6));
  CHECK(local_cfi_max(five, uniform_groups(five, 1.0)) == Approx(snapshot_qfi_pure<double>(five)).epsilon(1e-14));
  for (int s = 2; s <= 10; ++s) {
    for (const auto& base : enumerate_partitions(s)) {
      const GhzPartition part = base.with_total_sensors(s);
      for (double f : {0.3, 0.6, 0.84, 0.9, 0.97, 1.0}) {
        const double cfi = local_cfi_max(part, uniform_groups(part, werner_param_from_fidelity(f)));
        const double qfi = snapshot_qfi_werner(part, f);
        CHECK(cfi <= qfi + 1e-12);
        if (f >= 0.6 && f < 1.0 && part.group_count() > 0) CHECK(cfi < qfi);
      }
    }
  }
  // The maximizing phases reach local_cfi_max.
  const GhzPartition part({3, 2}, 6);
  const Groups xs{{0.8, 0.85, 0.9}, {0.7, 0.95}};
  const double h = std::numbers::pi / 2;
  const double at_max = local_cfi(LocalCfiInput<double>{part, xs, PhaseVectord({h, 0, 0, 2 * h + h, 0, 0.4})});
  CHECK(at_max == Approx(local_cfi_max(part, xs)).epsilon(1e-12));
}

TEST_CASE("cfi_threshold") {
  CHECK(cfi_threshold(2) == Approx((3.0 * std::pow(2.0, -0.25) + 1.0) / 4.0).epsilon(1e-15));
  CHECK(cfi_threshold(2) == Approx(0.880672).epsilon(1e-6));
  for (int n = 2; n <= 8; ++n) CHECK(cfi_threshold(n) > solve_threshold(n).f_thres);
  for (int n = 2; n <= 20; ++n) {
    const GhzPartition part({n}, n);
    const double x = werner_param_from_fidelity(cfi_threshold(n));
    CHECK(local_cfi_max(part, uniform_groups(part, x)) == Approx(1.0 / n).epsilon(1e-12));
  }
  CHECK_THROWS_AS(cfi_threshold(1), std::domain_error);
}

TEST_CASE("SLD eigenbasis POVM") {
  std::mt19937_64 rng(29);
  for (const auto& part : {GhzPartition({3}, 3), GhzPartition({2}, 3), GhzPartition({2, 2}, 4),
                           GhzPartition({3, 2}, 6), GhzPartition::all_local(2)}) {
    const int s = part.total_sensors();
    const PhaseVectord phis = random_phases(rng, s);
    const auto povm = sld_povm(part, phis);
    CMatrixd total = CMatrixd::Zero(Eigen::Index{1} << s, Eigen::Index{1} << s);
    for (const auto& el : povm) total += el;
    CHECK((total - CMatrixd::Identity(total.rows(), total.cols())).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_NOTHROW(validate_povm(povm, total.rows()));

    CAPTURE(part.to_string());
    const DenseStated pure = werner_probe(part, 1.0);
    CHECK(std::abs(measurement_cfi(pure, phis, povm) - qfi_theta(qfim(pure, phis))) < 1e-8);
    const DenseStated noisy = werner_probe(part, 0.9);
    CHECK(std::abs(measurement_cfi(noisy, phis, povm) - qfi_theta(qfim(noisy, phis))) < 1e-6);
    Groups fids;
    std::uniform_real_distribution<double> fid(0.6, 0.99);
    for (int n : part.sizes()) {
      std::vector<double> g(static_cast<std::size_t>(n));
      for (auto& f : g) f = fid(rng);
      fids.push_back(g);
    }
    const DenseStated mixed = werner_probe(part, fids);
    CHECK(std::abs(measurement_cfi(mixed, phis, povm) - qfi_theta(qfim(mixed, phis))) < 1e-6);
  }
  CHECK_THROWS_AS(sld_povm(GhzPartition({13}, 13), PhaseVectord::zeros(13)), SizeError);
}

TEST_CASE("SLD eigenvectors") {
  const CVectord c0 = sld_eigenvector<double>(3, 0);
  const CVectord c1 = sld_eigenvector<double>(3, 1);
  CHECK(c0.norm() == Approx(1.0));
  CHECK(std::abs(c0.dot(c1)) < 1e-15);
  CHECK(std::abs(c0(0) - std::complex<double>(0.5, 0.5)) < 1e-15);
  CHECK(std::abs(c0(7) - std::complex<double>(0.5, -0.5)) < 1e-15);
}
