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

#include <algorithm>
#include <cmath>
#include <vector>

#include "entnet/oracle.hpp"
#include "entnet/partition_opt.hpp"
#include "entnet/qfi_core.hpp"

using namespace entnet;
using doctest::Approx;

namespace {

// e00 + e10 written as 2^{1-n} sum over even j of C(n, j) x^j.
double even_binomial_sum(double x, int n) {
  double sum = 0.0;
  for (int j = 0; j <= n; j += 2) {
    double c = 1.0;
    for (int i = 1; i <= j; ++i) c = c * (n - j + i) / i;
    sum += c * std::pow(x, j);
  }
  return sum / std::pow(2.0, n - 1);
}

}  // namespace

TEST_CASE("werner parameter from fidelity") {
  CHECK(werner_from_fidelity(1.0).werner_param() == 1.0);
  CHECK(werner_from_fidelity(0.25).werner_param() == 0.0);
  CHECK(werner_from_fidelity(0.9).werner_param() == Approx(0.8666666666666667).epsilon(1e-15));
  CHECK(werner_from_fidelity(0.7).distillable());
  CHECK_FALSE(werner_from_fidelity(0.5).distillable());
  CHECK_THROWS_AS(werner_from_fidelity(1.01), std::domain_error);
  CHECK_THROWS_AS(werner_from_fidelity(-0.1), std::domain_error);
  for (int i = 0; i <= 100; ++i) {
    const double f = i / 100.0;
    CHECK(fidelity_from_werner_param(werner_param_from_fidelity(f)) == Approx(f).epsilon(1e-15));
  }
}

TEST_CASE("eigen spec rejects a zero gap") {
  CHECK(EigenSpec{}.delta_lambda() == 1.0);
  CHECK(EigenSpec(0.5, 2.5).gap_squared() == 4.0);
  CHECK_THROWS_AS(EigenSpec(1.0, 1.0), std::domain_error);
}

TEST_CASE("partition canonical form and offsets") {
  const GhzPartition p({2, 3}, 6);
  CHECK(p.size(0) == 3);
  CHECK(p.size(1) == 2);
  CHECK(p.offset(0) == 0);
  CHECK(p.offset(1) == 3);
  CHECK(p.local_count() == 1);
  CHECK(p == GhzPartition({3, 2}, 6));
  CHECK(p.to_string() == "(3, 2)");
  CHECK(GhzPartition::all_local(4).to_string() == "()");
  CHECK_THROWS_AS(GhzPartition({1}, 3), std::domain_error);
  CHECK_THROWS_AS(GhzPartition({3, 3}, 5), std::domain_error);
  // Large group counts are valid inputs even if never optimal.
  CHECK_NOTHROW(GhzPartition({2, 2, 2}, 6));
}

TEST_CASE("equal-x GHZ coefficients") {
  auto e = ghz_coeffs_equal(1.0, 3);
  CHECK(e.e00 == Approx(1.0));
  CHECK(e.e10 == Approx(0.0));
  e = ghz_coeffs_equal(0.0, 3);
  CHECK(e.e00 == Approx(0.125));
  CHECK(e.e10 == Approx(0.125));
  e = ghz_coeffs_equal(0.8, 2);
  CHECK(e.e00 == Approx(0.73).epsilon(1e-14));
  CHECK(e.e10 == Approx(0.09).epsilon(1e-14));
  CHECK_THROWS_AS(ghz_coeffs_equal(0.5, 1), std::domain_error);

  for (int n = 2; n <= 10; ++n) {
    for (double x : {0.0, 0.3, 0.61, 0.9, 1.0}) {
      const auto c = ghz_coeffs_equal(x, n);
      CHECK(c.e00 - c.e10 == Approx(std::pow(x, n)).epsilon(1e-13));
      CHECK(c.e00 + c.e10 == Approx(even_binomial_sum(x, n)).epsilon(1e-13));
      CHECK(c.e00 >= c.e10);
      CHECK(c.e10 >= 0.0);
      CHECK(c.e00 + c.e10 <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("mixed GHZ coefficients reduce to the equal case") {
  const std::vector<double> ones{1.0, 1.0, 1.0};
  const auto pure = ghz_coeffs_mixed(ones, 3);
  CHECK(pure.e00 == Approx(1.0));
  CHECK(pure.e10 == Approx(0.0));
  for (int n = 2; n <= 6; ++n) {
    const std::vector<double> xs(static_cast<std::size_t>(n), 0.77);
    const auto a = ghz_coeffs_mixed(xs, n);
    const auto b = ghz_coeffs_equal(0.77, n);
    CHECK(a.e00 == Approx(b.e00).epsilon(1e-14));
    CHECK(a.e10 == Approx(b.e10).epsilon(1e-14));
  }
  CHECK_THROWS_AS(ghz_coeffs_mixed(ones, 2), std::domain_error);
}

TEST_CASE("mixed GHZ coefficients match the dense projection") {
  const std::vector<double> xs{0.9, 0.7, 0.8};
  std::vector<DenseStated> links;
  for (double x : xs) links.push_back(build_werner(x));
  const DenseStated sigma = ghz_project(links, 3);
  const auto e = ghz_coeffs_mixed(xs, 3);
  CHECK(sigma.expectation(ghz_vector<double>(3)) == Approx(e.e00).epsilon(1e-12));
  CHECK(sigma.expectation(ghz_z_vector<double>(3)) == Approx(e.e10).epsilon(1e-12));
}

TEST_CASE("coefficient C") {
  for (int n = 2; n <= 8; ++n) CHECK(coefficient_C_equal(1.0, n) == Approx(1.0));
  const double x = werner_param_from_fidelity(0.9);
  // 4x^4 / (2 + 2x^2) and 8x^6 / (2 + 6x^2)
  CHECK(coefficient_C_equal(x, 2) == Approx(4 * std::pow(x, 4) / (2 + 2 * x * x)).epsilon(1e-14));
  CHECK(coefficient_C_equal(x, 2) == Approx(0.644355).epsilon(1e-6));
  CHECK(coefficient_C_equal(x, 3) == Approx(8 * std::pow(x, 6) / (2 + 6 * x * x)).epsilon(1e-14));
  CHECK(coefficient_C_equal(x, 3) == Approx(0.521008).epsilon(1e-6));
  for (int n = 2; n <= 8; ++n) {
    const std::vector<double> xs(static_cast<std::size_t>(n), x);
    CHECK(coefficient_C(xs, n) == Approx(coefficient_C_equal(x, n)).epsilon(1e-13));
  }
}

TEST_CASE("coefficient C is symmetric in the links") {
  std::vector<double> xs{0.95, 0.6, 0.83, 0.71};
  const double ref = coefficient_C(xs, 4);
  std::sort(xs.begin(), xs.end());
  do {
    CHECK(coefficient_C(xs, 4) == Approx(ref).epsilon(1e-14));
  } while (std::next_permutation(xs.begin(), xs.end()));
}

TEST_CASE("pure snapshot QFI") {
  CHECK(snapshot_qfi_pure(GhzPartition::all_local(5)) == Approx(0.2));
  CHECK(snapshot_qfi_pure(GhzPartition({5}, 5)) == Approx(1.0));
  CHECK(snapshot_qfi_pure(GhzPartition({3, 2}, 6)) == Approx(14.0 / 36.0));
  CHECK(snapshot_qfi_pure(GhzPartition({5}, 5), EigenSpec(0.0, 3.0)) == Approx(9.0));
}

TEST_CASE("Werner snapshot QFI with unit fidelity equals the pure form") {
  for (int s = 1; s <= 12; ++s) {
    for (const GhzPartition& p : enumerate_partitions(s)) {
      CHECK(snapshot_qfi_werner(p, 1.0) == snapshot_qfi_pure(p));
      std::vector<std::vector<double>> fids;
      for (int n : p.sizes()) fids.emplace_back(static_cast<std::size_t>(n), 1.0);
      CHECK(snapshot_qfi_werner(p, fids) == snapshot_qfi_pure(p));
    }
  }
}

TEST_CASE("Werner snapshot QFI values") {
  CHECK(snapshot_qfi_werner(GhzPartition({3, 2}, 5), 0.9) == Approx(0.290660).epsilon(1e-6));
  CHECK(snapshot_qfi_werner(GhzPartition({2}, 5), 0.84) < 0.2);
  CHECK(snapshot_qfi_werner(GhzPartition({2}, 5), 0.86) > 0.2);
  CHECK_THROWS_AS(snapshot_qfi_werner(GhzPartition({2}, 5), 1.2), std::domain_error);
  const std::vector<std::vector<double>> wrong{{0.9, 0.9, 0.9}};
  CHECK_THROWS_AS(snapshot_qfi_werner(GhzPartition({2}, 5), wrong), std::domain_error);
}

TEST_CASE("Werner snapshot QFI is non-decreasing in each fidelity") {
  const GhzPartition p({3, 2}, 6);
  for (int g = 0; g < 2; ++g) {
    for (int slot = 0; slot < p.size(g); ++slot) {
      std::vector<std::vector<double>> fids{{0.8, 0.9, 0.75}, {0.95, 0.7}};
      double prev = -1.0;
      for (int i = 0; i <= 100; ++i) {
        fids[g][slot] = 0.5 + 0.005 * i;
        const double q = snapshot_qfi_werner(p, fids);
        CHECK(q >= prev - 1e-15);
        prev = q;
      }
    }
  }
}

TEST_CASE("scalar templates agree") {
  const GhzPartition p({4, 3}, 8);
  const double d = snapshot_qfi_werner(p, 0.91);
  const long double ld = snapshot_qfi_werner(p, 0.91L);
  const float f = snapshot_qfi_werner(p, 0.91f);
  CHECK(static_cast<double>(ld) == Approx(d).epsilon(1e-14));
  CHECK(static_cast<double>(f) == Approx(d).epsilon(1e-5));
}
