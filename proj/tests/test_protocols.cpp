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

#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "entnet/errors.hpp"
#include "entnet/partition_opt.hpp"
#include "entnet/protocols.hpp"
#include "entnet/qfi_core.hpp"

using namespace entnet;
using doctest::Approx;

namespace {

NetworkConfig config(int s, double p, double f = 1.0) {
  NetworkConfig c;
  c.sensors = s;
  c.p = p;
  c.fidelity = f;
  return c;
}

double snapshot(int s, int m, double f, PartitionPolicy policy) {
  if (m < 2) return 1.0 / s;
  if (policy == PartitionPolicy::Maximal) return snapshot_qfi_werner(GhzPartition({m}, s), f);
  return optimal_partition(m, s, f).qfi;
}

// Average over every success pattern of S sensors across k slots.
double brute_force_block(int s, int k, double p, double f, PartitionPolicy policy) {
  const int bits = s * k;
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << bits); ++mask) {
    const int ones = std::popcount(mask);
    const double w = std::pow(p, ones) * std::pow(1.0 - p, bits - ones);
    int m = 0;
    for (int sensor = 0; sensor < s; ++sensor) {
      if ((mask >> (sensor * k)) & ((1u << k) - 1)) ++m;
    }
    total += w * ((k - 1) / static_cast<double>(s) + snapshot(s, m, f, policy)) / k;
  }
  return total;
}

// Joint law of (stopping slot, live links) from every slot-by-slot outcome sequence.
std::map<std::pair<int, int>, double> enumerate_vtmbl(int s, double p, int mu, int horizon) {
  std::map<std::pair<int, int>, double> law;
  const int bits = s * horizon;
  for (unsigned mask = 0; mask < (1u << bits); ++mask) {
    const int ones = std::popcount(mask);
    const double w = std::pow(p, ones) * std::pow(1.0 - p, bits - ones);
    std::vector<int> holding(static_cast<std::size_t>(s), 0);
    int m = 0;
    for (int t = 1; t <= horizon; ++t) {
      for (int sensor = 0; sensor < s; ++sensor) {
        if (!holding[sensor] && ((mask >> ((t - 1) * s + sensor)) & 1u)) {
          holding[sensor] = 1;
          ++m;
        }
      }
      if (m >= mu) {
        law[{t, m}] += w;
        break;
      }
    }
  }
  return law;
}

}  // namespace

TEST_CASE("snapshot distribution") {
  auto d = snapshot_distribution(4, 1.0);
  CHECK(d.back() == 1.0);
  CHECK(std::accumulate(d.begin(), d.end() - 1, 0.0) == 0.0);
  d = snapshot_distribution(2, 0.5);
  CHECK(d == std::vector<double>{0.25, 0.5, 0.25});
  for (int s = 1; s <= 64; ++s) {
    for (double p : {0.01, 0.3, 0.77}) {
      d = snapshot_distribution(s, p);
      CHECK(std::accumulate(d.begin(), d.end(), 0.0) == Approx(1.0).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(snapshot_distribution(3, 1.5), std::domain_error);
}

TEST_CASE("immediate sensing against pattern enumeration") {
  CHECK(immediate_avg_qfi(config(5, 0.5)).mean == Approx(0.4).epsilon(1e-14));
  CHECK(brute_force_block(5, 1, 0.5, 1.0, PartitionPolicy::Maximal) == Approx(0.4).epsilon(1e-14));
  CHECK(immediate_avg_qfi(config(5, 0.0)).mean == Approx(0.2));
  CHECK(immediate_avg_qfi(config(5, 1.0)).mean == Approx(1.0));
  for (int s = 2; s <= 10; ++s) {
    for (int i = 1; i <= 9; ++i) {
      const double p = 0.1 * i;
      const double exact = brute_force_block(s, 1, p, 1.0, PartitionPolicy::Maximal);
      CHECK(immediate_avg_qfi(config(s, p)).mean == Approx(exact).epsilon(1e-12));
    }
  }
  for (double f : {0.86, 0.92}) {
    for (auto policy : {PartitionPolicy::Maximal, PartitionPolicy::Optimal}) {
      CHECK(immediate_avg_qfi(config(6, 0.6, f), policy).mean ==
            Approx(brute_force_block(6, 1, 0.6, f, policy)).epsilon(1e-12));
    }
  }
}

TEST_CASE("fixed block length against pattern enumeration") {
  for (int k = 1; k <= 3; ++k) {
    for (double p : {0.2, 0.5, 0.9}) {
      for (double f : {1.0, 0.9}) {
        for (auto policy : {PartitionPolicy::Maximal, PartitionPolicy::Optimal}) {
          CHECK(ftmbl_avg_qfi(config(4, p, f), k, policy).mean ==
                Approx(brute_force_block(4, k, p, f, policy)).epsilon(1e-12));
        }
      }
    }
  }
  for (int s = 2; s <= 10; ++s) {
    CHECK(ftmbl_avg_qfi(config(s, 0.37), 1).mean == Approx(immediate_avg_qfi(config(s, 0.37)).mean).epsilon(1e-15));
  }
  CHECK_THROWS_AS(ftmbl_avg_qfi(config(4, 0.5), 0), std::domain_error);
}

TEST_CASE("optimal block length") {
  CHECK(ftmbl_k_opt(0.9) == 1);
  CHECK(ftmbl_k_opt(0.5) == 2);
  CHECK(ftmbl_k_opt(0.2) == 6);
  CHECK(ftmbl_k_opt(0.0) == 1);
  const double cross = 2.0 - std::sqrt(2.0);
  CHECK(ftmbl_k_opt(cross + 1e-9) == 1);
  CHECK(ftmbl_k_opt(cross - 1e-9) > 1);
  // The best k is the same for every S.
  for (double p : {0.05, 0.2, 0.4}) {
    const int k = ftmbl_k_opt(p);
    for (int s : {5, 10}) {
      double best = 0.0;
      int arg = 0;
      for (int kk = 1; kk <= 200; ++kk) {
        const double v = ftmbl_avg_qfi(config(s, p), kk).mean;
        if (v > best) {
          best = v;
          arg = kk;
        }
      }
      CHECK(arg == k);
    }
  }
}

TEST_CASE("V-TMBL joint probability") {
  CHECK(vtmbl_joint_prob(2, 0.5, 2, 1, 2) == Approx(0.25));
  CHECK(vtmbl_joint_prob(2, 0.5, 2, 2, 2) == Approx(0.3125));
  CHECK_THROWS_AS(vtmbl_joint_prob(3, 0.5, 2, 1, 1), std::domain_error);

  for (int s = 1; s <= 3; ++s) {
    for (int mu = 1; mu <= s; ++mu) {
      for (double p : {0.3, 0.65}) {
        const auto law = enumerate_vtmbl(s, p, mu, 4);
        for (int t = 1; t <= 4; ++t) {
          for (int m = mu; m <= s; ++m) {
            const auto it = law.find({t, m});
            const double expected = it == law.end() ? 0.0 : it->second;
            CHECK(vtmbl_joint_prob(s, p, mu, t, m) == Approx(expected).epsilon(1e-13));
          }
        }
      }
    }
  }
}

TEST_CASE("V-TMBL stopping law normalizes") {
  for (int s = 2; s <= 6; ++s) {
    for (int mu = 1; mu <= s; ++mu) {
      for (double p : {0.1, 0.2, 0.5, 0.9}) {
        double mass = 0.0;
        for (int t = 1; t <= 200; ++t) {
          for (int m = mu; m <= s; ++m) mass += vtmbl_joint_prob(s, p, mu, t, m);
        }
        CHECK(mass + vtmbl_survival(s, p, mu, 200) == Approx(1.0).epsilon(1e-12));
        if (p >= 0.2) CHECK(std::abs(mass - 1.0) < 1e-9);
      }
    }
  }
}

TEST_CASE("V-TMBL closed form agrees with the truncated series") {
  for (auto avg : {VtmblAveraging::TimeAverage, VtmblAveraging::BlockAverage}) {
    VtmblOptions opt;
    opt.averaging = avg;
    for (int s : {2, 5, 8}) {
      for (int mu = 0; mu <= s; ++mu) {
        for (double p : {0.1, 0.3, 0.7, 1.0}) {
          const double series = vtmbl_avg_qfi(config(s, p), mu, EstimateMethod::TruncatedSeries, opt).mean;
          const double closed = vtmbl_avg_qfi(config(s, p), mu, EstimateMethod::ClosedForm, opt).mean;
          CHECK(closed == Approx(series).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("V-TMBL limits") {
  for (int s : {3, 5, 10}) {
    for (double p : {0.2, 0.6}) {
      const double imm = immediate_avg_qfi(config(s, p)).mean;
      for (int mu : {0, 1}) {
        CHECK(vtmbl_avg_qfi(config(s, p), mu, EstimateMethod::TruncatedSeries).mean == Approx(imm).epsilon(1e-9));
        CHECK(vtmbl_avg_qfi(config(s, p), mu, EstimateMethod::ClosedForm).mean == Approx(imm).epsilon(1e-12));
      }
    }
    for (int mu = 2; mu <= s; ++mu) {
      CHECK(vtmbl_avg_qfi(config(s, 1.0), mu, EstimateMethod::TruncatedSeries).mean ==
            Approx(immediate_avg_qfi(config(s, 1.0)).mean).epsilon(1e-12));
      double prev_gap = 1.0;
      for (double p : {0.99, 0.999, 0.9999}) {
        const double gap = std::abs(vtmbl_avg_qfi(config(s, p), mu, EstimateMethod::TruncatedSeries).mean -
                                    immediate_avg_qfi(config(s, p)).mean);
        CHECK(gap <= prev_gap + 1e-12);
        prev_gap = gap;
      }
      CHECK(prev_gap < 1e-3);
    }
  }
  CHECK(vtmbl_avg_qfi(config(4, 0.0), 3, EstimateMethod::TruncatedSeries).mean == 0.25);
  CHECK_THROWS_AS(vtmbl_avg_qfi(config(4, 1e-7), 4, EstimateMethod::TruncatedSeries), ConvergenceError);
  CHECK_THROWS_AS(vtmbl_avg_qfi(config(4, 0.5), 5, EstimateMethod::TruncatedSeries), std::domain_error);
}

TEST_CASE("optimal V-TMBL threshold") {
  CHECK(vtmbl_mu_opt(2, 0.3) == 2);
  // Nearly linear in S for p < 0.9.
  for (double p : {0.1, 0.3, 0.5, 0.7}) {
    std::vector<double> xs, ys;
    for (int s = 4; s <= 20; ++s) {
      xs.push_back(s);
      ys.push_back(vtmbl_mu_opt(s, p));
    }
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx;
    CAPTURE(p);
    CHECK(slope > 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(ys[i] - (my + slope * (xs[i] - mx))) <= 1.0);
  }
  // At high p the optimum falls back toward small thresholds.
  CHECK(vtmbl_mu_opt(20, 0.95) < vtmbl_mu_opt(20, 0.5));
}

TEST_CASE("protocol ordering and bounds") {
  CHECK(qfi_upper_bound(5, 0.5) == Approx(0.6));
  CHECK(qfi_upper_bound(7, 1.0) == Approx(1.0));
  for (int s = 2; s <= 10; ++s) {
    for (int i = 0; i <= 10; ++i) {
      const double p = 0.1 * i;
      const NetworkConfig c = config(s, p);
      const double imm = immediate_avg_qfi(c).mean;
      const double fixed = ftmbl_avg_qfi(c, ftmbl_k_opt(p)).mean;
      const double var = vtmbl_avg_qfi(c, vtmbl_mu_opt(c), EstimateMethod::TruncatedSeries).mean;
      const double bound = qfi_upper_bound(s, p);
      CAPTURE(s);
      CAPTURE(p);
      CHECK(fixed >= imm - 1e-12);
      CHECK(var >= fixed - 1e-9);
      for (double v : {imm, fixed, var}) {
        CHECK(v <= bound + 1e-12);
        CHECK(v >= 1.0 / s - 1e-12);
      }
    }
  }
}

TEST_CASE("protocol spec validation") {
  CHECK_THROWS_AS(ProtocolSpec::fixed(0).validate(5), std::domain_error);
  CHECK_THROWS_AS(ProtocolSpec::variable(6).validate(5), std::domain_error);
  ProtocolSpec v = ProtocolSpec::variable(3);
  v.distill = DistillPolicy::Keep;
  CHECK_THROWS_AS(v.validate(5), std::invalid_argument);
  CHECK(ProtocolSpec::fixed(3, DistillPolicy::Discard).to_string() == "ftmbl(k=3)+discard");
  NetworkConfig bad = config(1, 0.5);
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}
