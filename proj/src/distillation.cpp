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

#include "entnet/distillation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "entnet/errors.hpp"
#include "entnet/qfi_core.hpp"

namespace entnet {
namespace {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error(std::string(what) + " must lie in [0, 1]");
}

void distill_level(double fidelity, int links, double fallback, double prob, DistillPolicy policy,
                   FidelityDistribution& out) {
  if (links == 0) {
    out.add(fallback, prob);
    return;
  }
  if (links == 1 || fidelity <= 0.5) {
    out.add(fidelity, prob);
    return;
  }
  if (policy == DistillPolicy::Keep && links % 2 == 1) fallback = fidelity;
  const DistillStep step = distill_pair(fidelity, fidelity);
  const int pairs = links / 2;
  for (int s = 0; s <= pairs; ++s) {
    const double w = binom(pairs, s) * std::pow(step.success_prob, s) * std::pow(1.0 - step.success_prob, pairs - s);
    if (w == 0.0) continue;
    distill_level(step.out_fidelity, s, fallback, prob * w, policy, out);
  }
}

}  // namespace

DistillStep distill_pair(double f1, double f2) {
  check_unit(f1, "distill_pair: F1");
  check_unit(f2, "distill_pair: F2");
  const double a = 1.0 - f1, b = 1.0 - f2;
  DistillStep step;
  step.success_prob = f1 * f2 + (f1 * b + f2 * a) / 3.0 + 5.0 * a * b / 9.0;
  step.out_fidelity = (f1 * f2 + a * b / 9.0) / step.success_prob;
  return step;
}

void FidelityDistribution::add(double fidelity, double probability) {
  auto it = std::lower_bound(outcomes_.begin(), outcomes_.end(), fidelity - 1e-14,
                             [](const FidelityOutcome& o, double f) { return o.fidelity < f; });
  if (it != outcomes_.end() && std::abs(it->fidelity - fidelity) <= 1e-14) {
    it->probability += probability;
  } else {
    outcomes_.insert(it, {fidelity, probability});
  }
}

double FidelityDistribution::total() const {
  double sum = 0.0;
  for (const auto& o : outcomes_) sum += o.probability;
  return sum;
}

double FidelityDistribution::probability_of(double fidelity) const {
  for (const auto& o : outcomes_) {
    if (std::abs(o.fidelity - fidelity) <= 1e-12) return o.probability;
  }
  return 0.0;
}

double FidelityDistribution::mean_link_fidelity() const {
  double mass = 0.0, acc = 0.0;
  for (const auto& o : outcomes_) {
    if (o.fidelity > 0.0) {
      mass += o.probability;
      acc += o.probability * o.fidelity;
    }
  }
  return mass > 0.0 ? acc / mass : 0.0;
}

FidelityDistribution nested_distill(double fidelity, int links, DistillPolicy policy) {
  check_unit(fidelity, "nested_distill: fidelity");
  if (links < 0) throw std::domain_error("nested_distill: negative link count");
  FidelityDistribution out;
  if (policy == DistillPolicy::None) {
    out.add(links >= 1 ? fidelity : 0.0, 1.0);
    return out;
  }
  distill_level(fidelity, links, 0.0, 1.0, policy, out);
  return out;
}

double simulate_nested_distill(double fidelity, int links, DistillPolicy policy,
                               const std::function<double()>& uniform) {
  if (policy == DistillPolicy::None) return links >= 1 ? fidelity : 0.0;
  double fallback = 0.0;
  for (;;) {
    if (links == 0) return fallback;
    if (links == 1 || fidelity <= 0.5) return fidelity;
    if (policy == DistillPolicy::Keep && links % 2 == 1) fallback = fidelity;
    const DistillStep step = distill_pair(fidelity, fidelity);
    int successes = 0;
    for (int pair = 0; pair < links / 2; ++pair) {
      if (uniform() < step.success_prob) ++successes;
    }
    links = successes;
    fidelity = step.out_fidelity;
  }
}

std::vector<double> link_count_distribution(double p, int k) {
  check_unit(p, "link_count_distribution: p");
  if (k < 1) throw std::domain_error("link_count_distribution: k must be at least 1");
  std::vector<double> out(static_cast<std::size_t>(k) + 1);
  for (int l = 0; l <= k; ++l) out[l] = binom(k, l) * std::pow(p, l) * std::pow(1.0 - p, k - l);
  return out;
}

FidelityDistribution sensor_fidelity_distribution(double p, int k, double fidelity, DistillPolicy policy) {
  const std::vector<double> counts = link_count_distribution(p, k);
  FidelityDistribution out;
  for (int l = 0; l <= k; ++l) {
    if (counts[l] == 0.0) continue;
    const FidelityDistribution level = nested_distill(fidelity, l, policy);
    for (const auto& o : level.outcomes()) out.add(o.fidelity, counts[l] * o.probability);
  }
  return out;
}

double distilled_snapshot_qfi(std::span<const double> fidelities, const EigenSpec& eig) {
  const int s = static_cast<int>(fidelities.size());
  if (s < 1) throw std::domain_error("distilled_snapshot_qfi: no sensors");
  std::vector<double> xs;
  for (double f : fidelities) {
    if (f > 0.5) xs.push_back(werner_param_from_fidelity(f));
  }
  double total = s;
  const int n = static_cast<int>(xs.size());
  if (n >= 2) total += group_gain(coefficient_C(std::span<const double>(xs), n), n);
  return eig.gap_squared() * total / (static_cast<double>(s) * s);
}

AvgQfiEstimate ftmbl_distilled_avg_qfi(const NetworkConfig& cfg, int k, DistillPolicy policy, DistillMethod method,
                                       const MonteCarloOptions& mc) {
  cfg.validate();
  if (k < 1) throw std::domain_error("ftmbl_distilled_avg_qfi: k must be at least 1");
  if (method == DistillMethod::MonteCarlo) {
    return monte_carlo_avg_qfi(cfg, ProtocolSpec::fixed(k, policy), PartitionPolicy::Maximal, mc);
  }
  if (cfg.sensors > kMaxEnumerationSensors || k > kMaxEnumerationBlock) {
    throw SizeError("ftmbl_distilled_avg_qfi: enumeration is limited to S <= " +
                    std::to_string(kMaxEnumerationSensors) + " and k <= " + std::to_string(kMaxEnumerationBlock) +
                    "; use DistillMethod::MonteCarlo");
  }
  const FidelityDistribution dist = sensor_fidelity_distribution(cfg.p, k, cfg.fidelity, policy);
  const auto alphabet = dist.outcomes();
  const int r = static_cast<int>(alphabet.size());
  const int s = cfg.sensors;

  // Sum over count vectors c (c_i sensors hold outcome i) with multinomial weights.
  std::vector<int> counts(static_cast<std::size_t>(r), 0);
  std::vector<double> fids;
  double block = 0.0;
  std::function<void(int, int)> visit = [&](int i, int left) {
    if (i == r - 1) {
      counts[i] = left;
      double w = 1.0;
      int remaining = s;
      fids.clear();
      for (int a = 0; a < r; ++a) {
        w *= binom(remaining, counts[a]) * std::pow(alphabet[a].probability, counts[a]);
        remaining -= counts[a];
        fids.insert(fids.end(), static_cast<std::size_t>(counts[a]), alphabet[a].fidelity);
      }
      if (w > 0.0) block += w * distilled_snapshot_qfi(fids, cfg.eig);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[i] = c;
      visit(i + 1, left - c);
    }
  };
  visit(0, s);

  AvgQfiEstimate est;
  est.method = EstimateMethod::ClosedForm;
  est.mean = ((k - 1) * cfg.local_qfi() + block) / k;
  return est;
}

}  // namespace entnet
