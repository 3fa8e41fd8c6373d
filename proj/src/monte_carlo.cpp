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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "entnet/distillation.hpp"
#include "entnet/errors.hpp"
#include "entnet/parallel.hpp"
#include "entnet/protocols.hpp"
#include "entnet/rng.hpp"

namespace entnet {
namespace {

constexpr std::int64_t kChunk = 1024;
constexpr std::int64_t kMaxBlockSlots = 10000000;
constexpr std::uint64_t kDistillStream = 1;

struct BlockOutcome {
  double slots = 1.0;
  double reward = 0.0;
};

// Sums over trials of weight w = slots and d = reward / slots - shift.
struct Moments {
  double n = 0, sw = 0, swd = 0, sw2d = 0, sw2d2 = 0, sw2 = 0, sd = 0, sd2 = 0;

  void add(double w, double d) {
    n += 1;
    sw += w;
    swd += w * d;
    sw2d += w * w * d;
    sw2d2 += w * w * d * d;
    sw2 += w * w;
    sd += d;
    sd2 += d * d;
  }
  Moments& operator+=(const Moments& o) {
    n += o.n;
    sw += o.sw;
    swd += o.swd;
    sw2d += o.sw2d;
    sw2d2 += o.sw2d2;
    sw2 += o.sw2;
    sd += o.sd;
    sd2 += o.sd2;
    return *this;
  }
};

class BlockSimulator {
 public:
  BlockSimulator(const NetworkConfig& cfg, const ProtocolSpec& spec, PartitionPolicy policy, std::uint64_t seed)
      : cfg_(cfg), spec_(spec), rng_(seed), f0_(cfg.local_qfi()) {
    if (spec.distill == DistillPolicy::None) table_ = snapshot_qfi_table(cfg, policy);
  }

  BlockOutcome run(std::uint64_t trial) const {
    return spec_.kind == ProtocolKind::VariableTMBL ? run_variable(trial) : run_fixed(trial);
  }

 private:
  BlockOutcome run_fixed(std::uint64_t trial) const {
    const int k = spec_.block_length();
    const double p = cfg_.p;
    BlockOutcome out;
    out.slots = k;
    if (spec_.distill == DistillPolicy::None) {
      // Only the most recent link is kept, so a sensor contributes once it succeeds in any slot.
      int m = 0;
      for (int s = 0; s < cfg_.sensors; ++s) {
        for (int slot = 0; slot < k; ++slot) {
          if (rng_.uniform(trial, slot, s) < p) {
            ++m;
            break;
          }
        }
      }
      out.reward = (k - 1) * f0_ + table_[m];
      return out;
    }
    std::vector<double> fids(static_cast<std::size_t>(cfg_.sensors));
    for (int s = 0; s < cfg_.sensors; ++s) {
      int links = 0;
      for (int slot = 0; slot < k; ++slot) links += rng_.uniform(trial, slot, s) < p ? 1 : 0;
      std::uint64_t attempt = 0;
      fids[s] = simulate_nested_distill(cfg_.fidelity, links, spec_.distill,
                                        [&] { return rng_.uniform(trial, attempt++, s, kDistillStream); });
    }
    out.reward = (k - 1) * f0_ + distilled_snapshot_qfi(fids, cfg_.eig);
    return out;
  }

  BlockOutcome run_variable(std::uint64_t trial) const {
    std::vector<char> holding(static_cast<std::size_t>(cfg_.sensors), 0);
    int m = 0;
    std::int64_t t = 0;
    for (;;) {
      ++t;
      for (int s = 0; s < cfg_.sensors; ++s) {
        if (!holding[s] && rng_.uniform(trial, static_cast<std::uint64_t>(t - 1), s) < cfg_.p) {
          holding[s] = 1;
          ++m;
        }
      }
      if (m >= spec_.mu) break;
      if (t >= kMaxBlockSlots) throw ConvergenceError("V-TMBL block exceeded the slot limit in simulation");
    }
    // After the GHZ probe is used the memories are cleared, which is a fresh trial.
    return {static_cast<double>(t), (t - 1) * f0_ + table_[m]};
  }

  const NetworkConfig& cfg_;
  const ProtocolSpec& spec_;
  CounterRng rng_;
  double f0_;
  std::vector<double> table_;
};

}  // namespace

AvgQfiEstimate monte_carlo_avg_qfi(const NetworkConfig& cfg, const ProtocolSpec& spec, PartitionPolicy policy,
                                   const MonteCarloOptions& options) {
  cfg.validate();
  spec.validate(cfg.sensors);
  if (options.trials < 1) throw std::domain_error("monte_carlo_avg_qfi: trials must be at least 1");
  if (spec.distill != DistillPolicy::None && policy == PartitionPolicy::Optimal) {
    throw std::invalid_argument(
        "monte_carlo_avg_qfi: distillation yields mixed fidelities; only the maximal GHZ policy is supported");
  }
  AvgQfiEstimate est;
  est.method = EstimateMethod::MonteCarlo;
  est.trials = options.trials;
  est.seed = options.seed;
  if (cfg.p == 0.0) {
    est.mean = cfg.local_qfi();
    return est;
  }

  const BlockSimulator sim(cfg, spec, policy, options.seed);
  const BlockOutcome first = sim.run(0);
  const double shift = first.reward / first.slots;

  const std::int64_t chunks = (options.trials + kChunk - 1) / kChunk;
  std::vector<Moments> partial(static_cast<std::size_t>(chunks));
  parallel_for(static_cast<std::size_t>(chunks), options.threads, [&](std::size_t c) {
    const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t end = std::min(options.trials, begin + kChunk);
    Moments acc;
    for (std::int64_t i = begin; i < end; ++i) {
      const BlockOutcome b = i == 0 ? first : sim.run(static_cast<std::uint64_t>(i));
      acc.add(b.slots, b.reward / b.slots - shift);
    }
    partial[c] = acc;
  });
  // Fixed pairwise tree over chunk indices keeps the sum independent of scheduling.
  while (partial.size() > 1) {
    std::vector<Moments> next((partial.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = partial[2 * i];
      if (2 * i + 1 < partial.size()) next[i] += partial[2 * i + 1];
    }
    partial = std::move(next);
  }
  const Moments& m = partial.front();

  if (options.averaging == VtmblAveraging::TimeAverage) {
    const double dbar = m.swd / m.sw;
    est.mean = shift + dbar;
    if (m.n > 1) {
      const double spread = std::max(0.0, m.sw2d2 - 2.0 * dbar * m.sw2d + dbar * dbar * m.sw2);
      est.std_error = std::sqrt(m.n / (m.n - 1) * spread) / m.sw;
    }
  } else {
    est.mean = shift + m.sd / m.n;
    if (m.n > 1) {
      const double var = std::max(0.0, (m.sd2 - m.sd * m.sd / m.n) / (m.n - 1));
      est.std_error = std::sqrt(var / m.n);
    }
  }
  return est;
}

}  // namespace entnet
