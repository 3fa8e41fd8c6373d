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

#include "entnet/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "entnet/errors.hpp"
#include "entnet/partition_opt.hpp"
#include "entnet/qfi_core.hpp"

namespace entnet {
namespace {

long double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  k = std::min(k, n - k);
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error(std::string(what) + ": probability must lie in [0, 1], got " + std::to_string(p));
  }
}

// 1 - (1-p)^k without cancellation for small p.
double at_least_one(double p, int k) { return p >= 1.0 ? 1.0 : -std::expm1(k * std::log1p(-p)); }

// sum_{s>=1} y^s / (s+1) = -ln(1-y)/y - 1
long double tail_harmonic(long double y) {
  if (y <= 0.0L) return 0.0L;
  if (y < 1e-3L) {
    long double sum = 0.0L, term = 1.0L;
    for (int s = 1; s <= 12; ++s) {
      term *= y;
      sum += term / (s + 1);
    }
    return sum;
  }
  return -std::log1p(-y) / y - 1.0L;
}

void check_mu(int sensors, int mu) {
  if (mu < 0 || mu > sensors) {
    throw std::domain_error("V-TMBL threshold mu must lie in [0, S], got " + std::to_string(mu));
  }
}

}  // namespace

void NetworkConfig::validate() const {
  if (sensors < 2) throw std::domain_error("NetworkConfig: need at least two sensors");
  check_probability(p, "NetworkConfig");
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
    throw std::domain_error("NetworkConfig: fidelity must lie in [0, 1]");
  }
}

double NetworkConfig::local_qfi() const { return eig.gap_squared() / sensors; }

void ProtocolSpec::validate(int sensors) const {
  if (kind == ProtocolKind::FixedTMBL && k < 1) {
    throw std::domain_error("F-TMBL block length k must be at least 1");
  }
  if (kind == ProtocolKind::VariableTMBL) {
    check_mu(sensors, mu);
    if (distill != DistillPolicy::None) {
      throw std::invalid_argument("distillation is not defined for V-TMBL");
    }
  }
}

std::string ProtocolSpec::to_string() const {
  std::ostringstream out;
  switch (kind) {
    case ProtocolKind::Immediate: out << "immediate"; break;
    case ProtocolKind::FixedTMBL: out << "ftmbl(k=" << k << ")"; break;
    case ProtocolKind::VariableTMBL: out << "vtmbl(mu=" << mu << ")"; break;
  }
  if (distill == DistillPolicy::Discard) out << "+discard";
  if (distill == DistillPolicy::Keep) out << "+keep";
  return out.str();
}

std::vector<double> snapshot_distribution(int sensors, double p_eff) {
  if (sensors < 0) throw std::domain_error("snapshot_distribution: negative sensor count");
  check_probability(p_eff, "snapshot_distribution");
  std::vector<double> out(static_cast<std::size_t>(sensors) + 1);
  for (int m = 0; m <= sensors; ++m) {
    out[m] = static_cast<double>(binom(sensors, m) * std::pow(static_cast<long double>(p_eff), m) *
                                 std::pow(1.0L - p_eff, sensors - m));
  }
  return out;
}

std::vector<double> snapshot_qfi_table(const NetworkConfig& cfg, PartitionPolicy policy) {
  cfg.validate();
  const int s = cfg.sensors;
  std::vector<double> table(static_cast<std::size_t>(s) + 1, cfg.local_qfi());
  for (int m = 2; m <= s; ++m) {
    if (policy == PartitionPolicy::Maximal) {
      table[m] = snapshot_qfi_werner(GhzPartition({m}, s), cfg.fidelity, cfg.eig);
    } else if (m <= kMaxExhaustiveLinks) {
      table[m] = optimal_partition(m, s, cfg.fidelity, cfg.eig).qfi;
    } else {
      table[m] = heuristic_partition(m, cfg.fidelity, s, cfg.eig).qfi;
    }
  }
  return table;
}

AvgQfiEstimate immediate_avg_qfi(const NetworkConfig& cfg, PartitionPolicy policy) {
  return ftmbl_avg_qfi(cfg, 1, policy);
}

AvgQfiEstimate ftmbl_avg_qfi(const NetworkConfig& cfg, int k, PartitionPolicy policy) {
  cfg.validate();
  if (k < 1) throw std::domain_error("ftmbl_avg_qfi: k must be at least 1");
  const double p_eff = at_least_one(cfg.p, k);
  AvgQfiEstimate est;
  est.method = EstimateMethod::ClosedForm;
  if (cfg.fidelity == 1.0 && policy == PartitionPolicy::Maximal) {
    est.mean = cfg.local_qfi() * (1.0 + (cfg.sensors - 1) * p_eff * p_eff / k);
    return est;
  }
  const std::vector<double> probs = snapshot_distribution(cfg.sensors, p_eff);
  const std::vector<double> table = snapshot_qfi_table(cfg, policy);
  double block = 0.0;
  for (std::size_t m = 0; m < probs.size(); ++m) block += probs[m] * table[m];
  est.mean = ((k - 1) * cfg.local_qfi() + block) / k;
  return est;
}

int ftmbl_k_opt(double p, int k_max) {
  check_probability(p, "ftmbl_k_opt");
  if (k_max < 1) throw std::domain_error("ftmbl_k_opt: k_max must be at least 1");
  int best = 1;
  double best_val = p * p;
  for (int k = 2; k <= k_max; ++k) {
    const double q = at_least_one(p, k);
    const double val = q * q / k;
    if (val > best_val) {
      best = k;
      best_val = val;
    }
  }
  return best;
}

double vtmbl_joint_prob(int sensors, double p, int mu, int t, int m) {
  check_probability(p, "vtmbl_joint_prob");
  check_mu(sensors, mu);
  if (t < 1) throw std::domain_error("vtmbl_joint_prob: t must be at least 1");
  if (m < mu || m > sensors) {
    throw std::domain_error("vtmbl_joint_prob: need mu <= m <= S, got m = " + std::to_string(m));
  }
  const long double pl = p, q = 1.0L - pl;
  const long double first = binom(sensors, m) * std::pow(pl, m) * std::pow(q, sensors - m);
  if (t == 1) return static_cast<double>(first);
  if (mu == 0) return 0.0;
  // m - j links were present after t-1 slots (fewer than mu); the other j arrive at slot t.
  const long double q_prev = std::pow(q, t - 1);
  long double sum = 0.0L;
  for (int j = std::max(1, m - mu + 1); j <= m; ++j) {
    sum += binom(m, j) * std::pow(1.0L - q_prev, m - j) * std::pow(q_prev * pl, j);
  }
  return static_cast<double>(binom(sensors, m) * sum * std::pow(q, static_cast<long double>(t) * (sensors - m)));
}

double vtmbl_survival(int sensors, double p, int mu, std::int64_t t) {
  check_probability(p, "vtmbl_survival");
  check_mu(sensors, mu);
  if (t <= 0) return 1.0;
  const long double q_t = std::pow(1.0L - p, static_cast<long double>(t));
  long double sum = 0.0L;
  for (int i = 0; i < mu; ++i) sum += binom(sensors, i) * std::pow(1.0L - q_t, i) * std::pow(q_t, sensors - i);
  return static_cast<double>(sum);
}

namespace {

AvgQfiEstimate vtmbl_series(const NetworkConfig& cfg, int mu, const VtmblOptions& opt,
                            const std::vector<double>& table) {
  const double f0 = cfg.local_qfi();
  long double num = 0.0L, den = 0.0L, block = 0.0L;
  double prev_surv = 1.0;
  std::int64_t t = 1;
  for (;; ++t) {
    for (int m = mu; m <= cfg.sensors; ++m) {
      const long double pr = vtmbl_joint_prob(cfg.sensors, cfg.p, mu, static_cast<int>(t), m);
      const long double reward = (t - 1) * static_cast<long double>(f0) + table[m];
      num += pr * reward;
      den += pr * t;
      block += pr * reward / t;
    }
    const double surv = vtmbl_survival(cfg.sensors, cfg.p, mu, t);
    // Geometric tail estimate of E[T; T > t].
    const double ratio = prev_surv > 0.0 ? surv / prev_surv : 0.0;
    const double tail = ratio < 1.0 ? surv * (static_cast<double>(t) + 1.0 / (1.0 - ratio)) : surv * 1e300;
    if (surv == 0.0 || tail < opt.tail_tolerance) break;
    if (t >= kMaxSeriesSlots) {
      std::ostringstream msg;
      msg << "V-TMBL series did not converge by t = " << kMaxSeriesSlots << " (S=" << cfg.sensors << ", p=" << cfg.p
          << ", mu=" << mu << ", tail=" << tail << ")";
      throw ConvergenceError(msg.str());
    }
    prev_surv = surv;
  }
  AvgQfiEstimate est;
  est.method = EstimateMethod::TruncatedSeries;
  est.series_terms = t;
  est.mean = static_cast<double>(opt.averaging == VtmblAveraging::TimeAverage ? num / den : block);
  return est;
}

AvgQfiEstimate vtmbl_closed(const NetworkConfig& cfg, int mu, const VtmblOptions& opt,
                            const std::vector<double>& table) {
  const int s = cfg.sensors;
  const long double f0 = cfg.local_qfi();
  const long double pl = cfg.p, q = 1.0L - pl;
  AvgQfiEstimate est;
  est.method = EstimateMethod::ClosedForm;
  if (mu == 0) {
    const std::vector<double> probs = snapshot_distribution(s, cfg.p);
    long double acc = f0;
    for (int m = 0; m <= s; ++m) acc += (table[m] - f0) * probs[m];
    est.mean = static_cast<double>(acc);
    return est;
  }
  const bool time_avg = opt.averaging == VtmblAveraging::TimeAverage;
  long double acc = 0.0L;
  for (int m = mu; m <= s; ++m) {
    // P(M = m) for the time average, E[1{M = m} / T] for the block average.
    long double weight = binom(s, m) * std::pow(pl, m) * std::pow(q, s - m);
    long double later = 0.0L;
    for (int j = m - mu + 1; j <= m; ++j) {
      long double inner = 0.0L;
      for (int l = 0; l <= m - j; ++l) {
        const long double y = std::pow(q, s - m + j + l);
        const long double g = time_avg ? (y < 1.0L ? y / (1.0L - y) : 0.0L) : tail_harmonic(y);
        inner += ((l % 2) ? -1.0L : 1.0L) * binom(m - j, l) * g;
      }
      later += binom(m, j) * std::pow(pl, j) * inner;
    }
    weight += binom(s, m) * std::pow(q, s - m) * later;
    acc += (table[m] - f0) * weight;
  }
  if (time_avg) {
    long double expected_t = 0.0L;
    for (int i = 0; i < mu; ++i) {
      for (int l = 0; l <= i; ++l) {
        const long double y = std::pow(q, s - i + l);
        expected_t += binom(s, i) * ((l % 2) ? -1.0L : 1.0L) * binom(i, l) / (1.0L - y);
      }
    }
    acc /= expected_t;
  }
  est.mean = static_cast<double>(f0 + acc);
  return est;
}

}  // namespace

AvgQfiEstimate vtmbl_avg_qfi(const NetworkConfig& cfg, int mu, EstimateMethod method, const VtmblOptions& options) {
  cfg.validate();
  check_mu(cfg.sensors, mu);
  if (method == EstimateMethod::MonteCarlo) {
    MonteCarloOptions mc;
    mc.trials = options.trials;
    mc.seed = options.seed;
    mc.threads = options.threads;
    mc.averaging = options.averaging;
    return monte_carlo_avg_qfi(cfg, ProtocolSpec::variable(mu), options.policy, mc);
  }
  if (cfg.p == 0.0) {
    // No link ever arrives: every slot senses locally.
    AvgQfiEstimate est;
    est.method = method;
    est.mean = cfg.local_qfi();
    return est;
  }
  const std::vector<double> table = snapshot_qfi_table(cfg, options.policy);
  if (method == EstimateMethod::ClosedForm) return vtmbl_closed(cfg, mu, options, table);
  return vtmbl_series(cfg, mu, options, table);
}

int vtmbl_mu_opt(const NetworkConfig& cfg, const VtmblOptions& options) {
  cfg.validate();
  int best = 2;
  double best_val = vtmbl_avg_qfi(cfg, 2, EstimateMethod::TruncatedSeries, options).mean;
  for (int mu = 3; mu <= cfg.sensors; ++mu) {
    const double val = vtmbl_avg_qfi(cfg, mu, EstimateMethod::TruncatedSeries, options).mean;
    if (val > best_val * (1.0 + 1e-12)) {
      best = mu;
      best_val = val;
    }
  }
  return best;
}

int vtmbl_mu_opt(int sensors, double p) {
  NetworkConfig cfg;
  cfg.sensors = sensors;
  cfg.p = p;
  return vtmbl_mu_opt(cfg);
}

double qfi_upper_bound(int sensors, double p) {
  if (sensors < 1) throw std::domain_error("qfi_upper_bound: need at least one sensor");
  check_probability(p, "qfi_upper_bound");
  return (sensors - 1) * p / sensors + 1.0 / sensors;
}

}  // namespace entnet
