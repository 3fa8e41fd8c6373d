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
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cli.hpp"
#include "entnet/distillation.hpp"
#include "entnet/measurements.hpp"
#include "entnet/partition_opt.hpp"
#include "entnet/protocols.hpp"
#include "entnet/qfi_core.hpp"
#include "entnet/thresholds.hpp"
#include "sweep.hpp"

namespace entnet::cli {
namespace {

using Params = std::vector<std::pair<std::string, std::string>>;

NetworkConfig network(int sensors, double p, double fidelity) {
  NetworkConfig cfg;
  cfg.sensors = sensors;
  cfg.p = p;
  cfg.fidelity = fidelity;
  return cfg;
}

MonteCarloOptions single_thread_mc(std::int64_t trials, std::uint64_t seed) {
  MonteCarloOptions mc;
  mc.trials = trials;
  mc.seed = seed;
  mc.threads = 1;
  return mc;
}

std::int64_t trials_or(const ReproduceOptions& o, std::int64_t fallback) { return o.trials > 0 ? o.trials : fallback; }

std::vector<GhzPartition> five_sensor_probes(bool with_local) {
  std::vector<GhzPartition> out;
  for (const auto& p : enumerate_partitions(5)) {
    if (with_local || p.group_count() > 0) out.push_back(p.with_total_sensors(5));
  }
  return out;
}

void fig2(const ReproduceOptions& o, std::ostream& os) {
  const std::vector<int> ks{1, 2, 3, 5, 10};
  const auto ps = inclusive_range(0.0, 0.02, 1.0);
  const auto trials = trials_or(o, 20000);
  CsvWriter csv(os);
  csv.metadata("reproduce fig2", {{"S", "5"}, {"F", "1"}, {"k", join(ks)}, {"p", "0:0.02:1"},
                                  {"trials", fmt(static_cast<long long>(trials))}, {"seed", std::to_string(o.seed)}});
  csv.header({"k", "p", "avg_qfi", "mc_avg_qfi", "mc_std_error", "local_qfi"});
  csv.rows(compute_rows(ks.size() * ps.size(), o.threads, [&](std::size_t i) {
    const int k = ks[i / ps.size()];
    const double p = ps[i % ps.size()];
    const auto cfg = network(5, p, 1.0);
    const auto mc = monte_carlo_avg_qfi(cfg, ProtocolSpec::fixed(k), PartitionPolicy::Maximal,
                                        single_thread_mc(trials, o.seed));
    return Row{fmt(k), fmt(p), fmt(ftmbl_avg_qfi(cfg, k).mean), fmt(mc.mean), fmt(mc.std_error), fmt(cfg.local_qfi())};
  }));
}

void fig3a(const ReproduceOptions& o, std::ostream& os) {
  const std::vector<double> ps{0.1, 0.3, 0.5, 0.7, 0.9, 0.95};
  const int s_min = 2, s_max = 20;
  const std::size_t per_p = s_max - s_min + 1;
  std::vector<int> mu(ps.size() * per_p);
  const auto rows = compute_rows(mu.size(), o.threads, [&](std::size_t i) {
    const double p = ps[i / per_p];
    const int s = s_min + static_cast<int>(i % per_p);
    const auto cfg = network(s, p, 1.0);
    mu[i] = vtmbl_mu_opt(cfg);
    return Row{fmt(p), fmt(s), fmt(mu[i]), fmt(vtmbl_avg_qfi(cfg, mu[i], EstimateMethod::TruncatedSeries).mean)};
  });

  // Least-squares trend line over p < 0.9.
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (ps[i / per_p] >= 0.9) continue;
    const double x = s_min + static_cast<double>(i % per_p), y = mu[i];
    n += 1;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;

  CsvWriter csv(os);
  csv.metadata("reproduce fig3a", {{"S", "2..20"}, {"p", join(ps)}, {"F", "1"}, {"averaging", "time"},
                                   {"trend_slope", fmt(slope)}, {"trend_intercept", fmt(intercept)}});
  csv.header({"p", "S", "mu_opt", "vtmbl_avg_qfi"});
  csv.rows(rows);
}

void fig3bc(int sensors, const char* id, const ReproduceOptions& o, std::ostream& os) {
  const auto ps = inclusive_range(0.05, 0.05, 1.0);
  const auto trials = trials_or(o, 20000);
  CsvWriter csv(os);
  csv.metadata(std::string("reproduce ") + id,
               {{"S", fmt(sensors)}, {"F", "1"}, {"p", "0.05:0.05:1"}, {"averaging", "time"},
                {"trials", fmt(static_cast<long long>(trials))}, {"seed", std::to_string(o.seed)}});
  csv.header({"p", "k_opt", "ftmbl", "mu_opt", "vtmbl", "vtmbl_mc", "vtmbl_mc_std_error", "immediate", "bound"});
  csv.rows(compute_rows(ps.size(), o.threads, [&](std::size_t i) {
    const double p = ps[i];
    const auto cfg = network(sensors, p, 1.0);
    const int k = ftmbl_k_opt(p);
    const int mu = vtmbl_mu_opt(cfg);
    const auto mc = monte_carlo_avg_qfi(cfg, ProtocolSpec::variable(mu), PartitionPolicy::Maximal,
                                        single_thread_mc(trials, o.seed));
    return Row{fmt(p),
               fmt(k),
               fmt(ftmbl_avg_qfi(cfg, k).mean),
               fmt(mu),
               fmt(vtmbl_avg_qfi(cfg, mu, EstimateMethod::TruncatedSeries).mean),
               fmt(mc.mean),
               fmt(mc.std_error),
               fmt(immediate_avg_qfi(cfg).mean),
               fmt(qfi_upper_bound(sensors, p))};
  }));
}

void fig4(const ReproduceOptions& o, std::ostream& os) {
  const auto probes = five_sensor_probes(true);
  const auto fs = inclusive_range(0.8, 0.002, 1.0);
  CsvWriter csv(os);
  csv.metadata("reproduce fig4", {{"S", "5"}, {"m", "5"}, {"F", "0.8:0.002:1"}});
  csv.header({"F", "partition", "qfi", "optimal"});
  csv.rows(compute_rows(fs.size() * probes.size(), o.threads, [&](std::size_t i) {
    const double f = fs[i / probes.size()];
    const GhzPartition& part = probes[i % probes.size()];
    const bool best = optimal_partition(5, 5, f).best == part;
    return Row{fmt(f), part.to_string(), fmt(snapshot_qfi_werner(part, f)), best ? "1" : "0"};
  }));
}

void fig5(const ReproduceOptions& o, std::ostream& os) {
  CsvWriter csv(os);
  csv.metadata("reproduce fig5", {{"n", "2..20"}});
  csv.header({"n", "x_thres", "F_thres", "residual"});
  csv.rows(compute_rows(19, o.threads, [](std::size_t i) {
    const auto t = solve_threshold(static_cast<int>(i) + 2);
    return Row{fmt(t.n), fmt(t.x_thres), fmt(t.f_thres), fmt(t.residual)};
  }));
}

// k x p x F grid shared by both panels of fig6.
void fig6(const char* id, const ReproduceOptions& o, std::ostream& os,
          const std::function<double(const NetworkConfig&, int)>& avg, const char* measurement) {
  const auto ps = inclusive_range(0.05, 0.05, 1.0);
  const auto fs = inclusive_range(0.5, 0.02, 1.0);
  const int k_max = 4;
  CsvWriter csv(os);
  csv.metadata(std::string("reproduce ") + id, {{"S", "5"}, {"k", "1..4"}, {"p", "0.05:0.05:1"}, {"F", "0.5:0.02:1"},
                                                {"measurement", measurement}});
  csv.header({"k", "p", "F", "avg_qfi"});
  const std::size_t per_k = ps.size() * fs.size();
  csv.rows(compute_rows(k_max * per_k, o.threads, [&](std::size_t i) {
    const int k = 1 + static_cast<int>(i / per_k);
    const double p = ps[(i % per_k) / fs.size()];
    const double f = fs[i % fs.size()];
    return Row{fmt(k), fmt(p), fmt(f), fmt(avg(network(5, p, f), k))};
  }));
}

void fig7a(const ReproduceOptions& o, std::ostream& os) {
  const auto probes = five_sensor_probes(false);
  const auto fs = inclusive_range(0.8, 0.002, 1.0);
  CsvWriter csv(os);
  csv.metadata("reproduce fig7a", {{"S", "5"}, {"F", "0.8:0.002:1"}, {"cfi", "max_over_phases"}});
  csv.header({"F", "partition", "qfi", "cfi_max", "local_qfi"});
  csv.rows(compute_rows(fs.size() * probes.size(), o.threads, [&](std::size_t i) {
    const double f = fs[i / probes.size()];
    const GhzPartition& part = probes[i % probes.size()];
    std::vector<std::vector<double>> xs;
    for (int n : part.sizes()) xs.emplace_back(static_cast<std::size_t>(n), werner_param_from_fidelity(f));
    return Row{fmt(f), part.to_string(), fmt(snapshot_qfi_werner(part, f)), fmt(local_cfi_max(part, xs)),
               fmt(0.2)};
  }));
}

void fig7b(const ReproduceOptions& o, std::ostream& os) {
  const auto probes = five_sensor_probes(false);
  const auto fs = inclusive_range(0.5, 0.005, 1.0);
  CsvWriter csv(os);
  csv.metadata("reproduce fig7b", {{"S", "5"}, {"F", "0.5:0.005:1"}, {"cfi", "max_over_phases"}});
  csv.header({"F", "partition", "cfi_qfi_ratio", "cfi_threshold"});
  csv.rows(compute_rows(fs.size() * probes.size(), o.threads, [&](std::size_t i) {
    const double f = fs[i / probes.size()];
    const GhzPartition& part = probes[i % probes.size()];
    std::vector<std::vector<double>> xs;
    for (int n : part.sizes()) xs.emplace_back(static_cast<std::size_t>(n), werner_param_from_fidelity(f));
    const double qfi = snapshot_qfi_werner(part, f);
    const std::string ratio = qfi > 0.0 ? fmt(local_cfi_max(part, xs) / qfi) : "";
    const std::string threshold = part.group_count() == 1 ? fmt(cfi_threshold(part.size(0))) : "";
    return Row{fmt(f), part.to_string(), ratio, threshold};
  }));
}

void fig9(const ReproduceOptions& o, std::ostream& os) {
  const std::vector<int> k_caps{3, 4};
  const auto ps = inclusive_range(0.05, 0.05, 1.0);
  const auto fs = inclusive_range(0.5, 0.01, 1.0);
  CsvWriter csv(os);
  csv.metadata("reproduce fig9", {{"S", "5"}, {"k_max", join(k_caps)}, {"p", "0.05:0.05:1"}, {"F", "0.5:0.01:1"},
                                  {"none", "optimal_partition"}, {"discard_keep", "maximal_ghz"}});
  csv.header({"k_max", "p", "F", "none", "k_none", "discard", "k_discard", "keep", "k_keep", "best"});
  const std::size_t per_cap = ps.size() * fs.size();
  csv.rows(compute_rows(k_caps.size() * per_cap, o.threads, [&](std::size_t i) {
    const int cap = k_caps[i / per_cap];
    const double p = ps[(i % per_cap) / fs.size()];
    const double f = fs[i % fs.size()];
    const auto cfg = network(5, p, f);
    const DistillPolicy policies[3] = {DistillPolicy::None, DistillPolicy::Discard, DistillPolicy::Keep};
    const char* names[3] = {"none", "discard", "keep"};
    double best[3];
    int best_k[3];
    for (int j = 0; j < 3; ++j) {
      best[j] = -1.0;
      best_k[j] = 1;
      for (int k = 1; k <= cap; ++k) {
        const double v = policies[j] == DistillPolicy::None
                             ? ftmbl_avg_qfi(cfg, k, PartitionPolicy::Optimal).mean
                             : ftmbl_distilled_avg_qfi(cfg, k, policies[j], DistillMethod::Enumeration).mean;
        if (v > best[j] * (1.0 + 1e-12)) {
          best[j] = v;
          best_k[j] = k;
        }
      }
    }
    int winner = 0;
    for (int j = 1; j < 3; ++j) {
      if (best[j] > best[winner] * (1.0 + 1e-12)) winner = j;
    }
    return Row{fmt(cap),     fmt(p),         fmt(f),       fmt(best[0]), fmt(best_k[0]),
               fmt(best[1]), fmt(best_k[1]), fmt(best[2]), fmt(best_k[2]), names[winner]};
  }));
}

void table1(const ReproduceOptions& o, std::ostream& os) {
  // One representative fidelity per region, midway between neighbouring crossovers.
  const double reps[6] = {solve_threshold(3).f_thres - 0.01, 0.84537, 0.854, 0.86251, 0.87173, 0.93812};
  const char* regions[6] = {"I", "II", "III", "IV", "V", "VI"};
  CsvWriter csv(os);
  csv.metadata("reproduce table1", {{"S", "5"}, {"m", "2..5"}});
  csv.header({"region", "F", "m", "partition", "qfi"});
  csv.rows(compute_rows(6 * 4, o.threads, [&](std::size_t i) {
    const int region = static_cast<int>(i / 4);
    const int m = 2 + static_cast<int>(i % 4);
    const auto r = optimal_partition(m, 5, reps[region]);
    return Row{regions[region], fmt(reps[region]), fmt(m), r.best.to_string(), fmt(r.qfi)};
  }));
}

void table2(const ReproduceOptions& o, std::ostream& os) {
  const std::vector<int> ms{10, 15, 20};
  const std::vector<double> fs{0.845, 0.86, 0.88, 0.90, 0.92, 0.94, 0.96, 0.98, 1.0};
  CsvWriter csv(os);
  csv.metadata("reproduce table2", {{"m", join(ms)}, {"F", join(fs)}, {"search", "exhaustive"}});
  csv.header({"m", "F", "partition", "qfi", "candidates"});
  csv.rows(compute_rows(ms.size() * fs.size(), o.threads, [&](std::size_t i) {
    const int m = ms[i / fs.size()];
    const double f = fs[i % fs.size()];
    const auto r = optimal_partition(m, m, f);
    return Row{fmt(m), fmt(f), r.best.to_string(), fmt(r.qfi), fmt(static_cast<long long>(r.candidates_evaluated))};
  }));
}

using Handler = std::function<void(const ReproduceOptions&, std::ostream&)>;

const std::map<std::string, Handler, std::less<>>& handlers() {
  static const std::map<std::string, Handler, std::less<>> table{
      {"fig2", fig2},
      {"fig3a", fig3a},
      {"fig3b", [](const ReproduceOptions& o, std::ostream& os) { fig3bc(5, "fig3b", o, os); }},
      {"fig3c", [](const ReproduceOptions& o, std::ostream& os) { fig3bc(10, "fig3c", o, os); }},
      {"fig4", fig4},
      {"fig5", fig5},
      {"fig6a",
       [](const ReproduceOptions& o, std::ostream& os) {
         fig6("fig6a", o, os,
              [](const NetworkConfig& c, int k) { return ftmbl_avg_qfi(c, k, PartitionPolicy::Optimal).mean; },
              "optimal_partition");
       }},
      {"fig6b",
       [](const ReproduceOptions& o, std::ostream& os) {
         fig6("fig6b", o, os,
              [](const NetworkConfig& c, int k) {
                return ftmbl_distilled_avg_qfi(c, k, DistillPolicy::Discard, DistillMethod::Enumeration).mean;
              },
              "maximal_ghz_discard");
       }},
      {"fig7a", fig7a},
      {"fig7b", fig7b},
      {"fig9", fig9},
      {"table1", table1},
      {"table2", table2},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& reproduce_ids() {
  static const std::vector<std::string> ids{"fig2",  "fig3a", "fig3b", "fig3c", "fig4", "fig5",  "fig6a",
                                            "fig6b", "fig7a", "fig7b", "fig9",  "table1", "table2"};
  return ids;
}

void reproduce(std::string_view id, const ReproduceOptions& options, std::ostream& out) {
  const auto& table = handlers();
  const auto it = table.find(id);
  if (it == table.end()) throw std::invalid_argument("unknown reproduce id '" + std::string(id) + "'");
  it->second(options, out);
}

}  // namespace entnet::cli
