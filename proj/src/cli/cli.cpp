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

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"
#include "entnet/distillation.hpp"
#include "entnet/errors.hpp"
#include "entnet/latency.hpp"
#include "entnet/measurements.hpp"
#include "entnet/partition_opt.hpp"
#include "entnet/protocols.hpp"
#include "entnet/qfi_core.hpp"
#include "entnet/thresholds.hpp"
#include "sweep.hpp"

#ifndef ENTNET_VERSION
#define ENTNET_VERSION "0.0.0"
#endif

namespace entnet::cli {
namespace {

using Params = std::vector<std::pair<std::string, std::string>>;

// Group sizes "3,2"; "" or "local" means no GHZ groups.
GhzPartition parse_partition(const std::string& text, int sensors) {
  if (text.empty() || text == "local") return GhzPartition::all_local(sensors);
  std::vector<int> sizes;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    const std::string piece = text.substr(start, comma == std::string::npos ? comma : comma - start);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(piece, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != piece.size()) throw std::invalid_argument("bad partition '" + text + "'");
    sizes.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return GhzPartition(sizes, sensors);
}

NetworkConfig network(int sensors, double p, double fidelity) {
  NetworkConfig cfg;
  cfg.sensors = sensors;
  cfg.p = p;
  cfg.fidelity = fidelity;
  return cfg;
}

const char* method_name(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::ClosedForm:
      return "closed";
    case EstimateMethod::TruncatedSeries:
      return "series";
    case EstimateMethod::MonteCarlo:
      return "mc";
  }
  return "";
}

DistillPolicy parse_policy(const std::string& name) {
  if (name == "none") return DistillPolicy::None;
  if (name == "discard") return DistillPolicy::Discard;
  if (name == "keep") return DistillPolicy::Keep;
  throw std::invalid_argument("unknown distillation policy '" + name + "'");
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

// "opt" maps to the sentinel -1.
std::vector<int> parse_int_or_opt(const std::string& text) {
  if (text == "opt") return {-1};
  return parse_int_range(text);
}

struct SnapshotArgs {
  int sensors = 0;
  std::string partition;
  std::string fidelity = "1";
  double gap = 1.0;
};

void snapshot_qfi(const SnapshotArgs& a, unsigned threads, std::ostream& os) {
  const GhzPartition part = parse_partition(a.partition, a.sensors);
  const auto fs = parse_range(a.fidelity);
  const EigenSpec eig(0.0, a.gap);
  CsvWriter csv(os);
  csv.metadata("snapshot-qfi", {{"S", fmt(a.sensors)}, {"partition", part.to_string()}, {"gap", fmt(a.gap)}});
  csv.header({"S", "partition", "F", "qfi", "local_qfi"});
  csv.rows(compute_rows(fs.size(), threads, [&](std::size_t i) {
    return Row{fmt(a.sensors), part.to_string(), fmt(fs[i]), fmt(snapshot_qfi_werner(part, fs[i], eig)),
               fmt(eig.gap_squared() / a.sensors)};
  }));
}

void threshold(const std::string& n_text, unsigned threads, std::ostream& os) {
  const auto ns = parse_int_range(n_text);
  CsvWriter csv(os);
  csv.metadata("threshold", {{"n", n_text}});
  csv.header({"n", "x_thres", "F_thres", "residual", "cfi_threshold"});
  csv.rows(compute_rows(ns.size(), threads, [&](std::size_t i) {
    const auto t = solve_threshold(ns[i]);
    return Row{fmt(t.n), fmt(t.x_thres), fmt(t.f_thres), fmt(t.residual), fmt(cfi_threshold(ns[i]))};
  }));
}

struct PartitionArgs {
  std::string m;
  std::string fidelity;
  int sensors = 0;
  std::string method = "exhaustive";
};

void partition(const PartitionArgs& a, unsigned threads, std::ostream& os) {
  const auto ms = parse_int_range(a.m);
  const auto fs = parse_range(a.fidelity);
  const bool heuristic = a.method == "heuristic";
  CsvWriter csv(os);
  csv.metadata("partition", {{"m", a.m}, {"F", a.fidelity}, {"S", a.sensors > 0 ? fmt(a.sensors) : "m"},
                             {"method", a.method}});
  csv.header({"m", "S", "F", "method", "partition", "qfi", "candidates"});
  csv.rows(compute_rows(ms.size() * fs.size(), threads, [&](std::size_t i) {
    const int m = ms[i / fs.size()];
    const double f = fs[i % fs.size()];
    const int s = a.sensors > 0 ? a.sensors : m;
    const auto r = heuristic ? heuristic_partition(m, f, s) : optimal_partition(m, s, f);
    return Row{fmt(m), fmt(s), fmt(f), a.method, r.best.to_string(), fmt(r.qfi),
               fmt(static_cast<long long>(r.candidates_evaluated))};
  }));
}

struct SweepArgs {
  std::string protocol;
  std::string sensors = "5";
  std::string p;
  std::string fidelity = "1";
  std::string k = "1";
  std::string mu = "opt";
  std::string method = "auto";
  std::string averaging = "time";
  std::string partition = "maximal";
  std::string distill = "none";
  std::int64_t trials = 100000;
  std::optional<std::uint64_t> seed;
};

void protocol_sweep(const SweepArgs& a, unsigned threads, std::ostream& os) {
  const auto ss = parse_int_range(a.sensors);
  const auto ps = parse_range(a.p);
  const auto fs = parse_range(a.fidelity);
  const bool fixed = a.protocol == "ftmbl", variable = a.protocol == "vtmbl";
  const auto ks = fixed ? parse_int_or_opt(a.k) : std::vector<int>{1};
  const auto mus = variable ? parse_int_or_opt(a.mu) : std::vector<int>{0};
  const DistillPolicy distill = parse_policy(a.distill);
  if (distill != DistillPolicy::None && !fixed) throw std::invalid_argument("--distill applies to ftmbl only");

  std::string method = a.method;
  if (method == "auto") method = variable ? "series" : "closed";
  if (method == "series" && !variable) throw std::invalid_argument("--method series applies to vtmbl only");
  const bool mc = method == "mc";
  if (mc && !a.seed) throw std::invalid_argument("--seed is required with --method mc");
  if (mc && a.trials < 1) throw std::invalid_argument("--trials must be positive");

  const PartitionPolicy policy = a.partition == "optimal" ? PartitionPolicy::Optimal : PartitionPolicy::Maximal;
  VtmblOptions vopts;
  vopts.averaging = a.averaging == "block" ? VtmblAveraging::BlockAverage : VtmblAveraging::TimeAverage;
  vopts.policy = policy;
  MonteCarloOptions mopts;
  mopts.trials = a.trials;
  mopts.seed = a.seed.value_or(0);
  mopts.threads = 1;
  mopts.averaging = vopts.averaging;

  Params meta{{"protocol", a.protocol}, {"S", a.sensors},     {"p", a.p},
              {"F", a.fidelity},        {"method", method},   {"partition", a.partition}};
  if (fixed) {
    meta.emplace_back("k", a.k);
    meta.emplace_back("distill", a.distill);
  }
  if (variable) {
    meta.emplace_back("mu", a.mu);
    meta.emplace_back("averaging", a.averaging);
  }
  if (mc) {
    meta.emplace_back("trials", fmt(static_cast<long long>(a.trials)));
    meta.emplace_back("seed", std::to_string(*a.seed));
  }
  CsvWriter csv(os);
  csv.metadata("protocol-sweep", meta);
  csv.header({"protocol", "S", "p", "F", "k", "mu", "method", "avg_qfi", "std_error", "trials", "bound"});

  const std::size_t n = ss.size() * ps.size() * fs.size() * ks.size() * mus.size();
  csv.rows(compute_rows(n, threads, [&](std::size_t i) {
    std::size_t r = i;
    const int mu_in = mus[r % mus.size()];
    r /= mus.size();
    const int k_in = ks[r % ks.size()];
    r /= ks.size();
    const double f = fs[r % fs.size()];
    r /= fs.size();
    const double p = ps[r % ps.size()];
    const int s = ss[r / ps.size()];
    const auto cfg = network(s, p, f);

    const int k = k_in < 0 ? ftmbl_k_opt(p) : k_in;
    const int mu = mu_in < 0 ? vtmbl_mu_opt(cfg, vopts) : mu_in;
    AvgQfiEstimate est;
    if (variable) {
      est = mc ? monte_carlo_avg_qfi(cfg, ProtocolSpec::variable(mu), policy, mopts)
               : vtmbl_avg_qfi(cfg, mu, method == "closed" ? EstimateMethod::ClosedForm : EstimateMethod::TruncatedSeries,
                               vopts);
    } else if (fixed && distill != DistillPolicy::None) {
      if (policy == PartitionPolicy::Optimal) {
        throw std::invalid_argument("distillation uses the maximal GHZ measurement; drop --partition optimal");
      }
      est = ftmbl_distilled_avg_qfi(cfg, k, distill, mc ? DistillMethod::MonteCarlo : DistillMethod::Enumeration,
                                    mopts);
    } else if (mc) {
      est = monte_carlo_avg_qfi(cfg, fixed ? ProtocolSpec::fixed(k) : ProtocolSpec::immediate(), policy, mopts);
    } else {
      est = fixed ? ftmbl_avg_qfi(cfg, k, policy) : immediate_avg_qfi(cfg, policy);
    }
    return Row{a.protocol,
               fmt(s),
               fmt(p),
               fmt(f),
               variable ? "" : fmt(k),
               variable ? fmt(mu) : "",
               method_name(est.method),
               fmt(est.mean),
               fmt(est.std_error),
               fmt(static_cast<long long>(est.trials)),
               fmt(cfg.eig.gap_squared() * qfi_upper_bound(s, p))};
  }));
}

struct DistillArgs {
  int sensors = 5;
  std::string k;
  std::string p;
  std::string fidelity;
  std::string policies = "none,discard,keep";
  std::string method = "enum";
  std::int64_t trials = 100000;
  std::optional<std::uint64_t> seed;
};

void distill(const DistillArgs& a, unsigned threads, std::ostream& os) {
  const auto ks = parse_int_range(a.k);
  const auto ps = parse_range(a.p);
  const auto fs = parse_range(a.fidelity);
  const auto names = split_names(a.policies);
  std::vector<DistillPolicy> policies;
  for (const auto& name : names) policies.push_back(parse_policy(name));
  const bool mc = a.method == "mc";
  if (mc && !a.seed) throw std::invalid_argument("--seed is required with --method mc");
  MonteCarloOptions mopts;
  mopts.trials = a.trials;
  mopts.seed = a.seed.value_or(0);
  mopts.threads = 1;

  Params meta{{"S", fmt(a.sensors)}, {"k", a.k}, {"p", a.p}, {"F", a.fidelity}, {"measurement", "maximal_ghz"},
              {"method", a.method}};
  if (mc) {
    meta.emplace_back("trials", fmt(static_cast<long long>(a.trials)));
    meta.emplace_back("seed", std::to_string(*a.seed));
  }
  CsvWriter csv(os);
  csv.metadata("distill", meta);
  csv.header({"S", "k", "p", "F", "policy", "method", "avg_qfi", "std_error"});
  const std::size_t n = ks.size() * ps.size() * fs.size() * policies.size();
  csv.rows(compute_rows(n, threads, [&](std::size_t i) {
    std::size_t r = i;
    const std::size_t pol = r % policies.size();
    r /= policies.size();
    const double f = fs[r % fs.size()];
    r /= fs.size();
    const double p = ps[r % ps.size()];
    const int k = ks[r / ps.size()];
    const auto est = ftmbl_distilled_avg_qfi(network(a.sensors, p, f), k, policies[pol],
                                             mc ? DistillMethod::MonteCarlo : DistillMethod::Enumeration, mopts);
    return Row{fmt(a.sensors), fmt(k), fmt(p), fmt(f), names[pol], mc ? "mc" : "enum", fmt(est.mean),
               fmt(est.std_error)};
  }));
}

struct CfiArgs {
  int sensors = 0;
  std::string partition;
  std::string fidelity = "1";
  std::string phases;
};

void measure_cfi(const CfiArgs& a, unsigned threads, std::ostream& os) {
  const GhzPartition part = parse_partition(a.partition, a.sensors);
  const auto fs = parse_range(a.fidelity);
  std::optional<PhaseVectord> phis;
  if (!a.phases.empty()) {
    const auto values = parse_range(a.phases);
    if (static_cast<int>(values.size()) != a.sensors) throw std::invalid_argument("--phases needs one value per sensor");
    phis = PhaseVectord(values);
  }
  CsvWriter csv(os);
  csv.metadata("measure-cfi", {{"S", fmt(a.sensors)}, {"partition", part.to_string()}, {"F", a.fidelity},
                               {"phases", a.phases.empty() ? "max" : a.phases}});
  csv.header({"S", "partition", "F", "qfi", "cfi_max", "cfi"});
  csv.rows(compute_rows(fs.size(), threads, [&](std::size_t i) {
    const double f = fs[i];
    std::vector<std::vector<double>> xs;
    for (int n : part.sizes()) xs.emplace_back(static_cast<std::size_t>(n), werner_param_from_fidelity(f));
    const double best = local_cfi_max(part, xs);
    const double at = phis ? local_cfi(LocalCfiInput<double>{part, xs, *phis}) : best;
    return Row{fmt(a.sensors), part.to_string(), fmt(f), fmt(snapshot_qfi_werner(part, f)), fmt(best), fmt(at)};
  }));
}

struct LatencyArgs {
  double distance = 1000.0;
  double speed = 2.0e8;
  double period = 1.0e-5;
  std::string k = "1";
  int sensors = 2;
};

void latency(const LatencyArgs& a, std::ostream& os) {
  const auto ks = parse_int_range(a.k);
  CsvWriter csv(os);
  csv.metadata("latency", {{"L", fmt(a.distance)}, {"c", fmt(a.speed)}, {"tau", fmt(a.period)}, {"k", a.k},
                           {"S", fmt(a.sensors)}});
  csv.header({"k", "source", "distill", "latency_s", "sensor_memories", "hub_memories"});
  for (int k : ks) {
    TimingParams t;
    t.distance = a.distance;
    t.signal_speed = a.speed;
    t.period = a.period;
    t.k = k;
    t.sensors = a.sensors;
    for (auto source : {SourceLocation::AtSensors, SourceLocation::AtHub}) {
      for (bool d : {false, true}) {
        const auto r = latency_model(t, source, d);
        csv.row({fmt(k), to_string(source), d ? "1" : "0", fmt(r.latency), fmt(r.sensor_memories),
                 fmt(r.hub_memories)});
      }
    }
  }
}

}  // namespace

std::string version() { return ENTNET_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Average quantum Fisher information of entanglement-assisted sensor networks", "entnet"};
  app.set_version_flag("--version", version());
  app.set_config("--config", "", "INI/TOML file of option values; command-line flags take precedence");
  app.require_subcommand(1);

  std::string out_path;
  unsigned threads = 0;
  app.add_option("-o,--out", out_path, "Write CSV to this file instead of stdout");
  app.add_option("--threads", threads, "Worker threads (default: ENTNET_THREADS, else all cores)");

  const auto choice = [](std::initializer_list<std::string> names) { return CLI::IsMember(std::vector(names)); };

  SnapshotArgs snap;
  auto* snap_cmd = app.add_subcommand("snapshot-qfi", "Snapshot QFI of one GHZ partition vs link fidelity");
  snap_cmd->add_option("--sensors,-S", snap.sensors, "Number of sensors")->required()->check(CLI::PositiveNumber);
  snap_cmd->add_option("--partition", snap.partition, "GHZ group sizes, e.g. 3,2 (default: all local)");
  snap_cmd->add_option("--fidelity,-F", snap.fidelity, "Fidelity range")->capture_default_str();
  snap_cmd->add_option("--gap", snap.gap, "Eigenvalue gap delta lambda")->capture_default_str();

  std::string n_text = "2..20";
  auto* thr_cmd = app.add_subcommand("threshold", "Fidelity below which an n-GHZ probe loses to local probes");
  thr_cmd->add_option("--n", n_text, "GHZ size range")->capture_default_str();

  PartitionArgs part;
  auto* part_cmd = app.add_subcommand("partition", "Best GHZ partition of m live links");
  part_cmd->add_option("--m", part.m, "Live link range")->required();
  part_cmd->add_option("--fidelity,-F", part.fidelity, "Fidelity range")->required();
  part_cmd->add_option("--sensors,-S", part.sensors, "Network size (default: m)");
  part_cmd->add_option("--method", part.method, "Search method")->check(choice({"exhaustive", "heuristic"}))
      ->capture_default_str();

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("protocol-sweep", "Average QFI of a distribution protocol over a grid");
  sweep_cmd->add_option("--protocol", sweep.protocol, "Protocol")->required()->check(
      choice({"immediate", "ftmbl", "vtmbl"}));
  sweep_cmd->add_option("--sensors,-S", sweep.sensors, "Sensor count range")->capture_default_str();
  sweep_cmd->add_option("--p", sweep.p, "Link success probability range")->required();
  sweep_cmd->add_option("--fidelity,-F", sweep.fidelity, "Fidelity range")->capture_default_str();
  sweep_cmd->add_option("--k", sweep.k, "F-TMBL block length range, or opt")->capture_default_str();
  sweep_cmd->add_option("--mu", sweep.mu, "V-TMBL link target range, or opt")->capture_default_str();
  sweep_cmd->add_option("--method", sweep.method, "Estimator")->check(choice({"auto", "closed", "series", "mc"}))
      ->capture_default_str();
  sweep_cmd->add_option("--averaging", sweep.averaging, "V-TMBL average")->check(choice({"time", "block"}))
      ->capture_default_str();
  sweep_cmd->add_option("--partition", sweep.partition, "GHZ measurement policy")
      ->check(choice({"maximal", "optimal"}))
      ->capture_default_str();
  sweep_cmd->add_option("--distill", sweep.distill, "F-TMBL distillation policy")
      ->check(choice({"none", "discard", "keep"}))
      ->capture_default_str();
  sweep_cmd->add_option("--trials", sweep.trials, "Monte Carlo trials per point")->capture_default_str();
  sweep_cmd->add_option("--seed", sweep.seed, "Monte Carlo seed");

  DistillArgs dist;
  auto* dist_cmd = app.add_subcommand("distill", "F-TMBL with per-sensor distillation and maximal GHZ");
  dist_cmd->add_option("--sensors,-S", dist.sensors, "Number of sensors")->capture_default_str();
  dist_cmd->add_option("--k", dist.k, "Block length range")->required();
  dist_cmd->add_option("--p", dist.p, "Link success probability range")->required();
  dist_cmd->add_option("--fidelity,-F", dist.fidelity, "Fidelity range")->required();
  dist_cmd->add_option("--policy", dist.policies, "Comma list of none, discard, keep")->capture_default_str();
  dist_cmd->add_option("--method", dist.method, "Estimator")->check(choice({"enum", "mc"}))->capture_default_str();
  dist_cmd->add_option("--trials", dist.trials, "Monte Carlo trials per point")->capture_default_str();
  dist_cmd->add_option("--seed", dist.seed, "Monte Carlo seed");

  CfiArgs cfi;
  auto* cfi_cmd = app.add_subcommand("measure-cfi", "CFI of local |+>/|-> measurements vs the QFI");
  cfi_cmd->add_option("--sensors,-S", cfi.sensors, "Number of sensors")->required()->check(CLI::PositiveNumber);
  cfi_cmd->add_option("--partition", cfi.partition, "GHZ group sizes, e.g. 3,2");
  cfi_cmd->add_option("--fidelity,-F", cfi.fidelity, "Fidelity range")->capture_default_str();
  cfi_cmd->add_option("--phases", cfi.phases, "Comma list of S phases (default: maximizing phases)");

  LatencyArgs lat;
  auto* lat_cmd = app.add_subcommand("latency", "Latency and memory counts for both source placements");
  lat_cmd->add_option("--distance,-L", lat.distance, "Sensor-hub distance in meters")->capture_default_str();
  lat_cmd->add_option("--speed,-c", lat.speed, "Signal speed in m/s")->capture_default_str();
  lat_cmd->add_option("--period", lat.period, "Seconds between attempts")->capture_default_str();
  lat_cmd->add_option("--k", lat.k, "Block length range")->capture_default_str();
  lat_cmd->add_option("--sensors,-S", lat.sensors, "Number of sensors")->capture_default_str();

  std::string figure;
  ReproduceOptions repro;
  auto* repro_cmd = app.add_subcommand("reproduce", "Emit the data behind a figure or table");
  repro_cmd->add_option("id", figure, "Figure or table id")->required()->check(CLI::IsMember(reproduce_ids()));
  repro_cmd->add_option("--trials", repro.trials, "Monte Carlo trials per point (default: per figure)");
  repro_cmd->add_option("--seed", repro.seed, "Monte Carlo seed")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  std::ostringstream csv;
  try {
    if (snap_cmd->parsed()) snapshot_qfi(snap, threads, csv);
    if (thr_cmd->parsed()) threshold(n_text, threads, csv);
    if (part_cmd->parsed()) partition(part, threads, csv);
    if (sweep_cmd->parsed()) protocol_sweep(sweep, threads, csv);
    if (dist_cmd->parsed()) distill(dist, threads, csv);
    if (cfi_cmd->parsed()) measure_cfi(cfi, threads, csv);
    if (lat_cmd->parsed()) latency(lat, csv);
    if (repro_cmd->parsed()) {
      repro.threads = threads;
      reproduce(figure, repro, csv);
    }
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::logic_error& e) {
    // domain_error, invalid_argument and SizeError: the request itself is out of range.
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }

  if (out_path.empty()) {
    out << csv.str();
    out.flush();
    return kExitOk;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!(file << csv.str()) || !file.flush()) {
    err << "error: cannot write " << out_path << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace entnet::cli
