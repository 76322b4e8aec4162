// Copyright 2026 the sshcd authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sshcd/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "sshcd/chain.hpp"
#include "sshcd/dynamics.hpp"
#include "sshcd/errors.hpp"
#include "sshcd/gauge.hpp"
#include "sshcd/io.hpp"
#include "sshcd/pauli.hpp"
#include "sshcd/robustness.hpp"
#include "sshcd/variational.hpp"

namespace sshcd {

namespace {

using nlohmann::json;

std::string default_outdir() {
  const char* env = std::getenv("SSHCD_OUTDIR");
  return env ? env : ".";
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return dir + "/" + name;
}

int cells_from_sites(int sites) {
  if (sites < 3 || sites % 2 == 0)
    throw ValidationError("sites must be odd and >= 3");
  return (sites + 1) / 2;
}

Schedule make_schedule(const std::string& kind, double omega, double horizon, double t0) {
  if (kind == "cosine") return Schedule::cosine_ramp(omega, t0);
  if (kind == "cubic") return Schedule::cubic_poly(horizon, t0);
  if (kind == "trig") return Schedule::trig_half_angle(omega, t0);
  throw ValidationError("unknown schedule kind '" + kind + "'");
}

ChainSpec make_spec(int sites, const Schedule& schedule) {
  return ChainSpec(cells_from_sites(sites), schedule.t0(),
                   schedule.has_lambda_sum() ? schedule.lambda_sum() : schedule.t0());
}

// "start:stop:count" linear, or "start:stop:log:count"/"start:stop:lin:count"
std::vector<double> parse_value_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::string token;
  for (char ch : text) {
    if (ch == ':') {
      parts.push_back(token);
      token.clear();
    } else {
      token += ch;
    }
  }
  parts.push_back(token);
  bool log_spacing = false;
  std::size_t count_index = 2;
  if (parts.size() == 4) {
    if (parts[2] == "log") log_spacing = true;
    else if (parts[2] != "lin") throw ValidationError("grid spacing must be lin or log");
    count_index = 3;
  } else if (parts.size() != 3) {
    throw ValidationError("value grid must be start:stop[:lin|:log]:count");
  }
  const double start = std::stod(parts[0]);
  const double stop = std::stod(parts[1]);
  const int count = std::stoi(parts[count_index]);
  if (count < 1) throw ValidationError("value grid needs count >= 1");
  if (log_spacing && (start <= 0.0 || stop <= 0.0))
    throw ValidationError("log grid needs positive endpoints");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double w = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out.push_back(log_spacing ? start * std::pow(stop / start, w)
                              : start + (stop - start) * w);
  }
  return out;
}

/// Config-file overlay. The file holds one flat JSON object; its values
/// override the parsed flags. Unknown keys are rejected.
void apply_config_overlay(CLI::App* cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr)
      throw ValidationError("config schema error: unknown key '" + key + "'");
    opt->clear();
    const std::string text =
        value.is_string() ? value.get<std::string>() : value.dump();
    opt->add_result(text);
    opt->run_callback();
  }
}

json metadata_block(double wall_seconds) {
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  return json{{"timestamp_unix_ms",
               std::chrono::duration_cast<std::chrono::milliseconds>(now).count()},
              {"wall_seconds", wall_seconds}};
}

std::string sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::RiceMeleConstant: return "rm-const";
    case SweepAxis::RiceMeleSine: return "rm-sine";
    case SweepAxis::DiagonalDisorder: return "sigma-delta";
    case SweepAxis::HoppingDisorder: return "sigma-tau";
  }
  return "?";
}

SweepAxis parse_axis(const std::string& text) {
  if (text == "rm-const") return SweepAxis::RiceMeleConstant;
  if (text == "rm-sine") return SweepAxis::RiceMeleSine;
  if (text == "sigma-delta") return SweepAxis::DiagonalDisorder;
  if (text == "sigma-tau") return SweepAxis::HoppingDisorder;
  throw ValidationError("unknown axis '" + text +
                        "' (rm-const, rm-sine, sigma-delta, sigma-tau)");
}

json kappa_schedule_json(const Eigen::MatrixXd& samples, KappaMode mode, double horizon) {
  json bonds = json::array();
  for (Eigen::Index b = 0; b < samples.rows(); ++b) {
    json row = json::array();
    for (Eigen::Index k = 0; k < samples.cols(); ++k) row.push_back(samples(b, k));
    bonds.push_back(row);
  }
  return json{{"mode", mode == KappaMode::Equal ? "equal" : "distinct"},
              {"r", samples.cols() - 1},
              {"horizon", horizon},
              {"bonds", bonds}};
}

KappaSchedule kappa_schedule_from_json(const ChainSpec& spec, const json& doc) {
  const json& node = doc.contains("aggregate")
                         ? doc.at("aggregate").at("avg_kappa_schedule")
                         : doc;
  const std::string mode_text = node.at("mode").get<std::string>();
  const KappaMode mode =
      mode_text == "equal" ? KappaMode::Equal : KappaMode::DistinctSymmetric;
  const double horizon = node.at("horizon").get<double>();
  const auto& bonds = node.at("bonds");
  const int n_bonds = static_cast<int>(bonds.size());
  if (n_bonds != spec.n_cells - 1)
    throw ValidationError("kappa schedule bond count does not match the chain");
  const int cols = static_cast<int>(bonds.at(0).size());
  Eigen::MatrixXd samples(n_bonds, cols);
  for (int b = 0; b < n_bonds; ++b) {
    if (static_cast<int>(bonds.at(b).size()) != cols)
      throw ValidationError("kappa schedule rows must have equal length");
    for (int k = 0; k < cols; ++k) samples(b, k) = bonds.at(b).at(k).get<double>();
  }
  return KappaSchedule::from_samples(spec, mode, horizon, std::move(samples));
}

// ---------------------------------------------------------------- transfer

struct TransferArgs {
  int sites = 5;
  std::string schedule = "cosine";
  double omega = 1.0;
  double horizon = M_PI;
  double t0 = 1.0;
  std::string cd = "none";
  std::string omega_sweep;
  std::string outdir = default_outdir();
  int steps = 4096;
  int workers = 0;
};

int cmd_transfer(const TransferArgs& args) {
  const Schedule schedule =
      make_schedule(args.schedule, args.omega, args.horizon, args.t0);
  const ChainSpec spec = make_spec(args.sites, schedule);
  std::optional<CdVariant> variant;
  if (args.cd != "none") variant = CdVariant::parse(args.cd);

  if (!args.omega_sweep.empty()) {
    if (args.schedule != "cosine")
      throw ValidationError("omega sweeps are defined for the cosine schedule");
    const std::vector<double> omegas = parse_value_grid(args.omega_sweep);
    const auto points = omega_sweep(spec, variant, omegas, args.workers);
    std::vector<std::vector<double>> rows;
    for (const auto& [omega, f] : points) rows.push_back({omega, f});
    atomic_write(join_path(args.outdir, "omega_sweep.csv"),
                 csv_table({"omega", "F_T"}, rows));
    return 0;
  }

  const auto start = std::chrono::steady_clock::now();
  const RunReport report = transfer_run(spec, schedule, variant, args.steps);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<std::string> header{"t", "F"};
  for (int j = 1; j <= spec.sites(); ++j) header.push_back("p_" + std::to_string(j));
  std::vector<std::vector<double>> rows;
  const auto& traj = report.trajectory;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    std::vector<double> row{traj.times[k], traj.fidelity[k]};
    for (int j = 0; j < spec.sites(); ++j)
      row.push_back(traj.site_probabilities(static_cast<Eigen::Index>(k), j));
    rows.push_back(std::move(row));
  }
  atomic_write(join_path(args.outdir, "trajectory.csv"), csv_table(header, rows));

  json summary{{"sites", args.sites},
               {"schedule", args.schedule},
               {"omega", args.omega},
               {"cd", args.cd},
               {"final_fidelity", report.final_fidelity},
               {"min_fidelity", report.min_fidelity},
               {"steps", report.steps},
               {"fidelity_change", report.fidelity_change},
               {"metadata", metadata_block(wall)}};
  atomic_write(join_path(args.outdir, "summary.json"), summary.dump(2) + "\n");
  return 0;
}

// ------------------------------------------------------------------- gauge

struct GaugeArgs {
  int sites = 5;
  std::string schedule = "cosine";
  double omega = 1.0;
  double horizon = M_PI;
  double t0 = 1.0;
  int order = 1;
  int grid = 200;
  std::string outdir = default_outdir();
};

int cmd_gauge(const GaugeArgs& args) {
  const Schedule schedule =
      make_schedule(args.schedule, args.omega, args.horizon, args.t0);
  const ChainSpec spec = make_spec(args.sites, schedule);
  atomic_write(join_path(args.outdir, "gauge.csv"),
               gauge_csv(spec, schedule, args.order, args.grid));
  return 0;
}

// --------------------------------------------------------------- decompose

struct DecomposeArgs {
  int sites = 5;
  double t1 = 1.0;
  double t2 = 1.0;
  std::string part = "h0";
  std::string outdir = default_outdir();
};

int cmd_decompose(const DecomposeArgs& args) {
  const int n_cells = cells_from_sites(args.sites);
  const ChainSpec spec(n_cells, 1.0, 2.0);

  const auto structured_and_check = [&](DecompositionPart part) {
    const std::vector<PauliTerm> structured =
        decompose_structured(spec, args.t1, args.t2, part);
    const PaddedOperator reference{
        static_cast<int>(std::log2(part_matrix(spec, args.t1, args.t2, part).rows())),
        part_matrix(spec, args.t1, args.t2, part)};
    const std::vector<PauliTerm> brute = decompose_brute(reference);
    if (structured.size() != brute.size())
      throw NumericError("decompose: structured/brute term-count mismatch");
    for (std::size_t i = 0; i < brute.size(); ++i) {
      if (structured[i].label != brute[i].label ||
          std::abs(structured[i].coefficient - brute[i].coefficient) > 1e-12)
        throw NumericError("decompose: structured/brute term mismatch at " +
                           brute[i].label);
    }
    return structured;
  };

  std::vector<PauliTerm> terms;
  if (args.part == "h0") {
    const auto t2_terms = structured_and_check(DecompositionPart::Ht2);
    const auto t1_terms = structured_and_check(DecompositionPart::Ht1);
    std::map<std::string, double> merged;
    for (const auto& t : t2_terms) merged[t.label] += t.coefficient;
    for (const auto& t : t1_terms) merged[t.label] += t.coefficient;
    for (const auto& [label, coeff] : merged) {
      if (std::abs(coeff) > 1e-12) terms.push_back({label, coeff});
    }
  } else if (args.part == "t1") {
    terms = structured_and_check(DecompositionPart::Ht1);
  } else if (args.part == "t2") {
    terms = structured_and_check(DecompositionPart::Ht2);
  } else if (args.part == "kappa") {
    terms = structured_and_check(DecompositionPart::KappaPattern);
  } else if (args.part == "rice-mele") {
    terms = structured_and_check(DecompositionPart::RiceMele);
  } else {
    throw ValidationError("unknown part '" + args.part +
                          "' (h0, t1, t2, kappa, rice-mele)");
  }
  atomic_write(join_path(args.outdir, "terms.txt"), term_list_text(terms));
  return 0;
}

// ---------------------------------------------------------------- optimize

struct OptimizeArgs {
  int sites = 5;
  double omega = 1.0;
  double t0 = 1.0;
  std::string mode = "equal";
  std::string cost = "fidelity";
  int iters = 1000;
  int runs = 10;
  int r = 22;
  long shots = 1024;
  double sigma_min = 0.0;  // 0 = per-size default
  double sigma_max = 0.0;
  double kappa_bound = 0.0;  // 0 = per-size default
  std::uint64_t seed = 0;
  bool no_h0 = false;
  std::string outdir = default_outdir();
  int workers = 0;
};

/// Per-size defaults for 5..15 sites: sigma ranges and bounds.
void fill_size_defaults(int n_cells, OptimizeArgs& args) {
  static constexpr double kSigmaLo[] = {4, 6, 7, 9, 10, 11};
  static constexpr double kSigmaHi[] = {5, 7, 8, 10, 11, 13};
  static constexpr double kBound[] = {-2.5, -3, -3.5, -4, -4.5, -5};
  const int idx = std::clamp(n_cells - 3, 0, 5);
  if (args.sigma_min == 0.0) args.sigma_min = kSigmaLo[idx];
  if (args.sigma_max == 0.0) args.sigma_max = kSigmaHi[idx];
  if (args.kappa_bound == 0.0) args.kappa_bound = kBound[idx];
}

int cmd_optimize(const OptimizeArgs& args_in) {
  OptimizeArgs args = args_in;
  const Schedule schedule = Schedule::cosine_ramp(args.omega, args.t0);
  const ChainSpec spec = make_spec(args.sites, schedule);
  fill_size_defaults(spec.n_cells, args);

  OptimizerConfig cfg;
  cfg.iterations = args.iters;
  cfg.trotter_steps = args.r;
  cfg.sigma_kappa_min = args.sigma_min;
  cfg.sigma_kappa_max = args.sigma_max;
  cfg.kappa_bound = args.kappa_bound;
  cfg.seed = args.seed;
  cfg.runs = args.runs;
  if (args.cost == "fidelity") cfg.cost = CostKind::Fidelity;
  else if (args.cost == "hellinger") cfg.cost = CostKind::Hellinger;
  else throw ValidationError("unknown cost '" + args.cost + "'");
  cfg.n_shot = args.shots;
  cfg.h0_on = !args.no_h0;
  if (args.mode == "equal") cfg.mode = KappaMode::Equal;
  else if (args.mode == "distinct") cfg.mode = KappaMode::DistinctSymmetric;
  else throw ValidationError("unknown mode '" + args.mode + "'");
  cfg.workers = args.workers;

  const OptimizationReport report = optimize_transfer(spec, schedule, cfg);

  json per_run = json::array();
  for (const auto& run : report.runs) {
    per_run.push_back(
        {{"final_fidelity", run.final_fidelity},
         {"sigma_kappa", run.sigma_kappa},
         {"kappa_schedule",
          kappa_schedule_json(run.kappa_samples, cfg.mode, schedule.horizon())},
         {"cost_trace", run.cost_trace}});
  }
  json doc{{"config",
            {{"sites", args.sites},
             {"omega", args.omega},
             {"mode", args.mode},
             {"cost", args.cost},
             {"iterations", args.iters},
             {"runs", args.runs},
             {"r", args.r},
             {"shots", args.shots},
             {"sigma_kappa", {args.sigma_min, args.sigma_max}},
             {"kappa_bound", args.kappa_bound},
             {"h0_on", cfg.h0_on},
             {"seed", args.seed}}},
           {"per_run", per_run},
           {"aggregate",
            {{"mean_fidelity", report.mean_fidelity},
             {"std_fidelity", report.std_fidelity},
             {"avg_kappa_schedule",
              kappa_schedule_json(report.avg_kappa_samples, cfg.mode,
                                  schedule.horizon())}}},
           {"metadata", metadata_block(report.wall_seconds)}};
  atomic_write(join_path(args.outdir, "report.json"), doc.dump(2) + "\n");

  std::vector<std::string> header{"iteration"};
  for (int i = 1; i <= args.runs; ++i) header.push_back("run_" + std::to_string(i));
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < args.iters; ++k) {
    std::vector<double> row{static_cast<double>(k + 1)};
    for (const auto& run : report.runs) row.push_back(run.cost_trace[static_cast<std::size_t>(k)]);
    rows.push_back(std::move(row));
  }
  atomic_write(join_path(args.outdir, "traces.csv"), csv_table(header, rows));
  return 0;
}

// -------------------------------------------------------------- robustness

struct RobustnessArgs {
  int sites = 5;
  double omega = 1.0;
  double t0 = 1.0;
  std::string axis = "sigma-delta";
  std::string values = "0:0.1:6";
  int samples = 200;
  std::uint64_t seed = 0;
  std::string kappa_file;
  std::string cd = "";
  bool no_h0 = false;
  std::string outdir = default_outdir();
  int workers = 0;
};

int cmd_robustness(const RobustnessArgs& args) {
  const Schedule schedule = Schedule::cosine_ramp(args.omega, args.t0);
  const ChainSpec spec = make_spec(args.sites, schedule);

  SweepSpec sweep;
  sweep.axis = parse_axis(args.axis);
  sweep.values = parse_value_grid(args.values);
  sweep.n_samples = args.samples;
  sweep.seed = args.seed;
  sweep.h0_on = !args.no_h0;
  if (!args.kappa_file.empty() && !args.cd.empty())
    throw ValidationError("give either --kappa or --cd, not both");
  if (!args.kappa_file.empty()) {
    std::ifstream in(args.kappa_file);
    if (!in) throw ValidationError("cannot read kappa file: " + args.kappa_file);
    json doc;
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw ValidationError(std::string("kappa file parse error: ") + e.what());
    }
    sweep.cd = CdSource::fixed(kappa_schedule_from_json(spec, doc));
  } else if (!args.cd.empty() && args.cd != "none") {
    sweep.cd = CdSource::analytic(CdVariant::parse(args.cd));
  }

  const auto points = disorder_sweep(spec, schedule, sweep, args.workers);
  std::vector<std::vector<double>> rows;
  for (const auto& p : points)
    rows.push_back({p.value, p.mean_f, p.std_f, static_cast<double>(p.n_samples)});
  atomic_write(join_path(args.outdir, sweep_axis_name(sweep.axis) + "_sweep.csv"),
               csv_table({"value", "mean_F", "std_F", "n_samples"}, rows));
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"counter-diabatic edge-state transfer toolkit"};
  app.require_subcommand(1);

  TransferArgs transfer_args;
  GaugeArgs gauge_args;
  DecomposeArgs decompose_args;
  OptimizeArgs optimize_args;
  RobustnessArgs robustness_args;
  std::string config_path;

  CLI::App* transfer = app.add_subcommand("transfer", "analog transfer and rate sweeps");
  transfer->add_option("--sites", transfer_args.sites);
  transfer->add_option("--schedule", transfer_args.schedule);
  transfer->add_option("--omega", transfer_args.omega);
  transfer->add_option("--horizon", transfer_args.horizon);
  transfer->add_option("--t0", transfer_args.t0);
  transfer->add_option("--cd", transfer_args.cd);
  transfer->add_option("--omega-sweep", transfer_args.omega_sweep);
  transfer->add_option("--out", transfer_args.outdir);
  transfer->add_option("--steps", transfer_args.steps);
  transfer->add_option("--workers", transfer_args.workers);
  transfer->add_option("--config", config_path);

  CLI::App* gauge = app.add_subcommand("gauge", "driving coefficients on a time grid");
  gauge->add_option("--sites", gauge_args.sites);
  gauge->add_option("--schedule", gauge_args.schedule);
  gauge->add_option("--omega", gauge_args.omega);
  gauge->add_option("--horizon", gauge_args.horizon);
  gauge->add_option("--t0", gauge_args.t0);
  gauge->add_option("--order", gauge_args.order);
  gauge->add_option("--grid", gauge_args.grid);
  gauge->add_option("--out", gauge_args.outdir);
  gauge->add_option("--config", config_path);

  CLI::App* decompose = app.add_subcommand("decompose", "Pauli term lists");
  decompose->add_option("--sites", decompose_args.sites);
  decompose->add_option("--t1", decompose_args.t1);
  decompose->add_option("--t2", decompose_args.t2);
  decompose->add_option("--part", decompose_args.part);
  decompose->add_option("--out", decompose_args.outdir);
  decompose->add_option("--config", config_path);

  CLI::App* optimize = app.add_subcommand("optimize", "variational driving search");
  optimize->add_option("--sites", optimize_args.sites);
  optimize->add_option("--omega", optimize_args.omega);
  optimize->add_option("--t0", optimize_args.t0);
  optimize->add_option("--mode", optimize_args.mode);
  optimize->add_option("--cost", optimize_args.cost);
  optimize->add_option("--iters", optimize_args.iters);
  optimize->add_option("--runs", optimize_args.runs);
  optimize->add_option("--r", optimize_args.r);
  optimize->add_option("--shots", optimize_args.shots);
  optimize->add_option("--sigma-min", optimize_args.sigma_min);
  optimize->add_option("--sigma-max", optimize_args.sigma_max);
  optimize->add_option("--kappa-bound", optimize_args.kappa_bound);
  optimize->add_option("--seed", optimize_args.seed);
  optimize->add_flag("--no-h0", optimize_args.no_h0);
  optimize->add_option("--out", optimize_args.outdir);
  optimize->add_option("--workers", optimize_args.workers);
  optimize->add_option("--config", config_path);

  CLI::App* robustness = app.add_subcommand("robustness", "disorder Monte Carlo sweeps");
  robustness->add_option("--sites", robustness_args.sites);
  robustness->add_option("--omega", robustness_args.omega);
  robustness->add_option("--t0", robustness_args.t0);
  robustness->add_option("--axis", robustness_args.axis);
  robustness->add_option("--values", robustness_args.values);
  robustness->add_option("--samples", robustness_args.samples);
  robustness->add_option("--seed", robustness_args.seed);
  robustness->add_option("--kappa", robustness_args.kappa_file);
  robustness->add_option("--cd", robustness_args.cd);
  robustness->add_flag("--no-h0", robustness_args.no_h0);
  robustness->add_option("--out", robustness_args.outdir);
  robustness->add_option("--workers", robustness_args.workers);
  robustness->add_option("--config", config_path);

  std::vector<std::string> argv_storage = args;
  std::vector<const char*> argv{"sshcd"};
  for (const auto& arg : argv_storage) argv.push_back(arg.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {  // --help
        std::cout << app.help() << std::endl;
        return 0;
      }
      throw ValidationError(e.what());
    }
    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) apply_config_overlay(active, config_path);
    if (active == transfer) return cmd_transfer(transfer_args);
    if (active == gauge) return cmd_gauge(gauge_args);
    if (active == decompose) return cmd_decompose(decompose_args);
    if (active == optimize) return cmd_optimize(optimize_args);
    if (active == robustness) return cmd_robustness(robustness_args);
    throw ValidationError("no command selected");
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << std::endl;
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << std::endl;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  }
}

}  // namespace sshcd
