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

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "sshcd/pauli.hpp"

namespace sshcd {

struct SpsaGains {
  double a = 0.0;  // 0 = derive 0.8 * |kappa_bound| at run time
  double c = 0.1;
  double stability = -1.0;  // A; negative = derive 0.1 * iterations
  double alpha = 0.602;
  double gamma = 0.101;
};

enum class CostKind { Fidelity, Hellinger };

struct OptimizerConfig {
  int iterations = 1000;
  int trotter_steps = 22;  // r
  double sigma_kappa_min = 4.0;
  double sigma_kappa_max = 5.0;
  double kappa_bound = -2.5;  // lower clip; must be <= 0
  SpsaGains gains;
  std::uint64_t seed = 0;
  int runs = 10;
  CostKind cost = CostKind::Fidelity;
  long n_shot = 1024;  // Hellinger only
  bool h0_on = true;
  KappaMode mode = KappaMode::Equal;
  int workers = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct SpsaResult {
  Eigen::VectorXd best;        // lowest evaluated cost
  double best_cost = 0.0;
  Eigen::VectorXd final_iterate;
  std::vector<double> trace;   // min of the pair per iteration
};

struct RunResult {
  double final_fidelity = 0.0;
  double sigma_kappa = 0.0;
  Eigen::MatrixXd kappa_samples;  // (N-1) x (r+1)
  std::vector<double> cost_trace;
};

struct OptimizationReport {
  std::vector<RunResult> runs;
  double mean_fidelity = 0.0;
  double std_fidelity = 0.0;
  Eigen::MatrixXd avg_kappa_samples;  // across-run average schedule
  double wall_seconds = 0.0;
};

/// Warm start: kappa(k dt) = sigma_kappa * kappa1(k dt) from the first-order
/// closed form, endpoints forced to zero, clipped to [kappa_bound, 0].
KappaSchedule init_kappa(const ChainSpec& spec, const Schedule& schedule, int r,
                         double sigma_kappa, KappaMode mode, double kappa_bound);

/// Minimization form 1 - |psi[target]|^2.
double cost_fidelity(const StateVector& psi_final, int target_index);

/// Squared Hellinger distance to the delta target: 1 - sqrt(p_target).
double cost_hellinger(const std::vector<long>& counts, int target_index);

using CostFunction = std::function<double(const Eigen::VectorXd&)>;

/// Standard two-sided SPSA with per-coordinate Rademacher perturbations,
/// gains a_k = a/(k+1+A)^alpha, c_k = c/(k+1)^gamma, and clipping to
/// [lower, upper]. Deterministic under the stream.
SpsaResult spsa_minimize(const CostFunction& cost, const Eigen::VectorXd& theta0,
                         double lower, double upper, int iterations,
                         const SpsaGains& gains, RngStream& rng);

/// Full digital protocol: per run, draw sigma_kappa, warm start, SPSA against
/// the Trotter emulation, report true final-site fidelity of the optimized
/// schedule. Runs parallelize with per-run seeds from the master seed.
OptimizationReport optimize_transfer(const ChainSpec& spec, const Schedule& schedule,
                                     const OptimizerConfig& cfg);

}  // namespace sshcd
