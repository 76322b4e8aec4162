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
#include <functional>
#include <optional>
#include <vector>

#include "sshcd/chain.hpp"
#include "sshcd/gauge.hpp"

namespace sshcd {

using StateVector = Eigen::VectorXcd;

using HamiltonianAt = std::function<HermitianOperator(double)>;
using ReferenceAt = std::function<StateVector(double)>;

/// |<phi|psi>|^2.
double fidelity(const StateVector& psi, const StateVector& phi);

/// Exact unitary substep exp(-i H tau) psi through the eigendecomposition of H.
StateVector apply_exponential(const HermitianOperator& h, double tau,
                              const StateVector& psi);

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<double> fidelity;        // vs reference; empty when none given
  Eigen::MatrixXd site_probabilities;  // (steps+1) x dim
};

/// Piecewise-exact integrator: each substep of width h = T/steps applies the
/// exponential of the midpoint-sampled Hamiltonian. Global error O(h^2), norm
/// preserved to machine precision.
Trajectory propagate(const HamiltonianAt& hamiltonian_at, const StateVector& psi0,
                     double T, int steps, const ReferenceAt* reference = nullptr);

/// Same integrator, final state only.
StateVector evolve_final(const HamiltonianAt& hamiltonian_at, const StateVector& psi0,
                         double T, int steps);

struct ConvergedRun {
  StateVector final_state;
  int steps = 0;              // accepted resolution
  double final_fidelity = 0;  // vs target at the accepted resolution
  double fidelity_change = 0; // |F at steps - F at steps/2|, the certificate
};

/// Double the step count from initial_steps until F(T) against the target
/// changes by less than tol.
ConvergedRun propagate_to_convergence(const HamiltonianAt& hamiltonian_at,
                                      const StateVector& psi0, double T,
                                      const StateVector& target,
                                      int initial_steps = 4096, double tol = 1e-8,
                                      int max_steps = 1 << 22);

struct RunReport {
  Trajectory trajectory;       // at the accepted resolution
  double final_fidelity = 0;   // F(T) vs the instantaneous zero mode
  double min_fidelity = 1;     // min_t F(t)
  int steps = 0;
  double fidelity_change = 0;  // convergence certificate
};

/// Evolve the t=0 zero mode under H0(t) plus the selected driving variant;
/// records F(t) against the instantaneous zero mode. No variant = bare
/// protocol.
RunReport transfer_run(const ChainSpec& spec, const Schedule& schedule,
                       const std::optional<CdVariant>& variant,
                       int initial_steps = 4096);

/// One transfer per rate value (each schedule is the cosine ramp at that
/// omega), returning (omega, F(T)) pairs; deterministic merge by index.
std::vector<std::pair<double, double>> omega_sweep(const ChainSpec& spec,
                                                   const std::optional<CdVariant>& variant,
                                                   const std::vector<double>& omegas,
                                                   int workers = 0);

}  // namespace sshcd
