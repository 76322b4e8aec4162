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

#include "sshcd/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "sshcd/errors.hpp"
#include "sshcd/parallel.hpp"

namespace sshcd {

double fidelity(const StateVector& psi, const StateVector& phi) {
  if (psi.size() != phi.size()) throw ValidationError("fidelity: dimension mismatch");
  return std::norm(phi.dot(psi));
}

StateVector apply_exponential(const HermitianOperator& h, double tau,
                              const StateVector& psi) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h.matrix());
  const Eigen::VectorXcd phases =
      (std::complex<double>(0.0, -tau) * eig.eigenvalues().array()).exp();
  return eig.eigenvectors() *
         (phases.array() * (eig.eigenvectors().adjoint() * psi).array()).matrix();
}

namespace {

void check_initial(const StateVector& psi0) {
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw ValidationError("propagate: initial state must be unit norm");
}

}  // namespace

Trajectory propagate(const HamiltonianAt& hamiltonian_at, const StateVector& psi0,
                     double T, int steps, const ReferenceAt* reference) {
  if (steps < 1) throw ValidationError("propagate: steps must be >= 1");
  check_initial(psi0);
  const double h = T / steps;
  Trajectory out;
  out.times.reserve(steps + 1);
  out.states.reserve(steps + 1);
  out.site_probabilities.resize(steps + 1, psi0.size());
  StateVector psi = psi0;
  for (int k = 0; k <= steps; ++k) {
    if (k > 0) {
      const HermitianOperator hk = hamiltonian_at((k - 0.5) * h);
      psi = apply_exponential(hk, h, psi);
    }
    out.times.push_back(k * h);
    out.states.push_back(psi);
    out.site_probabilities.row(k) = psi.cwiseAbs2().real().transpose();
    if (reference) out.fidelity.push_back(fidelity(psi, (*reference)(k * h)));
  }
  return out;
}

StateVector evolve_final(const HamiltonianAt& hamiltonian_at, const StateVector& psi0,
                         double T, int steps) {
  if (steps < 1) throw ValidationError("propagate: steps must be >= 1");
  check_initial(psi0);
  const double h = T / steps;
  StateVector psi = psi0;
  for (int k = 1; k <= steps; ++k) {
    psi = apply_exponential(hamiltonian_at((k - 0.5) * h), h, psi);
  }
  return psi;
}

ConvergedRun propagate_to_convergence(const HamiltonianAt& hamiltonian_at,
                                      const StateVector& psi0, double T,
                                      const StateVector& target, int initial_steps,
                                      double tol, int max_steps) {
  int steps = initial_steps;
  StateVector psi = evolve_final(hamiltonian_at, psi0, T, steps);
  double f_prev = fidelity(psi, target);
  while (true) {
    const int next = steps * 2;
    StateVector psi_next = evolve_final(hamiltonian_at, psi0, T, next);
    const double f_next = fidelity(psi_next, target);
    const double change = std::abs(f_next - f_prev);
    if (change < tol) {
      return {std::move(psi_next), next, f_next, change};
    }
    if (next >= max_steps)
      throw NumericError("propagate_to_convergence: no convergence at max step count");
    steps = next;
    psi = std::move(psi_next);
    f_prev = f_next;
  }
}

RunReport transfer_run(const ChainSpec& spec, const Schedule& schedule,
                       const std::optional<CdVariant>& variant, int initial_steps) {
  const double T = schedule.horizon();
  const Hoppings h0 = schedule.at(0.0);
  const Hoppings hT = schedule.at(T);
  const StateVector psi0 = zero_mode(spec, h0.t1, h0.t2);
  const StateVector target = zero_mode(spec, hT.t1, hT.t2);

  HamiltonianAt h_at = [&](double t) {
    const Hoppings h = schedule.at(t);
    Eigen::MatrixXcd m = build_h0(spec, h.t1, h.t2).matrix();
    if (variant) m += build_cd(spec, schedule, t, *variant).matrix.matrix();
    return HermitianOperator(std::move(m));
  };

  const ConvergedRun converged =
      propagate_to_convergence(h_at, psi0, T, target, initial_steps);

  ReferenceAt ref = [&](double t) {
    const Hoppings h = schedule.at(t);
    return zero_mode(spec, h.t1, h.t2);
  };
  RunReport report;
  report.trajectory = propagate(h_at, psi0, T, converged.steps, &ref);
  report.final_fidelity = report.trajectory.fidelity.back();
  report.min_fidelity = *std::min_element(report.trajectory.fidelity.begin(),
                                          report.trajectory.fidelity.end());
  report.steps = converged.steps;
  report.fidelity_change = converged.fidelity_change;
  return report;
}

std::vector<std::pair<double, double>> omega_sweep(const ChainSpec& spec,
                                                   const std::optional<CdVariant>& variant,
                                                   const std::vector<double>& omegas,
                                                   int workers) {
  if (omegas.empty()) throw ValidationError("omega_sweep: empty rate list");
  for (double om : omegas) {
    if (!(om > 0.0)) throw ValidationError("omega_sweep: rates must be positive");
  }
  std::vector<std::pair<double, double>> out(omegas.size());
  parallel_for(static_cast<int>(omegas.size()), workers, [&](int i) {
    const Schedule schedule = Schedule::cosine_ramp(omegas[static_cast<size_t>(i)], spec.t0);
    const double T = schedule.horizon();
    const Hoppings a = schedule.at(0.0);
    const Hoppings b = schedule.at(T);
    HamiltonianAt h_at = [&](double t) {
      const Hoppings h = schedule.at(t);
      Eigen::MatrixXcd m = build_h0(spec, h.t1, h.t2).matrix();
      if (variant) m += build_cd(spec, schedule, t, *variant).matrix.matrix();
      return HermitianOperator(std::move(m));
    };
    const ConvergedRun run = propagate_to_convergence(
        h_at, zero_mode(spec, a.t1, a.t2), T, zero_mode(spec, b.t1, b.t2));
    out[static_cast<size_t>(i)] = {omegas[static_cast<size_t>(i)], run.final_fidelity};
  });
  return out;
}

}  // namespace sshcd
