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

#include "sshcd/robustness.hpp"

#include <cmath>

#include "sshcd/errors.hpp"
#include "sshcd/parallel.hpp"

namespace sshcd {

CdSource CdSource::analytic(CdVariant v) {
  CdSource out;
  out.kind = Kind::Analytic;
  out.variant = v;
  return out;
}

CdSource CdSource::fixed(KappaSchedule k) {
  CdSource out;
  out.kind = Kind::FixedKappa;
  out.kappa = std::move(k);
  return out;
}

void SweepSpec::validate() const {
  if (values.empty()) throw ValidationError("SweepSpec: values must be nonempty");
  if (n_samples < 1) throw ValidationError("SweepSpec: n_samples must be >= 1");
}

namespace {

Eigen::MatrixXcd driving_matrix(const ChainSpec& spec, const Schedule& schedule,
                                const CdSource& cd, double t) {
  const int d = spec.sites();
  switch (cd.kind) {
    case CdSource::Kind::None:
      return Eigen::MatrixXcd::Zero(d, d);
    case CdSource::Kind::Analytic:
      return build_cd(spec, schedule, t, *cd.variant).matrix.matrix();
    case CdSource::Kind::FixedKappa: {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
      const std::complex<double> i_unit{0.0, 1.0};
      for (int j = 1; j < spec.n_cells; ++j) {
        const double kappa = cd.kappa->interpolate(j - 1, t);
        m(2 * j, 2 * j - 2) = i_unit * kappa;
        m(2 * j - 2, 2 * j) = -i_unit * kappa;
      }
      return m;
    }
  }
  throw ValidationError("CdSource: unknown kind");
}

bool axis_is_deterministic(SweepAxis axis) {
  return axis == SweepAxis::RiceMeleConstant || axis == SweepAxis::RiceMeleSine;
}

DisorderConfig axis_config(SweepAxis axis, double value) {
  DisorderConfig cfg;
  switch (axis) {
    case SweepAxis::RiceMeleConstant:
      cfg.delta_mode = DeltaMode::Constant;
      cfg.delta = value;
      break;
    case SweepAxis::RiceMeleSine:
      cfg.delta_mode = DeltaMode::Sine;
      cfg.delta = value;
      break;
    case SweepAxis::DiagonalDisorder:
      cfg.sigma_delta = value;
      break;
    case SweepAxis::HoppingDisorder:
      cfg.sigma_tau = value;
      break;
  }
  return cfg;
}

}  // namespace

double perturbed_run(const ChainSpec& spec, const Schedule& schedule, const CdSource& cd,
                     const DisorderSample& sample, bool h0_on, int initial_steps) {
  const double T = schedule.horizon();
  const Hoppings a = schedule.at(0.0);
  const Hoppings b = schedule.at(T);
  const StateVector psi0 = zero_mode(spec, a.t1, a.t2);
  const StateVector target = zero_mode(spec, b.t1, b.t2);

  HamiltonianAt h_at = [&](double t) {
    const int d = spec.sites();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    if (h0_on) {
      const Hoppings h = schedule.at(t);
      m += build_h0(spec, h.t1, h.t2).matrix();
    }
    m += driving_matrix(spec, schedule, cd, t);
    m += sample.diagonal_at(t);
    m += sample.off_diagonal();
    return HermitianOperator(std::move(m));
  };

  return propagate_to_convergence(h_at, psi0, T, target, initial_steps).final_fidelity;
}

std::vector<SweepPoint> disorder_sweep(const ChainSpec& spec, const Schedule& schedule,
                                       const SweepSpec& sweep, int workers) {
  sweep.validate();
  const double omega = M_PI / schedule.horizon();
  const bool deterministic = axis_is_deterministic(sweep.axis);
  const int samples_per_value = deterministic ? 1 : sweep.n_samples;

  const int n_values = static_cast<int>(sweep.values.size());
  std::vector<std::vector<double>> fidelities(static_cast<std::size_t>(n_values));
  for (auto& f : fidelities) f.resize(static_cast<std::size_t>(samples_per_value));

  parallel_for(n_values * samples_per_value, workers, [&](int task) {
    const int vi = task / samples_per_value;
    const int si = task % samples_per_value;
    const double value = sweep.values[static_cast<std::size_t>(vi)];
    RngStream rng(fold_seed(sweep.seed, "sample",
                            {static_cast<std::uint64_t>(vi), static_cast<std::uint64_t>(si)}));
    const DisorderSample sample =
        build_perturbations(spec, axis_config(sweep.axis, value), omega, rng);
    fidelities[static_cast<std::size_t>(vi)][static_cast<std::size_t>(si)] =
        perturbed_run(spec, schedule, sweep.cd, sample, sweep.h0_on);
  });

  std::vector<SweepPoint> out;
  out.reserve(static_cast<std::size_t>(n_values));
  for (int vi = 0; vi < n_values; ++vi) {
    const auto& f = fidelities[static_cast<std::size_t>(vi)];
    double mean = 0.0;
    for (double x : f) mean += x;
    mean /= static_cast<double>(f.size());
    double var = 0.0;
    for (double x : f) var += (x - mean) * (x - mean);
    const double stddev = f.size() > 1 ? std::sqrt(var / static_cast<double>(f.size())) : 0.0;
    out.push_back({sweep.values[static_cast<std::size_t>(vi)], mean, stddev,
                   static_cast<int>(f.size())});
  }
  return out;
}

}  // namespace sshcd
