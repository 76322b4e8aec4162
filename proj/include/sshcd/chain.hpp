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

#include "sshcd/rng.hpp"

namespace sshcd {

/// Odd-site two-sublattice chain: N unit cells, 2N-1 sites. Sites are 1-based
/// in the physics convention; site j maps to vector index j-1 everywhere.
struct ChainSpec {
  int n_cells;            // N >= 2
  double t0 = 1.0;        // energy scale
  double lambda_sum = 2;  // Λ, the constant t1+t2 of the hopping family

  ChainSpec(int n_cells_, double t0_ = 1.0, double lambda_sum_ = 2.0);
  int sites() const { return 2 * n_cells - 1; }
};

/// Dense complex matrix checked Hermitian at construction
/// (max |H - H^dagger| < 1e-12).
class HermitianOperator {
 public:
  explicit HermitianOperator(Eigen::MatrixXcd m);
  const Eigen::MatrixXcd& matrix() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  Eigen::MatrixXcd mat_;
};

struct Hoppings {
  double t1;
  double t2;
  double lambda;      // the control, t1
  double lambda_dot;  // its time derivative
};

enum class ScheduleKind { CosineRamp, CubicPoly, TrigHalfAngle };

/// Time parameterization of the hoppings over the transfer window [0, T].
class Schedule {
 public:
  static Schedule cosine_ramp(double omega, double t0 = 1.0);
  static Schedule cubic_poly(double horizon, double t0 = 1.0);
  static Schedule trig_half_angle(double omega, double t0 = 1.0);

  ScheduleKind kind() const { return kind_; }
  double t0() const { return t0_; }
  double horizon() const { return horizon_; }

  /// True when t1+t2 is constant (CosineRamp, CubicPoly).
  bool has_lambda_sum() const { return kind_ != ScheduleKind::TrigHalfAngle; }
  double lambda_sum() const;

  /// Hoppings and control-rate at time t; throws outside [0, T].
  Hoppings at(double t) const;

 private:
  Schedule(ScheduleKind kind, double t0, double horizon, double omega);
  ScheduleKind kind_;
  double t0_;
  double horizon_;
  double omega_;  // unused by CubicPoly
};

inline Hoppings eval_hoppings(const Schedule& schedule, double t) { return schedule.at(t); }

/// Chain Hamiltonian at fixed hoppings: t2 on intra-cell bonds (2j-1, 2j),
/// t1 on inter-cell bonds (2j, 2j+1).
HermitianOperator build_h0(const ChainSpec& spec, double t1, double t2);

/// Unit-hopping bond patterns; H0 = t2 * t2_pattern + t1 * t1_pattern.
Eigen::MatrixXcd h0_t1_pattern(const ChainSpec& spec);
Eigen::MatrixXcd h0_t2_pattern(const ChainSpec& spec);

/// Unit-norm zero-energy eigenstate. Amplitudes vanish on even sites; odd-site
/// amplitudes follow (-t2)^{i-1} t1^{N-i}, the overflow-free homogeneous form
/// of the amplitude ratio (-t2/t1)^{i-1}. Throws when t1 = t2 = 0.
Eigen::VectorXcd zero_mode(const ChainSpec& spec, double t1, double t2);

enum class DeltaMode { Constant, Sine };

struct DisorderConfig {
  DeltaMode delta_mode = DeltaMode::Constant;
  double delta = 0.0;        // staggered detuning amplitude
  double sigma_delta = 0.0;  // on-site disorder half-width
  double sigma_tau = 0.0;    // hopping disorder half-width
  int n_samples = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One quenched disorder realization: static shifts drawn once, the staggered
/// detuning varies in time through Delta(t).
class DisorderSample {
 public:
  DisorderSample(const ChainSpec& spec, const DisorderConfig& cfg, double omega,
                 RngStream& rng);

  /// Diagonal part at time t: entry j is (-1)^{j-1} Delta(t) + delta_j.
  Eigen::MatrixXcd diagonal_at(double t) const;
  const Eigen::MatrixXcd& off_diagonal() const { return off_diagonal_; }

  const Eigen::VectorXd& site_shifts() const { return site_shifts_; }
  const Eigen::VectorXd& bond_shifts() const { return bond_shifts_; }
  bool is_zero() const;

 private:
  DeltaMode mode_;
  double delta_;
  double omega_;
  Eigen::VectorXd site_shifts_;
  Eigen::VectorXd bond_shifts_;
  Eigen::MatrixXcd off_diagonal_;
};

/// Draw one realization; delta_j, tau_j uniform on [-sigma, sigma], held
/// static in time. omega feeds the Sine detuning mode.
DisorderSample build_perturbations(const ChainSpec& spec, const DisorderConfig& cfg,
                                   double omega, RngStream& rng);

}  // namespace sshcd
