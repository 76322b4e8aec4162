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

#include "sshcd/chain.hpp"

#include <cmath>
#include <string>

#include "sshcd/errors.hpp"

namespace sshcd {

ChainSpec::ChainSpec(int n_cells_, double t0_, double lambda_sum_)
    : n_cells(n_cells_), t0(t0_), lambda_sum(lambda_sum_) {
  if (n_cells < 2) throw ValidationError("ChainSpec: need n_cells >= 2");
  if (!(t0 > 0.0)) throw ValidationError("ChainSpec: t0 must be positive");
  if (!(lambda_sum > 0.0)) throw ValidationError("ChainSpec: lambda_sum must be positive");
}

HermitianOperator::HermitianOperator(Eigen::MatrixXcd m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols())
    throw ValidationError("HermitianOperator: matrix must be square");
  const double dev = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  if (dev >= 1e-12)
    throw ValidationError("HermitianOperator: non-Hermitian input, max deviation " +
                          std::to_string(dev));
}

Schedule::Schedule(ScheduleKind kind, double t0, double horizon, double omega)
    : kind_(kind), t0_(t0), horizon_(horizon), omega_(omega) {
  if (!(t0 > 0.0)) throw ValidationError("Schedule: t0 must be positive");
  if (!(horizon > 0.0)) throw ValidationError("Schedule: horizon must be positive");
}

Schedule Schedule::cosine_ramp(double omega, double t0) {
  if (!(omega > 0.0)) throw ValidationError("Schedule: omega must be positive");
  return Schedule(ScheduleKind::CosineRamp, t0, M_PI / omega, omega);
}

Schedule Schedule::cubic_poly(double horizon, double t0) {
  return Schedule(ScheduleKind::CubicPoly, t0, horizon, 0.0);
}

Schedule Schedule::trig_half_angle(double omega, double t0) {
  if (!(omega > 0.0)) throw ValidationError("Schedule: omega must be positive");
  return Schedule(ScheduleKind::TrigHalfAngle, t0, M_PI / omega, omega);
}

double Schedule::lambda_sum() const {
  switch (kind_) {
    case ScheduleKind::CosineRamp:
      return 2.0 * t0_;
    case ScheduleKind::CubicPoly:
      return t0_;
    case ScheduleKind::TrigHalfAngle:
      break;
  }
  throw ValidationError("Schedule: t1+t2 is not constant for the trig family");
}

Hoppings Schedule::at(double t) const {
  if (t < -1e-12 || t > horizon_ * (1.0 + 1e-12))
    throw ValidationError("Schedule: time outside [0, T]");
  switch (kind_) {
    case ScheduleKind::CosineRamp: {
      const double c = std::cos(omega_ * t);
      return {t0_ * (1.0 + c), t0_ * (1.0 - c), t0_ * (1.0 + c),
              -omega_ * t0_ * std::sin(omega_ * t)};
    }
    case ScheduleKind::CubicPoly: {
      const double x = t / horizon_;
      const double p = 2.0 * x * x * x - 3.0 * x * x + 1.0;
      const double dp = 6.0 * x * x - 6.0 * x;  // P'(x) <= 0 on [0, 1]
      return {t0_ * p, t0_ * (1.0 - p), t0_ * p, t0_ * dp / horizon_};
    }
    case ScheduleKind::TrigHalfAngle: {
      const double half = 0.5 * omega_ * t;
      const double t1 = t0_ * std::cos(half);
      const double t2 = t0_ * std::sin(half);
      return {t1, t2, t1, -0.5 * omega_ * t2};
    }
  }
  throw ValidationError("Schedule: unknown kind");
}

HermitianOperator build_h0(const ChainSpec& spec, double t1, double t2) {
  if (!std::isfinite(t1) || !std::isfinite(t2))
    throw ValidationError("build_h0: hoppings must be finite");
  const int d = spec.sites();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 1; j < spec.n_cells; ++j) {
    h(2 * j - 1, 2 * j - 2) = t2;  // sites (2j, 2j-1)
    h(2 * j - 2, 2 * j - 1) = t2;
    h(2 * j, 2 * j - 1) = t1;  // sites (2j+1, 2j)
    h(2 * j - 1, 2 * j) = t1;
  }
  return HermitianOperator(std::move(h));
}

Eigen::MatrixXcd h0_t1_pattern(const ChainSpec& spec) {
  return build_h0(spec, 1.0, 0.0).matrix();
}

Eigen::MatrixXcd h0_t2_pattern(const ChainSpec& spec) {
  return build_h0(spec, 0.0, 1.0).matrix();
}

Eigen::VectorXcd zero_mode(const ChainSpec& spec, double t1, double t2) {
  if (t1 == 0.0 && t2 == 0.0)
    throw ValidationError("zero_mode: degenerate input t1 = t2 = 0");
  const int n = spec.n_cells;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(spec.sites());
  for (int i = 1; i <= n; ++i) {
    v(2 * i - 2) = std::pow(-t2, i - 1) * std::pow(t1, n - i);
  }
  const double norm = v.norm();
  if (!(norm > 0.0)) throw NumericError("zero_mode: vanishing amplitude vector");
  return v / norm;
}

void DisorderConfig::validate() const {
  if (sigma_delta < 0.0 || sigma_tau < 0.0)
    throw ValidationError("DisorderConfig: sigma must be non-negative");
  if (n_samples < 1) throw ValidationError("DisorderConfig: n_samples must be >= 1");
}

DisorderSample::DisorderSample(const ChainSpec& spec, const DisorderConfig& cfg,
                               double omega, RngStream& rng)
    : mode_(cfg.delta_mode), delta_(cfg.delta), omega_(omega) {
  cfg.validate();
  const int d = spec.sites();
  site_shifts_.resize(d);
  for (int j = 0; j < d; ++j)
    site_shifts_(j) = cfg.sigma_delta > 0.0 ? rng.symmetric(cfg.sigma_delta) : 0.0;
  bond_shifts_.resize(d - 1);
  for (int j = 0; j < d - 1; ++j)
    bond_shifts_(j) = cfg.sigma_tau > 0.0 ? rng.symmetric(cfg.sigma_tau) : 0.0;
  off_diagonal_ = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 0; j < d - 1; ++j) {
    off_diagonal_(j + 1, j) = bond_shifts_(j);
    off_diagonal_(j, j + 1) = bond_shifts_(j);
  }
}

Eigen::MatrixXcd DisorderSample::diagonal_at(double t) const {
  const double drive =
      mode_ == DeltaMode::Constant ? delta_ : delta_ * std::sin(omega_ * t);
  const Eigen::Index d = site_shifts_.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;  // (-1)^{j-1} for 1-based j
    m(j, j) = sign * drive + site_shifts_(j);
  }
  return m;
}

bool DisorderSample::is_zero() const {
  return delta_ == 0.0 && site_shifts_.isZero(0.0) && bond_shifts_.isZero(0.0);
}

DisorderSample build_perturbations(const ChainSpec& spec, const DisorderConfig& cfg,
                                   double omega, RngStream& rng) {
  return DisorderSample(spec, cfg, omega, rng);
}

}  // namespace sshcd
