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

#include <doctest.h>

#include <cmath>

#include "sshcd/errors.hpp"
#include "sshcd/variational.hpp"

using namespace sshcd;

TEST_CASE("warm start from the first-order strengths") {
  const ChainSpec spec(3, 1.0, 2.0);
  const Schedule schedule = Schedule::cosine_ramp(1.0, 1.0);
  const int r = 22;
  const KappaSchedule k = init_kappa(spec, schedule, r, 4.5, KappaMode::Equal, -2.5);
  CHECK(k.value(0, 0) == 0.0);
  CHECK(k.value(0, r) == 0.0);
  // midpoint grid value: 4.5 * kappa1(T/2) = 4.5 * (-1/3), inside the bounds
  CHECK(k.value(0, r / 2) == doctest::Approx(4.5 * (-1.0 / 3.0)));
  CHECK((k.samples().row(0) - k.samples().row(1)).norm() == 0.0);
  // bounds respected after clipping
  CHECK(k.samples().minCoeff() >= -2.5);
  CHECK(k.samples().maxCoeff() <= 0.0);
}

TEST_CASE("warm start clipping engages for large scale factors") {
  const ChainSpec spec(3, 1.0, 2.0);
  const Schedule schedule = Schedule::cosine_ramp(1.0, 1.0);
  const KappaSchedule k = init_kappa(spec, schedule, 22, 20.0, KappaMode::Equal, -2.5);
  CHECK(k.samples().minCoeff() == doctest::Approx(-2.5));
}

TEST_CASE("fidelity cost") {
  StateVector psi = StateVector::Zero(8);
  psi(4) = 1.0;
  CHECK(cost_fidelity(psi, 4) == doctest::Approx(0.0));
  psi.setZero();
  psi(0) = 1.0;
  CHECK(cost_fidelity(psi, 4) == doctest::Approx(1.0));
  psi.setZero();
  psi(4) = std::sqrt(0.9);
  psi(0) = std::sqrt(0.1);
  CHECK(cost_fidelity(psi, 4) == doctest::Approx(0.1));
  CHECK_THROWS_AS(cost_fidelity(psi, 9), ValidationError);
}

TEST_CASE("hellinger cost against the delta target") {
  std::vector<long> counts(8, 0);
  counts[4] = 100;
  CHECK(cost_hellinger(counts, 4) == doctest::Approx(0.0));
  counts[4] = 0;
  counts[0] = 100;
  CHECK(cost_hellinger(counts, 4) == doctest::Approx(1.0));
  counts[4] = 100;
  CHECK(cost_hellinger(counts, 4) == doctest::Approx(1.0 - std::sqrt(0.5)));
  CHECK_THROWS_AS(cost_hellinger({}, 0), ValidationError);
}

TEST_CASE("hellinger and fidelity costs agree under exact probabilities") {
  // 1 - H^2 = sqrt(F); both costs therefore order any pair of states the same
  const ChainSpec spec(3, 1.0, 2.0);
  const Schedule schedule = Schedule::cosine_ramp(1.0, 1.0);
  const TrotterEngine engine(spec, schedule, 10, true);
  RngStream rng(5);
  double prev_f = -1.0, prev_h = -1.0;
  for (int trial = 0; trial < 6; ++trial) {
    Eigen::VectorXd theta(9);
    for (int i = 0; i < 9; ++i) theta(i) = -rng.uniform01();
    const auto kappa =
        KappaSchedule::from_free_parameters(spec, KappaMode::Equal, 10, M_PI, theta);
    const StateVector psi = engine.run(kappa);
    const double f = 1.0 - cost_fidelity(psi, engine.target_index());
    const double h2_exact = 1.0 - std::sqrt(f);
    CHECK(1.0 - h2_exact == doctest::Approx(std::sqrt(f)));
    if (prev_f >= 0.0) {
      CHECK(((f > prev_f) == (h2_exact < prev_h) || f == prev_f));
    }
    prev_f = f;
    prev_h = h2_exact;
  }
}

TEST_CASE("spsa on a quadratic bowl") {
  SpsaGains gains;
  gains.a = 0.5;
  gains.stability = 50.0;
  CostFunction cost = [](const Eigen::VectorXd& theta) { return theta.squaredNorm(); };
  Eigen::VectorXd theta0 = Eigen::VectorXd::Constant(6, -1.0);
  RngStream rng(123);
  const SpsaResult result = spsa_minimize(cost, theta0, -2.0, 2.0, 500, gains, rng);
  CHECK(result.best_cost < 1e-2 * cost(theta0));
  CHECK(result.trace.size() == 500);
  // running minimum of the trace is non-increasing
  double best = 1e300;
  for (double y : result.trace) {
    best = std::min(best, y);
    CHECK(best <= y + 1e-15);
  }
}

TEST_CASE("spsa edge cases") {
  SpsaGains gains;
  gains.a = 0.1;
  gains.stability = 10.0;
  CostFunction cost = [](const Eigen::VectorXd& theta) { return theta.squaredNorm(); };
  Eigen::VectorXd theta0 = Eigen::VectorXd::Constant(3, -0.5);
  SUBCASE("zero iterations returns theta0") {
    RngStream rng(1);
    const SpsaResult r = spsa_minimize(cost, theta0, -1.0, 1.0, 0, gains, rng);
    CHECK(r.best.isApprox(theta0));
    CHECK(r.final_iterate.isApprox(theta0));
  }
  SUBCASE("same seed gives bitwise-identical traces") {
    RngStream a(42), b(42);
    const SpsaResult ra = spsa_minimize(cost, theta0, -1.0, 1.0, 100, gains, a);
    const SpsaResult rb = spsa_minimize(cost, theta0, -1.0, 1.0, 100, gains, b);
    CHECK(ra.trace == rb.trace);
    CHECK(ra.best == rb.best);
  }
  SUBCASE("bound violation rejected") {
    RngStream rng(1);
    Eigen::VectorXd outside = Eigen::VectorXd::Constant(3, 5.0);
    CHECK_THROWS_AS(spsa_minimize(cost, outside, -1.0, 1.0, 10, gains, rng),
                    ValidationError);
  }
}

TEST_CASE("optimize_transfer report contract") {
  const ChainSpec spec(3, 1.0, 2.0);
  const Schedule schedule = Schedule::cosine_ramp(1.0, 1.0);
  OptimizerConfig cfg;
  cfg.iterations = 120;
  cfg.runs = 3;
  cfg.seed = 9;
  cfg.workers = 2;
  const OptimizationReport report = optimize_transfer(spec, schedule, cfg);
  CHECK(report.runs.size() == 3);
  for (const auto& run : report.runs) {
    CHECK(run.cost_trace.size() == 120);
    CHECK(run.sigma_kappa >= 4.0);
    CHECK(run.sigma_kappa <= 5.0);
    // emitted schedules respect bounds, boundary zeros and the mode contract
    CHECK(run.kappa_samples.minCoeff() >= cfg.kappa_bound);
    CHECK(run.kappa_samples.maxCoeff() <= 0.0);
    CHECK(run.kappa_samples.col(0).norm() == 0.0);
    CHECK(run.kappa_samples.col(cfg.trotter_steps).norm() == 0.0);
    CHECK((run.kappa_samples.row(0) - run.kappa_samples.row(1)).norm() == 0.0);
    CHECK(run.final_fidelity >= 0.0);
    CHECK(run.final_fidelity <= 1.0);
  }
  SUBCASE("deterministic under the master seed, independent of worker count") {
    OptimizerConfig serial = cfg;
    serial.workers = 1;
    const OptimizationReport again = optimize_transfer(spec, schedule, serial);
    CHECK(again.mean_fidelity == report.mean_fidelity);
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
      CHECK(again.runs[i].final_fidelity == report.runs[i].final_fidelity);
      CHECK(again.runs[i].kappa_samples == report.runs[i].kappa_samples);
    }
  }
}

TEST_CASE("optimize_transfer respects the distinct-symmetric constraint") {
  const ChainSpec spec(4, 1.0, 2.0);
  const Schedule schedule = Schedule::cosine_ramp(1.0, 1.0);
  OptimizerConfig cfg;
  cfg.iterations = 60;
  cfg.runs = 2;
  cfg.mode = KappaMode::DistinctSymmetric;
  cfg.seed = 30;
  const OptimizationReport report = optimize_transfer(spec, schedule, cfg);
  const int r = cfg.trotter_steps;
  for (const auto& run : report.runs) {
    for (int i = 1; i <= spec.n_cells / 2; ++i) {
      for (int k = 0; k <= r; ++k) {
        CHECK(run.kappa_samples(i - 1, k) ==
              doctest::Approx(run.kappa_samples(spec.n_cells - i - 1, r - k)));
      }
    }
  }
}

TEST_CASE("hellinger-optimized run improves the transfer probability") {
  const ChainSpec spec(3, 1.0, 2.0);
  const Schedule schedule = Schedule::cosine_ramp(1.0, 1.0);
  OptimizerConfig cfg;
  cfg.iterations = 150;
  cfg.runs = 2;
  cfg.cost = CostKind::Hellinger;
  cfg.n_shot = 512;
  cfg.seed = 21;
  const OptimizationReport report = optimize_transfer(spec, schedule, cfg);
  CHECK(report.mean_fidelity > 0.8);  // smoke floor at this tiny budget
}
