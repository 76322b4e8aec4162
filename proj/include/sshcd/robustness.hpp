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

#include <cstdint>
#include <optional>
#include <vector>

#include "sshcd/chain.hpp"
#include "sshcd/dynamics.hpp"
#include "sshcd/gauge.hpp"
#include "sshcd/pauli.hpp"

namespace sshcd {

/// Where the driving comes from in a robustness run: an analytic variant,
/// a fixed optimized schedule (linearly interpolated, assembled as the
/// sublattice-A imaginary-hopping operator), or nothing.
struct CdSource {
  enum class Kind { None, Analytic, FixedKappa };
  Kind kind = Kind::None;
  std::optional<CdVariant> variant;         // Analytic
  std::optional<KappaSchedule> kappa;       // FixedKappa

  static CdSource none() { return {}; }
  static CdSource analytic(CdVariant v);
  static CdSource fixed(KappaSchedule k);
};

enum class SweepAxis { RiceMeleConstant, RiceMeleSine, DiagonalDisorder, HoppingDisorder };

struct SweepSpec {
  SweepAxis axis = SweepAxis::DiagonalDisorder;
  std::vector<double> values;  // strengths in units of t0
  int n_samples = 200;
  std::uint64_t seed = 0;
  CdSource cd;
  bool h0_on = true;  // false reproduces the drivings-only protocol

  void validate() const;
};

/// Transfer fidelity of one perturbed evolution: integrate the time-dependent
/// equation under H0 (optional) + driving + diagonal detuning/disorder +
/// hopping disorder.
double perturbed_run(const ChainSpec& spec, const Schedule& schedule, const CdSource& cd,
                     const DisorderSample& sample, bool h0_on = true,
                     int initial_steps = 4096);

struct SweepPoint {
  double value = 0.0;
  double mean_f = 0.0;
  double std_f = 0.0;
  int n_samples = 0;
};

/// Monte-Carlo sweep: fresh quenched realizations per sample, deterministic
/// per-sample streams derived from (seed, value index, sample index). The
/// detuning axes are deterministic and run one sample per value.
std::vector<SweepPoint> disorder_sweep(const ChainSpec& spec, const Schedule& schedule,
                                       const SweepSpec& sweep, int workers = 0);

}  // namespace sshcd
