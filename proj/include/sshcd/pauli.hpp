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
#include <string>
#include <vector>

#include "sshcd/chain.hpp"
#include "sshcd/dynamics.hpp"
#include "sshcd/rng.hpp"

namespace sshcd {

/// One Pauli string with a real weight. The leftmost letter acts on the
/// highest-order qubit.
struct PauliTerm {
  std::string label;
  double coefficient = 0.0;
};

struct PaddedOperator {
  int n_qubits = 0;
  Eigen::MatrixXcd matrix;  // 2^n x 2^n, site block top-left, zero elsewhere
};

/// Embed a site-space operator in the smallest qubit register,
/// n = ceil(log2(dim)).
PaddedOperator pad(const HermitianOperator& h);

/// Dense matrix of one Pauli string.
Eigen::MatrixXcd pauli_string_matrix(const std::string& label);

/// Reassemble sum coeff * string (test oracle for decompositions).
Eigen::MatrixXcd terms_to_matrix(const std::vector<PauliTerm>& terms, int n_qubits);

/// Trace-projection decomposition: coefficient of P is tr(P H)/2^n; terms with
/// |coeff| < 1e-12 are pruned. Labels come out sorted.
std::vector<PauliTerm> decompose_brute(const PaddedOperator& h);

enum class DecompositionPart { Ht2, Ht1, KappaPattern, RiceMele };

/// Closed-form term families built from the binary digits of N-1 and N,
/// diagonal projector chains and skew-diagonal string sums. Scaled by the
/// matching prefactor: t2 for Ht2, t1 for Ht1; KappaPattern and RiceMele are
/// unit-strength patterns. Equals decompose_brute of the corresponding matrix.
std::vector<PauliTerm> decompose_structured(const ChainSpec& spec, double t1, double t2,
                                            DecompositionPart part);

/// The matrices the structured parts decompose (unit-strength patterns in the
/// padded register; KappaPattern carries entry (high, low) = +i per bond).
Eigen::MatrixXcd part_matrix(const ChainSpec& spec, double t1, double t2,
                             DecompositionPart part);

enum class KappaMode { DistinctSymmetric, Equal };

/// Discretized per-bond driving strengths on the Trotter grid: r+1 samples per
/// bond with zero endpoints. DistinctSymmetric ties bond i at step k to bond
/// N-i at step r-k; Equal shares one array across bonds.
class KappaSchedule {
 public:
  /// Materialize from the free interior parameters (column-major per free
  /// bond, r-1 interior values each).
  static KappaSchedule from_free_parameters(const ChainSpec& spec, KappaMode mode,
                                            int r, double horizon,
                                            const Eigen::VectorXd& theta);
  /// Adopt explicit per-bond arrays ((N-1) x (r+1)); validates endpoints and
  /// the mode constraint.
  static KappaSchedule from_samples(const ChainSpec& spec, KappaMode mode,
                                    double horizon, Eigen::MatrixXd samples);

  KappaMode mode() const { return mode_; }
  int steps() const { return r_; }
  double horizon() const { return horizon_; }
  int bonds() const { return static_cast<int>(samples_.rows()); }
  const Eigen::MatrixXd& samples() const { return samples_; }
  double value(int bond, int k) const { return samples_(bond, k); }

  /// Piecewise-linear interpolation of bond strength to arbitrary t in [0, T].
  double interpolate(int bond, double t) const;

  static int free_parameter_count(int n_cells, KappaMode mode, int r);
  Eigen::VectorXd free_parameters() const;

 private:
  KappaSchedule(KappaMode mode, int r, double horizon, Eigen::MatrixXd samples);
  void validate(int n_cells) const;
  KappaMode mode_;
  int r_;
  double horizon_;
  Eigen::MatrixXd samples_;  // (N-1) x (r+1)
};

/// Driving matrix in the padded register at explicit per-bond strengths:
/// entry (2j, 2j-2) = +i kappa_j (0-based), conjugate below.
Eigen::MatrixXcd kappa_to_matrix(const ChainSpec& spec, const Eigen::VectorXd& kappas,
                                 int n_qubits);

/// First-order product emulation with cached chain factors. Each step k
/// applies exp(-i H0(k dt) dt) then exp(-i Hcd(k dt) dt), both as exact
/// exponentials of the sampled generator (right-endpoint sampling).
class TrotterEngine {
 public:
  TrotterEngine(const ChainSpec& spec, const Schedule& schedule, int r, bool h0_on);

  StateVector run(const KappaSchedule& kappa) const;

  int n_qubits() const { return n_qubits_; }
  int dimension() const { return 1 << n_qubits_; }
  int target_index() const { return 2 * spec_.n_cells - 2; }
  double dt() const { return dt_; }

 private:
  ChainSpec spec_;
  int r_;
  double dt_;
  bool h0_on_;
  int n_qubits_;
  std::vector<Eigen::MatrixXcd> h0_factors_;  // exp(-i H0(k dt) dt), k = 1..r
};

/// Single-call form of the engine.
StateVector trotter_propagate(const ChainSpec& spec, const Schedule& schedule,
                              const KappaSchedule& kappa, bool h0_on);

/// Multinomial measurement histogram over the 2^n computational outcomes.
std::vector<long> sample_counts(const StateVector& psi, long n_shot, RngStream& rng);

/// One line per term: "<signed coefficient> <label>", 17 significant digits.
std::string term_list_text(const std::vector<PauliTerm>& terms);

}  // namespace sshcd
