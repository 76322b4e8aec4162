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

namespace sshcd {

/// Variational coefficients of the commutator-expanded gauge potential.
struct GaugeCoefficients {
  int order = 0;               // expansion order l >= 1
  std::vector<double> alphas;  // alpha_k, k = 1..l
};

/// One imaginary hopping: matrix entries (high-1, low-1) = +i*strength and
/// its conjugate. Site indices are 1-based with high > low.
struct Coupling {
  int site_high = 0;
  int site_low = 0;
  double strength = 0.0;
};

enum class CdKind {
  FullOrder,    // all terms of the order-l driving
  SublatticeA,  // drop even-even (sublattice B) hoppings
  NnnAOnly,     // keep only odd-odd distance-2 hoppings
  EqualNnnA,    // odd-odd distance-2 with the single strength -Lambda*lambda_dot*alpha_1
};

struct CdVariant {
  CdKind kind = CdKind::FullOrder;
  int order = 1;  // l >= 1

  std::string name() const;
  /// Parse "full2", "suba2", "nnn1", "equal2", ... Throws on anything else.
  static CdVariant parse(const std::string& text);
};

/// Assembled driving at one instant plus its coupling list.
struct CdOperator {
  HermitianOperator matrix;
  std::vector<Coupling> couplings;
};

struct SupportEntry {
  int site_high = 0;  // 1-based, high > low
  int site_low = 0;
  int distance = 0;
};

/// C_m with C_0 = dh0 and C_m = [h0, C_{m-1}]. Hermitian for even m,
/// anti-Hermitian for odd m.
Eigen::MatrixXcd nested_commutator(const HermitianOperator& h0,
                                   const Eigen::MatrixXcd& dh0, int depth);

/// Minimize tr(G^2), G = C_0 + sum_k alpha_k C_2k, via the Gram system
/// M alpha = -b with M_jk = tr(C_2j C_2k), b_j = tr(C_0 C_2j). Throws
/// NumericError when the Gram matrix condition number exceeds 1e12
/// (the degenerate point t1 = t2 = 0).
GaugeCoefficients solve_alphas(const HermitianOperator& h0,
                               const Eigen::MatrixXcd& dh0, int order);

/// Closed forms for orders 1 and 2 of the constant-sum hopping family.
/// Order 1: alpha_1 = -C(N)/(t1^2+t2^2), C(N) = (2(N-2)+1)/(8(N-2)+1).
GaugeCoefficients alpha_closed_form(int n_cells, double t1, double t2, int order);

/// Control-derivative generator for a schedule: dh0 = c1 * t1-pattern +
/// c2 * t2-pattern, with the driving rate such that H_cd = rate * A(dh0).
/// For the constant-sum family this is (1, -1, lambda_dot); the trig family
/// uses the rescaled generator (t2, -t1, lambda_dot/t2) whose rate -omega/2
/// stays finite at the t2 = 0 endpoint.
struct CdGenerator {
  double c1 = 1.0;
  double c2 = -1.0;
  double rate = 0.0;
};
CdGenerator cd_generator(const Schedule& schedule, double t);

/// Gauge potential of the given order at fixed hoppings:
/// A = i sum_k alpha_k C_{2k-1}.
Eigen::MatrixXcd gauge_potential(const HermitianOperator& h0,
                                 const Eigen::MatrixXcd& dh0,
                                 const GaugeCoefficients& coeffs);

/// Driving operator at time t, filtered per variant. Coupling strengths
/// follow kappa = Im H_cd(high, low); the first-order strength on every
/// odd-odd bond is -Lambda*lambda_dot*alpha_1, negative at mid-protocol.
CdOperator build_cd(const ChainSpec& spec, const Schedule& schedule, double t,
                    const CdVariant& variant);

/// Index pairs (1-based, high > low) with |entry| > 1e-12 and their distances.
std::vector<SupportEntry> support_pattern(const Eigen::MatrixXcd& m);

/// Action value tr(G^2) at given coefficients (test and diagnostics hook).
double gauge_action(const HermitianOperator& h0, const Eigen::MatrixXcd& dh0,
                    const GaugeCoefficients& coeffs);

/// CSV of alpha_k(t) and the sublattice-A coupling strengths kappa_ij(t) on a
/// uniform grid of `points` rows over [0, T].
std::string gauge_csv(const ChainSpec& spec, const Schedule& schedule, int order,
                      int points);

}  // namespace sshcd
