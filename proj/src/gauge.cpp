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

#include "sshcd/gauge.hpp"

#include <cctype>
#include <cmath>
#include <complex>
#include <sstream>

#include "sshcd/errors.hpp"
#include "sshcd/io.hpp"

namespace sshcd {

namespace {
constexpr std::complex<double> kImag{0.0, 1.0};

// C_0, C_1, ..., C_max as one sweep.
std::vector<Eigen::MatrixXcd> commutator_chain(const Eigen::MatrixXcd& h0,
                                               const Eigen::MatrixXcd& dh0, int max) {
  std::vector<Eigen::MatrixXcd> c;
  c.reserve(max + 1);
  c.push_back(dh0);
  for (int m = 1; m <= max; ++m) c.push_back(h0 * c.back() - c.back() * h0);
  return c;
}

bool odd_site(int index0) { return index0 % 2 == 0; }  // 1-based site 2k+1

}  // namespace

std::string CdVariant::name() const {
  std::string base;
  switch (kind) {
    case CdKind::FullOrder: base = "full"; break;
    case CdKind::SublatticeA: base = "suba"; break;
    case CdKind::NnnAOnly: base = "nnn"; break;
    case CdKind::EqualNnnA: base = "equal"; break;
  }
  return base + std::to_string(order);
}

CdVariant CdVariant::parse(const std::string& text) {
  std::string base;
  std::size_t pos = 0;
  while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) {
    base += static_cast<char>(std::tolower(static_cast<unsigned char>(text[pos])));
    ++pos;
  }
  std::string digits = text.substr(pos);
  CdVariant v;
  if (base == "full") v.kind = CdKind::FullOrder;
  else if (base == "suba") v.kind = CdKind::SublatticeA;
  else if (base == "nnn") v.kind = CdKind::NnnAOnly;
  else if (base == "equal") v.kind = CdKind::EqualNnnA;
  else throw ValidationError("CdVariant: unknown kind in '" + text + "'");
  if (digits.empty()) throw ValidationError("CdVariant: missing order in '" + text + "'");
  v.order = std::stoi(digits);
  if (v.order < 1) throw ValidationError("CdVariant: order must be >= 1");
  return v;
}

Eigen::MatrixXcd nested_commutator(const HermitianOperator& h0,
                                   const Eigen::MatrixXcd& dh0, int depth) {
  if (depth < 0) throw ValidationError("nested_commutator: depth must be >= 0");
  if (h0.dim() != dh0.rows() || dh0.rows() != dh0.cols())
    throw ValidationError("nested_commutator: dimension mismatch");
  Eigen::MatrixXcd c = dh0;
  for (int m = 0; m < depth; ++m) c = h0.matrix() * c - c * h0.matrix();
  return c;
}

GaugeCoefficients solve_alphas(const HermitianOperator& h0,
                               const Eigen::MatrixXcd& dh0, int order) {
  if (order < 1) throw ValidationError("solve_alphas: order must be >= 1");
  if (h0.dim() != dh0.rows() || dh0.rows() != dh0.cols())
    throw ValidationError("solve_alphas: dimension mismatch");
  const auto c = commutator_chain(h0.matrix(), dh0, 2 * order);
  Eigen::MatrixXd gram(order, order);
  Eigen::VectorXd rhs(order);
  for (int j = 1; j <= order; ++j) {
    rhs(j - 1) = -std::real((c[0] * c[2 * j]).trace());
    for (int k = j; k <= order; ++k) {
      const double v = std::real((c[2 * j] * c[2 * k]).trace());
      gram(j - 1, k - 1) = v;
      gram(k - 1, j - 1) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double emax = eig.eigenvalues().cwiseAbs().maxCoeff();
  const double emin = eig.eigenvalues().cwiseAbs().minCoeff();
  if (!(emax > 0.0) || emax / emin > 1e12)
    throw NumericError("solve_alphas: degenerate operating point, Gram matrix singular");
  Eigen::VectorXd alpha = gram.ldlt().solve(rhs);
  const double residual = (gram * alpha - rhs).norm() / rhs.norm();
  if (rhs.norm() > 0.0 && residual > 1e-8)
    throw NumericError("solve_alphas: normal-equation residual too large");
  GaugeCoefficients out;
  out.order = order;
  out.alphas.assign(alpha.data(), alpha.data() + order);
  return out;
}

GaugeCoefficients alpha_closed_form(int n_cells, double t1, double t2, int order) {
  if (order != 1 && order != 2)
    throw ValidationError("alpha_closed_form: unsupported order (need 1 or 2)");
  if (t1 == 0.0 && t2 == 0.0)
    throw ValidationError("alpha_closed_form: degenerate input t1 = t2 = 0");
  const double N = n_cells;
  const double s2 = t1 * t1 + t2 * t2;
  GaugeCoefficients out;
  out.order = order;
  if (order == 1) {
    const double cN = (2.0 * (N - 2.0) + 1.0) / (8.0 * (N - 2.0) + 1.0);
    out.alphas = {-cN / s2};
    return out;
  }
  const double q = t1 * t1 * t2 * t2;
  const double p4 = t1 * t1 * t1 * t1 + t2 * t2 * t2 * t2;
  const double p8 = p4 * p4 - 2.0 * q * q;  // t1^8 + t2^8
  const double den = 72.0 * (N - 2.0) * p8 +
                     (8.0 * N * (128.0 * N - 581.0) + 4851.0) * q * p4 +
                     2.0 * (16.0 * N * (32.0 * N - 99.0) + 193.0) * q * q;
  const double a1 = -s2 *
                    (90.0 * (N - 2.0) * p4 + (2.0 * N * (256.0 * N - 1039.0) + 1725.0) * q) /
                    den;
  const double a2 =
      (18.0 * (N - 2.0) * p4 + 2.0 * (32.0 * N * (N - 4.0) + 111.0) * q) / den;
  out.alphas = {a1, a2};
  return out;
}

CdGenerator cd_generator(const Schedule& schedule, double t) {
  const Hoppings h = schedule.at(t);
  if (schedule.has_lambda_sum()) return {1.0, -1.0, h.lambda_dot};
  // trig family: d(t2)/d(lambda) = -t1/t2 diverges at t2 -> 0; rescale the
  // generator by t2 and fold 1/t2 into the rate, which stays finite.
  const double omega = M_PI / schedule.horizon();
  return {h.t2, -h.t1, -0.5 * omega};
}

Eigen::MatrixXcd gauge_potential(const HermitianOperator& h0,
                                 const Eigen::MatrixXcd& dh0,
                                 const GaugeCoefficients& coeffs) {
  const auto c = commutator_chain(h0.matrix(), dh0, 2 * coeffs.order - 1);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dh0.rows(), dh0.cols());
  for (int k = 1; k <= coeffs.order; ++k) a += kImag * coeffs.alphas[k - 1] * c[2 * k - 1];
  return a;
}

double gauge_action(const HermitianOperator& h0, const Eigen::MatrixXcd& dh0,
                    const GaugeCoefficients& coeffs) {
  const auto c = commutator_chain(h0.matrix(), dh0, 2 * coeffs.order);
  Eigen::MatrixXcd g = c[0];
  for (int k = 1; k <= coeffs.order; ++k) g += coeffs.alphas[k - 1] * c[2 * k];
  return std::real((g * g).trace());
}

CdOperator build_cd(const ChainSpec& spec, const Schedule& schedule, double t,
                    const CdVariant& variant) {
  const Hoppings hop = schedule.at(t);
  const HermitianOperator h0 = build_h0(spec, hop.t1, hop.t2);
  const CdGenerator gen = cd_generator(schedule, t);
  const int d = spec.sites();
  Eigen::MatrixXcd cd = Eigen::MatrixXcd::Zero(d, d);

  if (std::abs(gen.rate) > 0.0) {
    if (variant.kind == CdKind::EqualNnnA) {
      // single strength -Lambda*lambda_dot*alpha_1 on every odd-odd
      // distance-2 bond; entry (high, low) = +i*kappa
      const GaugeCoefficients coeffs =
          solve_alphas(h0, gen.c1 * h0_t1_pattern(spec) + gen.c2 * h0_t2_pattern(spec),
                       variant.order);
      const double kappa = -schedule.lambda_sum() * hop.lambda_dot * coeffs.alphas[0];
      for (int j = 1; j < spec.n_cells; ++j) {
        cd(2 * j, 2 * j - 2) = kImag * kappa;
        cd(2 * j - 2, 2 * j) = -kImag * kappa;
      }
    } else {
      const Eigen::MatrixXcd dh0 =
          gen.c1 * h0_t1_pattern(spec) + gen.c2 * h0_t2_pattern(spec);
      const GaugeCoefficients coeffs = solve_alphas(h0, dh0, variant.order);
      const Eigen::MatrixXcd full = gen.rate * gauge_potential(h0, dh0, coeffs);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          if (i == j) continue;
          const bool both_even = !odd_site(i) && !odd_site(j);
          const bool nnn_a = odd_site(i) && odd_site(j) && std::abs(i - j) == 2;
          bool keep = true;
          if (variant.kind == CdKind::SublatticeA) keep = !both_even;
          if (variant.kind == CdKind::NnnAOnly) keep = nnn_a;
          if (keep) cd(i, j) = full(i, j);
        }
      }
    }
  }

  CdOperator out{HermitianOperator(cd), {}};
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < i; ++j) {
      if (std::abs(cd(i, j)) > 1e-15) {
        out.couplings.push_back({i + 1, j + 1, cd(i, j).imag()});
      }
    }
  }
  return out;
}

std::vector<SupportEntry> support_pattern(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw ValidationError("support_pattern: matrix must be square");
  std::vector<SupportEntry> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(m(i, j)) > 1e-12) {
        out.push_back({static_cast<int>(i) + 1, static_cast<int>(j) + 1,
                       static_cast<int>(i - j)});
      }
    }
  }
  return out;
}

namespace {

// Least-norm action minimizer for grid exports. At schedule endpoints with
// order >= 3 the commutator family loses rank (one hopping vanishes) and the
// minimizer is non-unique; the Gram system is then solved in the min-norm
// least-squares sense instead of failing.
GaugeCoefficients solve_alphas_least_norm(const HermitianOperator& h0,
                                          const Eigen::MatrixXcd& dh0, int order) {
  try {
    return solve_alphas(h0, dh0, order);
  } catch (const NumericError&) {
    if (h0.matrix().norm() == 0.0) throw;
    std::vector<Eigen::MatrixXcd> c;
    c.push_back(dh0);
    for (int m = 1; m <= 2 * order; ++m)
      c.push_back(h0.matrix() * c.back() - c.back() * h0.matrix());
    Eigen::MatrixXd gram(order, order);
    Eigen::VectorXd rhs(order);
    for (int j = 1; j <= order; ++j) {
      rhs(j - 1) = -std::real((c[0] * c[2 * j]).trace());
      for (int k = 1; k <= order; ++k)
        gram(j - 1, k - 1) = std::real((c[2 * j] * c[2 * k]).trace());
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gram);
    const Eigen::VectorXd alpha = cod.solve(rhs);
    GaugeCoefficients out;
    out.order = order;
    out.alphas.assign(alpha.data(), alpha.data() + order);
    return out;
  }
}

}  // namespace

std::string gauge_csv(const ChainSpec& spec, const Schedule& schedule, int order,
                      int points) {
  if (points < 2) throw ValidationError("gauge_csv: need at least 2 grid points");
  // columns: t, alpha_1..alpha_l, then kappa for every odd-odd pair the
  // order-l driving can reach, nearest bonds first (distance, then site)
  const double T = schedule.horizon();
  std::vector<std::pair<int, int>> pairs;  // (high, low), odd-odd
  const int max_distance = std::min(2 * order, 2 * spec.n_cells - 2);
  for (int distance = 2; distance <= max_distance; distance += 2) {
    for (int low = 1; low + distance <= spec.sites(); low += 2) {
      pairs.emplace_back(low + distance, low);
    }
  }
  std::vector<std::string> header{"t"};
  for (int k = 1; k <= order; ++k) header.push_back("alpha_" + std::to_string(k));
  for (const auto& p : pairs)
    header.push_back("kappa_" + std::to_string(p.first) + std::to_string(p.second));

  std::vector<std::vector<double>> rows;
  rows.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double t = T * static_cast<double>(i) / (points - 1);
    const Hoppings hop = schedule.at(t);
    const HermitianOperator h0 = build_h0(spec, hop.t1, hop.t2);
    const CdGenerator gen = cd_generator(schedule, t);
    const Eigen::MatrixXcd dh0 =
        gen.c1 * h0_t1_pattern(spec) + gen.c2 * h0_t2_pattern(spec);
    const GaugeCoefficients coeffs = solve_alphas_least_norm(h0, dh0, order);
    std::vector<double> row{t};
    for (double a : coeffs.alphas) row.push_back(a);
    const Eigen::MatrixXcd cd = gen.rate * gauge_potential(h0, dh0, coeffs);
    for (const auto& p : pairs) row.push_back(cd(p.first - 1, p.second - 1).imag());
    rows.push_back(std::move(row));
  }
  return csv_table(header, rows);
}

}  // namespace sshcd
