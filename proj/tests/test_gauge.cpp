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
#include <set>
#include <sstream>

#include "sshcd/errors.hpp"
#include "sshcd/gauge.hpp"

using namespace sshcd;

namespace {

Eigen::MatrixXcd lambda_family_generator(const ChainSpec& spec) {
  return h0_t1_pattern(spec) - h0_t2_pattern(spec);
}

// second-order triple commutator assembled term by term from its closed-form
// coefficient groups (oracle; global sign fixed by the matrix convention)
Eigen::MatrixXcd triple_commutator_oracle(int n, double t1, double t2) {
  const double lam = t1 + t2;
  const int d = 2 * n - 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  auto add = [&](int hi, int lo, double c) { m(hi - 1, lo - 1) += c; };
  for (int j = 1; j <= n - 2; ++j) {
    add(2 * j + 1, 2 * j - 1, 4.0 * lam * t2 * t2);
    add(2 * j + 2, 2 * j, -4.0 * lam * t2 * t2);
    add(2 * j + 3, 2 * j + 1, 3.0 * lam * t1 * t1);
    add(2 * j + 1, 2 * j - 1, lam * t1 * t1);
    add(2 * j + 2, 2 * j, -4.0 * lam * t1 * t1);
  }
  add(2 * n - 1, 2 * n - 3, lam * t2 * t2);
  add(2 * n - 1, 2 * n - 3, lam * t1 * t1);
  for (int j = 1; j <= n - 3; ++j) {
    add(2 * j + 3, 2 * j - 1, 4.0 * lam * t1 * t2);
    add(2 * j + 4, 2 * j, -4.0 * lam * t1 * t2);
  }
  add(2 * n - 1, 2 * n - 5, 4.0 * lam * t1 * t2);
  // displayed coefficient table carries the transposed sign convention; the
  // literal matrix commutator is its negative
  return -(m - m.transpose()).cast<std::complex<double>>();
}

}  // namespace

TEST_CASE("nested commutator basics") {
  const ChainSpec spec(3);
  const auto h0 = build_h0(spec, 0.8, 1.3);
  const auto dh0 = lambda_family_generator(spec);
  SUBCASE("depth zero returns the generator") {
    CHECK((nested_commutator(h0, dh0, 0) - dh0).norm() == 0.0);
  }
  SUBCASE("parity: hermitian for even depth, anti-hermitian for odd") {
    for (int m = 0; m <= 4; ++m) {
      const auto c = nested_commutator(h0, dh0, m);
      if (m % 2 == 0)
        CHECK((c - c.adjoint()).norm() < 1e-12);
      else
        CHECK((c + c.adjoint()).norm() < 1e-12);
    }
  }
  SUBCASE("dimension mismatch rejected") {
    CHECK_THROWS_AS(nested_commutator(h0, Eigen::MatrixXcd::Zero(3, 3), 1),
                    ValidationError);
  }
}

TEST_CASE("first commutator pattern at the symmetric point") {
  // C1 = [H0, dH0] = -Lambda * (pattern with +(3,1), +(5,3), -(4,2) rows)
  const ChainSpec spec(3);
  const auto h0 = build_h0(spec, 1.0, 1.0);
  const auto c1 = nested_commutator(h0, lambda_family_generator(spec), 1);
  const double lam = 2.0;
  CHECK(c1(2, 0).real() == doctest::Approx(-lam));
  CHECK(c1(4, 2).real() == doctest::Approx(-lam));
  CHECK(c1(3, 1).real() == doctest::Approx(lam));
  CHECK(c1(0, 2).real() == doctest::Approx(lam));
  CHECK(std::abs(c1(4, 0)) == 0.0);
}

TEST_CASE("triple commutator matches the coefficient table") {
  for (int n : {3, 4, 5}) {
    const ChainSpec spec(n);
    const double t1 = 0.8, t2 = 1.3;
    const auto c3 =
        nested_commutator(build_h0(spec, t1, t2), lambda_family_generator(spec), 3);
    CHECK((c3 - triple_commutator_oracle(n, t1, t2)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("closed-form anchors") {
  CHECK(alpha_closed_form(3, 1.0, 1.0, 1).alphas[0] == doctest::Approx(-1.0 / 6.0));
  const auto c2 = alpha_closed_form(3, 1.0, 1.0, 2);
  CHECK(c2.alphas[0] == doctest::Approx(-558.0 / 488.0));
  CHECK(c2.alphas[1] == doctest::Approx(66.0 / 488.0));
  // C(4) = 5/17
  CHECK(alpha_closed_form(4, 1.0, 1.0, 1).alphas[0] == doctest::Approx(-(5.0 / 17.0) / 2.0));
  CHECK_THROWS_AS(alpha_closed_form(3, 1.0, 1.0, 3), ValidationError);
  CHECK_THROWS_AS(alpha_closed_form(3, 0.0, 0.0, 1), ValidationError);
}

TEST_CASE("closed forms are symmetric in t1 <-> t2") {
  const auto a = alpha_closed_form(3, 1.0, 2.0, 2);
  const auto b = alpha_closed_form(3, 2.0, 1.0, 2);
  CHECK(a.alphas[0] == doctest::Approx(b.alphas[0]));
  CHECK(a.alphas[1] == doctest::Approx(b.alphas[1]));
}

TEST_CASE("numeric solve agrees with closed forms to 1e-9") {
  RngStream rng(2024);
  double worst = 0.0;
  for (int n = 3; n <= 8; ++n) {
    const ChainSpec spec(n);
    const auto dh0 = lambda_family_generator(spec);
    for (int trial = 0; trial < 50; ++trial) {
      const double t1 = rng.uniform(1e-3, 2.0);
      const double t2 = rng.uniform(1e-3, 2.0);
      const auto h0 = build_h0(spec, t1, t2);
      for (int order : {1, 2}) {
        const auto num = solve_alphas(h0, dh0, order);
        const auto ref = alpha_closed_form(n, t1, t2, order);
        for (int k = 0; k < order; ++k) {
          worst = std::max(worst, std::abs(num.alphas[static_cast<std::size_t>(k)] -
                                           ref.alphas[static_cast<std::size_t>(k)]) /
                                      std::abs(ref.alphas[static_cast<std::size_t>(k)]));
        }
      }
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("solve_alphas boundary point t2 = 0") {
  for (int n : {3, 5, 8}) {
    const ChainSpec spec(n);
    const auto got =
        solve_alphas(build_h0(spec, 1.0, 0.0), lambda_family_generator(spec), 1);
    const double cn = (2.0 * (n - 2) + 1.0) / (8.0 * (n - 2) + 1.0);
    CHECK(got.alphas[0] == doctest::Approx(-cn).epsilon(1e-12));
  }
}

TEST_CASE("solve_alphas rejects the degenerate point") {
  const ChainSpec spec(3);
  CHECK_THROWS_AS(
      solve_alphas(build_h0(spec, 0.0, 0.0), lambda_family_generator(spec), 1),
      NumericError);
}

TEST_CASE("action optimality and monotone improvement") {
  const ChainSpec spec(5);
  const double t1 = 1.318, t2 = 0.707;
  const auto h0 = build_h0(spec, t1, t2);
  const auto dh0 = lambda_family_generator(spec);
  double previous = 1e300;
  for (int order = 1; order <= 4; ++order) {
    const GaugeCoefficients coeffs = solve_alphas(h0, dh0, order);
    const double s0 = gauge_action(h0, dh0, coeffs);
    CHECK(s0 <= previous + 1e-10);
    previous = s0;
    for (int k = 0; k < order; ++k) {
      for (double eps : {1e-4, -1e-4}) {
        GaugeCoefficients bumped = coeffs;
        bumped.alphas[static_cast<std::size_t>(k)] += eps;
        CHECK(gauge_action(h0, dh0, bumped) >= s0 - 1e-12);
      }
    }
  }
}

TEST_CASE("driving operators: structure and coupling signs") {
  const ChainSpec spec(3);
  const Schedule schedule = Schedule::cosine_ramp(1.0, 1.0);
  SUBCASE("first-order sublattice-A strengths at mid-protocol") {
    const CdOperator cd =
        build_cd(spec, schedule, M_PI / 2.0, CdVariant{CdKind::NnnAOnly, 1});
    REQUIRE(cd.couplings.size() == 2);
    for (const auto& c : cd.couplings) {
      CHECK(c.site_high - c.site_low == 2);
      CHECK(c.site_high % 2 == 1);
      CHECK(c.strength == doctest::Approx(-1.0 / 3.0));
    }
    // entry (high-1, low-1) = +i kappa
    CHECK(cd.matrix.matrix()(2, 0).imag() == doctest::Approx(-1.0 / 3.0));
  }
  SUBCASE("zero at the protocol boundary") {
    const CdOperator cd = build_cd(spec, schedule, 0.0, CdVariant{CdKind::FullOrder, 2});
    CHECK(cd.matrix.matrix().norm() == 0.0);
    CHECK(cd.couplings.empty());
  }
  SUBCASE("second-order full support set") {
    const CdOperator cd =
        build_cd(spec, schedule, M_PI / 2.0, CdVariant{CdKind::FullOrder, 2});
    std::set<std::pair<int, int>> pairs;
    for (const auto& c : cd.couplings) pairs.insert({c.site_high, c.site_low});
    CHECK(pairs == std::set<std::pair<int, int>>{{3, 1}, {5, 3}, {4, 2}, {5, 1}});
    // strengths follow the displayed coefficient combinations
    const auto a = alpha_closed_form(3, 1.0, 1.0, 2);
    const double lamdot = -1.0;
    const double expected_31 = -2.0 * lamdot * (a.alphas[0] + a.alphas[1] * 5.0);
    for (const auto& c : cd.couplings) {
      if (c.site_high == 3) CHECK(c.strength == doctest::Approx(expected_31));
    }
  }
  SUBCASE("equal variant applies one strength to odd-odd bonds") {
    const CdOperator cd =
        build_cd(spec, schedule, M_PI / 2.0, CdVariant{CdKind::EqualNnnA, 2});
    const auto a = alpha_closed_form(3, 1.0, 1.0, 2);
    REQUIRE(cd.couplings.size() == 2);
    for (const auto& c : cd.couplings)
      CHECK(c.strength == doctest::Approx(-2.0 * (-1.0) * a.alphas[0]));
  }
  SUBCASE("driving is purely imaginary off-diagonal, zero diagonal") {
    const CdOperator cd =
        build_cd(spec, schedule, 1.1, CdVariant{CdKind::FullOrder, 2});
    const auto& m = cd.matrix.matrix();
    CHECK(m.diagonal().norm() == 0.0);
    CHECK(m.real().cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("support pattern distances") {
  const ChainSpec spec(3);
  const Schedule schedule = Schedule::cosine_ramp(1.0, 1.0);
  const auto cd1 = build_cd(spec, schedule, 1.0, CdVariant{CdKind::FullOrder, 1});
  for (const auto& entry : support_pattern(cd1.matrix.matrix())) {
    CHECK(entry.distance == 2);
  }
  const auto cd2 = build_cd(spec, schedule, 1.0, CdVariant{CdKind::FullOrder, 2});
  for (const auto& entry : support_pattern(cd2.matrix.matrix())) {
    CHECK((entry.distance == 2 || entry.distance == 4));
  }
}

TEST_CASE("range law: order-d driving reaches exactly the even distances up to min(2d, 2N-2)") {
  const double t1 = 1.318, t2 = 0.707;
  for (int n = 3; n <= 6; ++n) {
    const ChainSpec spec(n);
    const auto h0 = build_h0(spec, t1, t2);
    const auto dh0 = lambda_family_generator(spec);
    for (int d = 1; d <= n - 1; ++d) {
      const auto a = gauge_potential(h0, dh0, solve_alphas(h0, dh0, d));
      std::set<int> got;
      for (const auto& entry : support_pattern(a)) got.insert(entry.distance);
      std::set<int> expected;
      for (int dist = 2; dist <= std::min(2 * d, 2 * n - 2); dist += 2)
        expected.insert(dist);
      CHECK(got == expected);
    }
  }
}

TEST_CASE("residual generator has only odd distances") {
  const double t1 = 1.318, t2 = 0.707;
  for (int n : {3, 5, 6}) {
    const ChainSpec spec(n);
    const auto h0 = build_h0(spec, t1, t2);
    const auto dh0 = lambda_family_generator(spec);
    for (int order = 1; order <= std::min(4, n - 1); ++order) {
      const auto coeffs = solve_alphas(h0, dh0, order);
      const auto a = gauge_potential(h0, dh0, coeffs);
      const Eigen::MatrixXcd g =
          dh0 - std::complex<double>(0, 1) * (h0.matrix() * a - a * h0.matrix());
      for (const auto& entry : support_pattern(g)) CHECK(entry.distance % 2 == 1);
    }
  }
}

TEST_CASE("trig-family generator stays finite at the endpoint") {
  const ChainSpec spec(3);
  const Schedule schedule = Schedule::trig_half_angle(1.0, 1.0);
  const CdGenerator gen = cd_generator(schedule, 0.0);
  CHECK(gen.rate == doctest::Approx(-0.5));
  CHECK(std::isfinite(gen.c1));
  CHECK(std::isfinite(gen.c2));
  const CdOperator cd = build_cd(spec, schedule, 0.0, CdVariant{CdKind::FullOrder, 1});
  CHECK(std::isfinite(cd.matrix.matrix().norm()));
}

TEST_CASE("variant parsing") {
  CHECK(CdVariant::parse("full2").kind == CdKind::FullOrder);
  CHECK(CdVariant::parse("full2").order == 2);
  CHECK(CdVariant::parse("suba1").kind == CdKind::SublatticeA);
  CHECK(CdVariant::parse("nnn3").order == 3);
  CHECK(CdVariant::parse("equal2").kind == CdKind::EqualNnnA);
  CHECK_THROWS_AS(CdVariant::parse("bogus1"), ValidationError);
  CHECK_THROWS_AS(CdVariant::parse("full"), ValidationError);
}

TEST_CASE("gauge csv shape and mid-row value") {
  const ChainSpec spec(3, 1.0, 2.0);
  const Schedule schedule = Schedule::cosine_ramp(1.0, 1.0);
  const std::string csv = gauge_csv(spec, schedule, 1, 201);
  std::size_t lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 202);  // header + 201 rows
  // row 101 is t = T/2 where kappa = -1/3
  std::istringstream in(csv);
  std::string line;
  for (int i = 0; i <= 101; ++i) std::getline(in, line);
  std::vector<double> cells;
  std::string cell;
  std::istringstream row(line);
  while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
  REQUIRE(cells.size() == 4);  // t, alpha_1, kappa_31, kappa_53
  CHECK(cells[0] == doctest::Approx(M_PI / 2.0));
  CHECK(cells[1] == doctest::Approx(-1.0 / 6.0));
  CHECK(cells[2] == doctest::Approx(-1.0 / 3.0));
  CHECK(cells[3] == doctest::Approx(-1.0 / 3.0));
}
