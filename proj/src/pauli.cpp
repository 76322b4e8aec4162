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

#include "sshcd/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "sshcd/errors.hpp"
#include "sshcd/io.hpp"

namespace sshcd {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};
constexpr double kPrune = 1e-12;

int qubits_for(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

Eigen::Matrix2cd pauli_letter(char ch) {
  Eigen::Matrix2cd m;
  switch (ch) {
    case 'I': m << 1, 0, 0, 1; return m;
    case 'X': m << 0, 1, 1, 0; return m;
    case 'Y': m << 0, -kImag, kImag, 0; return m;
    case 'Z': m << 1, 0, 0, -1; return m;
    default: throw ValidationError(std::string("unknown Pauli letter '") + ch + "'");
  }
}

// digits of x, msb first, over `width` bits
std::vector<int> bit_digits(int x, int width) {
  std::vector<int> d(width);
  for (int i = 0; i < width; ++i) d[i] = (x >> (width - 1 - i)) & 1;
  return d;
}

using TermMap = std::map<std::string, double>;

void accumulate(TermMap& into, const TermMap& terms, double scale = 1.0) {
  for (const auto& [label, coeff] : terms) into[label] += scale * coeff;
}

// tensor a projector-chain prefix (each slot expands D_x = (I +/- Z)/2 or a
// literal letter) with a core term family
struct Slot {
  std::vector<std::pair<char, double>> options;
};

Slot projector_slot(int x) {
  return {{{'I', 0.5}, {'Z', x == 0 ? 0.5 : -0.5}}};
}

Slot identity_slot() { return {{{'I', 1.0}}}; }
Slot letter_slot(char ch) { return {{{ch, 1.0}}}; }

TermMap expand(const std::vector<Slot>& prefix, const TermMap& core, int n_qubits) {
  TermMap prefixed{{"", 1.0}};
  for (const auto& slot : prefix) {
    TermMap next;
    for (const auto& [label, coeff] : prefixed) {
      for (const auto& [ch, w] : slot.options) next[label + ch] += coeff * w;
    }
    prefixed = std::move(next);
  }
  TermMap out;
  for (const auto& [pl, pc] : prefixed) {
    for (const auto& [cl, cc] : core) {
      const std::string label = pl + cl;
      if (static_cast<int>(label.size()) != n_qubits)
        throw NumericError("pauli: internal slot-count mismatch");
      out[label] += pc * cc;
    }
  }
  return out;
}

// sign factor of a skew-diagonal string: (-1)^((floor(nY/2) + nY-in-tail) mod 2)
double skew_sign(const std::string& s) {
  const long n_y = std::count(s.begin(), s.end(), 'Y');
  const long tail_y = std::count(s.begin() + 1, s.end(), 'Y');
  return ((n_y / 2 + tail_y) % 2 == 0) ? 1.0 : -1.0;
}

// sum over all X/Y strings of length m with even/odd Y count, weighted
// skew_sign / 2^{m-1}; the skew-diagonal corner hop of an m-qubit register
TermMap skew_sum(int m, bool odd_y) {
  TermMap out;
  const double scale = std::ldexp(1.0, -(m - 1));
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::string s(m, 'X');
    int n_y = 0;
    for (int b = 0; b < m; ++b) {
      if ((mask >> (m - 1 - b)) & 1) {
        s[b] = 'Y';
        ++n_y;
      }
    }
    if ((n_y % 2 == 1) != odd_y) continue;
    out[s] += skew_sign(s) * scale;
  }
  return out;
}

TermMap skew_sum_with_d0(int m, bool odd_y) {
  TermMap core = skew_sum(m, odd_y);
  TermMap out;
  for (const auto& [label, coeff] : core) {
    out[label + 'I'] += 0.5 * coeff;
    out[label + 'Z'] += 0.5 * coeff;
  }
  return out;
}

bool power_of_two(int x) { return x > 0 && (x & (x - 1)) == 0; }

// comparator decomposition of sum_{m < bound} |m><m| over `width` bits,
// emitted as projector-chain prefixes handed to `emit`
template <typename Emit>
void comparator_terms(int bound, int width, Emit emit) {
  const std::vector<int> digits = bit_digits(bound, width);
  for (int i = 0; i < width; ++i) {
    if (digits[i] != 1) continue;
    std::vector<Slot> prefix;
    for (int j = 0; j < i; ++j) prefix.push_back(projector_slot(digits[j]));
    prefix.push_back(projector_slot(0));
    emit(std::move(prefix), i);
  }
}

TermMap structured_t2(int n_cells, int n) {
  // bonds (2m, 2m+1): projector onto top bits m < N-1, X on the last qubit
  TermMap out;
  comparator_terms(n_cells - 1, n - 1, [&](std::vector<Slot> prefix, int i) {
    for (int k = 0; k < n - 2 - i; ++k) prefix.push_back(identity_slot());
    accumulate(out, expand(prefix, {{"X", 1.0}}, n));
  });
  return out;
}

TermMap structured_t1(int n_cells, int n) {
  TermMap out;
  if (power_of_two(n_cells)) {
    for (int m = 2; m <= n; ++m) {
      std::vector<Slot> prefix(static_cast<std::size_t>(n - m), identity_slot());
      accumulate(out, expand(prefix, skew_sum(m, false), n));
    }
    return out;
  }
  const std::vector<int> d = bit_digits(n_cells, n);
  const std::vector<int> c = bit_digits(n_cells - 1, n - 1);
  for (int m = 2; m <= n - 2; ++m) {
    for (int i = 0; i <= n - m - 1; ++i) {
      if (d[1 + i] != 1) continue;  // digit d_{n-2-i}
      std::vector<Slot> prefix;
      for (int j = 0; j < i; ++j) prefix.push_back(projector_slot(d[1 + j]));
      prefix.push_back(projector_slot(0));
      for (int k = 0; k < n - m - i - 1; ++k) prefix.push_back(identity_slot());
      accumulate(out, expand(prefix, skew_sum(m, false), n));
    }
  }
  // (I + Z^{c_{n-3}+1})/2 * S^e_{n-1} + S^e_n
  std::vector<Slot> head{c[1] == 0 ? projector_slot(0) : identity_slot()};
  accumulate(out, expand(head, skew_sum(n - 1, false), n));
  accumulate(out, expand({}, skew_sum(n, false), n));
  return out;
}

TermMap structured_kappa(int n_cells, int n) {
  TermMap out;
  if (power_of_two(n_cells)) {
    for (int m = 1; m <= n - 1; ++m) {
      std::vector<Slot> prefix(static_cast<std::size_t>(n - m - 1), identity_slot());
      accumulate(out, expand(prefix, skew_sum_with_d0(m, true), n));
    }
    return out;
  }
  const std::vector<int> d = bit_digits(n_cells, n);
  const std::vector<int> c = bit_digits(n_cells - 1, n - 1);
  for (int m = 1; m <= n - 3; ++m) {
    // slot budget caps the scan at n-m-2 (one fewer than the t1 family:
    // the trailing D_0 occupies the last qubit)
    for (int i = 0; i <= n - m - 2; ++i) {
      if (d[1 + i] != 1) continue;
      std::vector<Slot> prefix;
      for (int j = 0; j < i; ++j) prefix.push_back(projector_slot(d[1 + j]));
      prefix.push_back(projector_slot(0));
      for (int k = 0; k < n - m - i - 2; ++k) prefix.push_back(identity_slot());
      accumulate(out, expand(prefix, skew_sum_with_d0(m, true), n));
    }
  }
  std::vector<Slot> head{c[1] == 0 ? projector_slot(0) : identity_slot()};
  accumulate(out, expand(head, skew_sum_with_d0(n - 2, true), n));
  accumulate(out, expand({}, skew_sum_with_d0(n - 1, true), n));
  return out;
}

TermMap structured_rice_mele(int n_cells, int n) {
  TermMap out;
  const std::vector<int> c = bit_digits(n_cells - 1, n - 1);
  comparator_terms(n_cells - 1, n - 1, [&](std::vector<Slot> prefix, int i) {
    for (int k = 0; k < n - 2 - i; ++k) prefix.push_back(identity_slot());
    accumulate(out, expand(prefix, {{"Z", 1.0}}, n));
  });
  std::vector<Slot> exact;
  for (int j = 0; j < n - 1; ++j) exact.push_back(projector_slot(c[j]));
  exact.push_back(projector_slot(0));
  accumulate(out, expand(exact, {{"", 1.0}}, n));
  return out;
}

std::vector<PauliTerm> to_terms(const TermMap& map) {
  std::vector<PauliTerm> out;
  for (const auto& [label, coeff] : map) {
    if (std::abs(coeff) > kPrune) out.push_back({label, coeff});
  }
  return out;
}

}  // namespace

PaddedOperator pad(const HermitianOperator& h) {
  const int n = qubits_for(h.dim());
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  m.topLeftCorner(h.dim(), h.dim()) = h.matrix();
  return {n, std::move(m)};
}

Eigen::MatrixXcd pauli_string_matrix(const std::string& label) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (char ch : label) {
    m = Eigen::kroneckerProduct(m, pauli_letter(ch)).eval();
  }
  return m;
}

Eigen::MatrixXcd terms_to_matrix(const std::vector<PauliTerm>& terms, int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : terms) {
    if (static_cast<int>(term.label.size()) != n_qubits)
      throw ValidationError("terms_to_matrix: label width mismatch");
    m += term.coefficient * pauli_string_matrix(term.label);
  }
  return m;
}

std::vector<PauliTerm> decompose_brute(const PaddedOperator& h) {
  const int n = h.n_qubits;
  const double dev = (h.matrix - h.matrix.adjoint()).cwiseAbs().maxCoeff();
  if (dev >= 1e-12) throw ValidationError("decompose_brute: non-Hermitian input");
  std::vector<PauliTerm> out;
  const long strings = 1L << (2 * n);
  for (long code = 0; code < strings; ++code) {
    std::string label(n, 'I');
    long c = code;
    for (int q = 0; q < n; ++q) {
      label[q] = "IXYZ"[c & 3];
      c >>= 2;
    }
    const std::complex<double> coeff =
        (pauli_string_matrix(label) * h.matrix).trace() / static_cast<double>(1L << n);
    if (std::abs(coeff.imag()) > 1e-10)
      throw NumericError("decompose_brute: complex coefficient from Hermitian input");
    if (std::abs(coeff.real()) > kPrune) out.push_back({label, coeff.real()});
  }
  std::sort(out.begin(), out.end(),
            [](const PauliTerm& a, const PauliTerm& b) { return a.label < b.label; });
  return out;
}

Eigen::MatrixXcd part_matrix(const ChainSpec& spec, double t1, double t2,
                             DecompositionPart part) {
  const int n = qubits_for(spec.sites());
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  switch (part) {
    case DecompositionPart::Ht2:
      m.topLeftCorner(spec.sites(), spec.sites()) = t2 * h0_t2_pattern(spec);
      break;
    case DecompositionPart::Ht1:
      m.topLeftCorner(spec.sites(), spec.sites()) = t1 * h0_t1_pattern(spec);
      break;
    case DecompositionPart::KappaPattern:
      for (int j = 1; j < spec.n_cells; ++j) {
        m(2 * j, 2 * j - 2) = kImag;
        m(2 * j - 2, 2 * j) = -kImag;
      }
      break;
    case DecompositionPart::RiceMele:
      for (int j = 0; j < spec.sites(); ++j) m(j, j) = (j % 2 == 0) ? 1.0 : -1.0;
      break;
  }
  return m;
}

std::vector<PauliTerm> decompose_structured(const ChainSpec& spec, double t1, double t2,
                                            DecompositionPart part) {
  if (spec.n_cells < 2 || spec.n_cells > 8)
    throw ValidationError("decompose_structured: supported for 2 <= N <= 8");
  const int n = qubits_for(spec.sites());
  TermMap map;
  switch (part) {
    case DecompositionPart::Ht2:
      map = structured_t2(spec.n_cells, n);
      if (t2 != 1.0)
        for (auto& [label, coeff] : map) coeff *= t2;
      break;
    case DecompositionPart::Ht1:
      map = structured_t1(spec.n_cells, n);
      if (t1 != 1.0)
        for (auto& [label, coeff] : map) coeff *= t1;
      break;
    case DecompositionPart::KappaPattern:
      map = structured_kappa(spec.n_cells, n);
      break;
    case DecompositionPart::RiceMele:
      map = structured_rice_mele(spec.n_cells, n);
      break;
  }
  return to_terms(map);
}

KappaSchedule::KappaSchedule(KappaMode mode, int r, double horizon,
                             Eigen::MatrixXd samples)
    : mode_(mode), r_(r), horizon_(horizon), samples_(std::move(samples)) {}

int KappaSchedule::free_parameter_count(int n_cells, KappaMode mode, int r) {
  return mode == KappaMode::Equal ? r - 1 : (n_cells / 2) * (r - 1);
}

KappaSchedule KappaSchedule::from_free_parameters(const ChainSpec& spec, KappaMode mode,
                                                  int r, double horizon,
                                                  const Eigen::VectorXd& theta) {
  if (r < 2) throw ValidationError("KappaSchedule: need r >= 2");
  if (theta.size() != free_parameter_count(spec.n_cells, mode, r))
    throw ValidationError("KappaSchedule: wrong free-parameter count");
  const int bonds = spec.n_cells - 1;
  Eigen::MatrixXd samples = Eigen::MatrixXd::Zero(bonds, r + 1);
  if (mode == KappaMode::Equal) {
    for (int b = 0; b < bonds; ++b) samples.block(b, 1, 1, r - 1) = theta.transpose();
  } else {
    const int n = spec.n_cells;
    for (int i = 1; i <= n / 2; ++i) {
      Eigen::VectorXd arr = Eigen::VectorXd::Zero(r + 1);
      arr.segment(1, r - 1) = theta.segment((i - 1) * (r - 1), r - 1);
      if (2 * i == n) {
        // self-mirrored middle bond: symmetrize so the time-reflection
        // constraint holds exactly
        const Eigen::VectorXd rev = arr.reverse();
        arr = 0.5 * (arr + rev);
      }
      samples.row(i - 1) = arr.transpose();
      samples.row(n - i - 1) = arr.reverse().transpose();
    }
  }
  return KappaSchedule(mode, r, horizon, std::move(samples));
}

KappaSchedule KappaSchedule::from_samples(const ChainSpec& spec, KappaMode mode,
                                          double horizon, Eigen::MatrixXd samples) {
  if (samples.rows() != spec.n_cells - 1)
    throw ValidationError("KappaSchedule: need one row per bond");
  if (samples.cols() < 3) throw ValidationError("KappaSchedule: need r >= 2");
  const int r = static_cast<int>(samples.cols()) - 1;
  KappaSchedule out(mode, r, horizon, std::move(samples));
  out.validate(spec.n_cells);
  return out;
}

void KappaSchedule::validate(int n_cells) const {
  for (int b = 0; b < bonds(); ++b) {
    if (samples_(b, 0) != 0.0 || samples_(b, r_) != 0.0)
      throw ValidationError("KappaSchedule: boundary values must be exactly zero");
  }
  if (mode_ == KappaMode::Equal) {
    for (int b = 1; b < bonds(); ++b) {
      if ((samples_.row(b) - samples_.row(0)).cwiseAbs().maxCoeff() > 0.0)
        throw ValidationError("KappaSchedule: Equal mode requires one shared array");
    }
  } else {
    for (int i = 1; i <= n_cells / 2; ++i) {
      const Eigen::VectorXd mirror = samples_.row(n_cells - i - 1).reverse();
      if ((samples_.row(i - 1).transpose() - mirror).cwiseAbs().maxCoeff() > 1e-12)
        throw ValidationError("KappaSchedule: time-reflection symmetry violated");
    }
  }
}

double KappaSchedule::interpolate(int bond, double t) const {
  const double dt = horizon_ / r_;
  if (t <= 0.0) return samples_(bond, 0);
  if (t >= horizon_) return samples_(bond, r_);
  const int k = static_cast<int>(t / dt);
  const double w = (t - k * dt) / dt;
  return (1.0 - w) * samples_(bond, k) + w * samples_(bond, std::min(k + 1, r_));
}

Eigen::VectorXd KappaSchedule::free_parameters() const {
  if (mode_ == KappaMode::Equal) return samples_.row(0).segment(1, r_ - 1);
  const int n = bonds() + 1;
  Eigen::VectorXd theta((n / 2) * (r_ - 1));
  for (int i = 1; i <= n / 2; ++i)
    theta.segment((i - 1) * (r_ - 1), r_ - 1) = samples_.row(i - 1).segment(1, r_ - 1);
  return theta;
}

Eigen::MatrixXcd kappa_to_matrix(const ChainSpec& spec, const Eigen::VectorXd& kappas,
                                 int n_qubits) {
  if (kappas.size() != spec.n_cells - 1)
    throw ValidationError("kappa_to_matrix: one strength per bond required");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j = 1; j < spec.n_cells; ++j) {
    m(2 * j, 2 * j - 2) = kImag * kappas(j - 1);
    m(2 * j - 2, 2 * j) = -kImag * kappas(j - 1);
  }
  return m;
}

TrotterEngine::TrotterEngine(const ChainSpec& spec, const Schedule& schedule, int r,
                             bool h0_on)
    : spec_(spec),
      r_(r),
      dt_(schedule.horizon() / r),
      h0_on_(h0_on),
      n_qubits_(qubits_for(spec.sites())) {
  if (r < 2) throw ValidationError("TrotterEngine: need r >= 2");
  if (h0_on_) {
    h0_factors_.reserve(r_);
    for (int k = 1; k <= r_; ++k) {
      const Hoppings h = schedule.at(k * dt_);
      const PaddedOperator padded = pad(build_h0(spec_, h.t1, h.t2));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(padded.matrix);
      const Eigen::VectorXcd phases =
          (std::complex<double>(0.0, -dt_) * eig.eigenvalues().array()).exp();
      h0_factors_.push_back(eig.eigenvectors() * phases.asDiagonal() *
                            eig.eigenvectors().adjoint());
    }
  }
}

StateVector TrotterEngine::run(const KappaSchedule& kappa) const {
  if (kappa.steps() != r_) throw ValidationError("TrotterEngine: step-count mismatch");
  if (kappa.bonds() != spec_.n_cells - 1)
    throw ValidationError("TrotterEngine: bond-count mismatch");
  StateVector psi = StateVector::Zero(dimension());
  psi(0) = 1.0;
  Eigen::VectorXd strengths(kappa.bonds());
  for (int k = 1; k <= r_; ++k) {
    if (h0_on_) psi = h0_factors_[static_cast<std::size_t>(k - 1)] * psi;
    for (int b = 0; b < kappa.bonds(); ++b) strengths(b) = kappa.value(b, k);
    if (strengths.cwiseAbs().maxCoeff() > 0.0) {
      const Eigen::MatrixXcd hcd = kappa_to_matrix(spec_, strengths, n_qubits_);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hcd);
      const Eigen::VectorXcd phases =
          (std::complex<double>(0.0, -dt_) * eig.eigenvalues().array()).exp();
      psi = eig.eigenvectors() *
            (phases.array() * (eig.eigenvectors().adjoint() * psi).array()).matrix();
    }
  }
  return psi;
}

StateVector trotter_propagate(const ChainSpec& spec, const Schedule& schedule,
                              const KappaSchedule& kappa, bool h0_on) {
  TrotterEngine engine(spec, schedule, kappa.steps(), h0_on);
  return engine.run(kappa);
}

std::vector<long> sample_counts(const StateVector& psi, long n_shot, RngStream& rng) {
  if (n_shot < 1) throw ValidationError("sample_counts: n_shot must be >= 1");
  const Eigen::Index dim = psi.size();
  Eigen::VectorXd probs = psi.cwiseAbs2().real();
  probs /= probs.sum();
  std::vector<double> cumulative(static_cast<std::size_t>(dim));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    acc += probs(i);
    cumulative[static_cast<std::size_t>(i)] = acc;
  }
  cumulative.back() = 1.0;
  std::vector<long> counts(static_cast<std::size_t>(dim), 0);
  for (long s = 0; s < n_shot; ++s) {
    const double u = rng.uniform01();
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
    ++counts[static_cast<std::size_t>(it - cumulative.begin())];
  }
  return counts;
}

std::string term_list_text(const std::vector<PauliTerm>& terms) {
  std::ostringstream out;
  for (const auto& term : terms) {
    out << format_full(term.coefficient) << ' ' << term.label << '\n';
  }
  return out.str();
}

}  // namespace sshcd
