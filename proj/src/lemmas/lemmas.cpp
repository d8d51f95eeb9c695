// Copyright 2026 The CHFS Lab Authors
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

#include "chfs/lemmas/lemmas.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "chfs/core/errors.hpp"
#include "chfs/core/gates.hpp"
#include "chfs/core/haar.hpp"
#include "chfs/core/linalg.hpp"
#include "chfs/core/parallel.hpp"
#include "chfs/core/stats.hpp"
#include "chfs/statetests/state_tests.hpp"

namespace chfs {

namespace {

VerificationReport make_report(std::string id, ClaimKind kind, double claim,
                               double estimate, double se, std::uint64_t samples) {
  VerificationReport r;
  r.lemma_id = std::move(id);
  r.claim_kind = kind;
  r.claimed_value = claim;
  r.estimate = estimate;
  r.standard_error = se;
  r.samples = samples;
  r.verdict = judge(kind, estimate, claim, se);
  return r;
}

/// Violated dominates Inconclusive, which dominates Consistent.
Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::Violated || b == Verdict::Violated) return Verdict::Violated;
  if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) {
    return Verdict::Inconclusive;
  }
  return Verdict::Consistent;
}

PureState gaussian_state(Eigen::Index dim, Rng& rng) {
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(rng.normal(), rng.normal());
  return PureState::normalized(std::move(v));
}

CMatrix hermitian_exp_i(const CMatrix& h, double eta) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    phases(i) = std::exp(Complex(0.0, -eta * es.eigenvalues()(i)));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Consistent: return "Consistent";
    case Verdict::Violated: return "Violated";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(ClaimKind k) {
  switch (k) {
    case ClaimKind::Equality: return "equality";
    case ClaimKind::UpperBound: return "upper_bound";
    case ClaimKind::LowerBound: return "lower_bound";
  }
  return "?";
}

Verdict judge(ClaimKind kind, double estimate, double claim, double se) {
  const double slack = std::max(kVerdictSigmas * se, kExactSlack);
  bool violated = false;
  switch (kind) {
    case ClaimKind::Equality: violated = std::abs(estimate - claim) > slack; break;
    case ClaimKind::UpperBound: violated = estimate > claim + slack; break;
    case ClaimKind::LowerBound: violated = estimate < claim - slack; break;
  }
  return violated ? Verdict::Violated : Verdict::Consistent;
}

double VerificationReport::z_score() const {
  const double diff = estimate - claimed_value;
  if (standard_error > 0.0) return diff / standard_error;
  if (std::abs(diff) <= kExactSlack) return 0.0;
  return diff > 0 ? HUGE_VAL : -HUGE_VAL;
}

nlohmann::json VerificationReport::to_json() const {
  return nlohmann::json{{"lemma_id", lemma_id},
                        {"claim_kind", to_string(claim_kind)},
                        {"claimed_value", claimed_value},
                        {"estimate", estimate},
                        {"standard_error", standard_error},
                        {"samples", samples},
                        {"verdict", to_string(verdict)},
                        {"notes", notes},
                        {"details", details}};
}

VerificationReport VerificationReport::from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.lemma_id = j.at("lemma_id").get<std::string>();
  const auto kind = j.at("claim_kind").get<std::string>();
  if (kind == "equality") {
    r.claim_kind = ClaimKind::Equality;
  } else if (kind == "upper_bound") {
    r.claim_kind = ClaimKind::UpperBound;
  } else if (kind == "lower_bound") {
    r.claim_kind = ClaimKind::LowerBound;
  } else {
    throw std::invalid_argument("VerificationReport: unknown claim_kind " + kind);
  }
  r.claimed_value = j.at("claimed_value").get<double>();
  r.estimate = j.at("estimate").get<double>();
  r.standard_error = j.at("standard_error").get<double>();
  r.samples = j.at("samples").get<std::uint64_t>();
  const auto verdict = j.at("verdict").get<std::string>();
  if (verdict == "Consistent") {
    r.verdict = Verdict::Consistent;
  } else if (verdict == "Violated") {
    r.verdict = Verdict::Violated;
  } else if (verdict == "Inconclusive") {
    r.verdict = Verdict::Inconclusive;
  } else {
    throw std::invalid_argument("VerificationReport: unknown verdict " + verdict);
  }
  r.notes = j.value("notes", std::vector<std::string>{});
  r.details = j.value("details", nlohmann::json::object());
  return r;
}

std::string reports_markdown(const std::vector<VerificationReport>& reports) {
  std::ostringstream out;
  out << "| lemma | claim | claimed | estimate | SE | samples | verdict |\n";
  out << "|---|---|---|---|---|---|---|\n";
  out << std::setprecision(6);
  for (const auto& r : reports) {
    out << "| " << r.lemma_id << " | " << to_string(r.claim_kind) << " | "
        << r.claimed_value << " | " << r.estimate << " | " << r.standard_error
        << " | " << r.samples << " | " << to_string(r.verdict) << " |\n";
  }
  return out.str();
}

// Haar-measure identities ----------------------------------------------------

VerificationReport verify_haar_projection(int n, int rank, std::uint64_t samples,
                                          Rng& rng, int m) {
  if (m < 0) m = n;
  require(n >= 1 && m >= n, "verify_haar_projection: need 1 <= n <= m");
  check_qubit_cap(m);
  require(rank >= 1 && static_cast<std::size_t>(rank) <= dim_of(n),
          "verify_haar_projection: rank must be in [1, 2^n]");
  require(samples >= 1, "verify_haar_projection: samples must be positive");
  const CMatrix q = haar_unitary(m, rng).matrix().leftCols(rank);
  const int pad = m - n;
  RunningStats stats;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const PureState phi = haar_state(n, rng);
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim_of(m)));
    for (Eigen::Index i = 0; i < phi.amplitudes().size(); ++i) {
      v(i << pad) = phi.amplitudes()(i);
    }
    stats.add((q.adjoint() * v).squaredNorm());
  }
  const double claim = static_cast<double>(rank) / static_cast<double>(dim_of(n));
  auto r = make_report("haar-projection",
                       m == n ? ClaimKind::Equality : ClaimKind::UpperBound, claim,
                       stats.mean(), stats.standard_error(), samples);
  r.details = {{"n", n}, {"m", m}, {"rank", rank}, {"min", stats.min()},
               {"max", stats.max()}};
  return r;
}

VerificationReport verify_concentration_overlap(int n, double eps,
                                                std::uint64_t samples, Rng& rng) {
  require(eps >= 0.0 && eps <= 1.0, "verify_concentration_overlap: eps must be in [0, 1]");
  require(samples >= 1, "verify_concentration_overlap: samples must be positive");
  check_qubit_cap(n);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const PureState psi = haar_state(n, rng);
    if (std::norm(psi.amplitudes()(0)) >= 1.0 - eps) ++hits;
  }
  const double claim = std::pow(eps, static_cast<double>(dim_of(n) - 1));
  const double est = static_cast<double>(hits) / static_cast<double>(samples);
  auto r = make_report("concentration-overlap", ClaimKind::Equality, claim, est,
                       bernoulli_se(claim, samples), samples);
  r.details = {{"n", n}, {"eps", eps}, {"hits", hits}};
  return r;
}

VerificationReport verify_lubkin(int d_s, int d_sbar, std::uint64_t samples,
                                 Rng& rng) {
  require(d_s >= 1 && d_sbar >= 1, "verify_lubkin: dimensions must be positive");
  require(samples >= 1, "verify_lubkin: samples must be positive");
  const auto total = static_cast<std::size_t>(d_s) * static_cast<std::size_t>(d_sbar);
  require(total <= dim_of(Limits{}.max_qubits), "verify_lubkin: dimension above cap");
  RunningStats stats;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const PureState psi = gaussian_state(static_cast<Eigen::Index>(total), rng);
    const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                         Eigen::RowMajor>>
        block(psi.amplitudes().data(), d_s, d_sbar);
    const CMatrix rho_s = block * block.adjoint();
    stats.add(rho_s.squaredNorm());
  }
  auto r = make_report("lubkin", ClaimKind::Equality, lubkin_expectation(d_s, d_sbar),
                       stats.mean(), stats.standard_error(), samples);
  r.details = {{"d_s", d_s}, {"d_sbar", d_sbar}};
  return r;
}

VerificationReport verify_swap_test(int n, int rank, std::uint64_t shots, Rng& rng) {
  require(shots >= 1, "verify_swap_test: shots must be positive");
  const DensityMatrix rho = random_density(n, rank, rng);
  const DensityMatrix sigma = random_density(n, rank, rng);
  const double overlap = (rho.matrix() * sigma.matrix()).trace().real();
  const double claim = (1.0 + overlap) / 2.0;
  std::uint64_t passes = 0;
  for (std::uint64_t s = 0; s < shots; ++s) {
    if (swap_test_sample(rho, sigma, rng).passed) ++passes;
  }
  const double est = static_cast<double>(passes) / static_cast<double>(shots);
  auto r = make_report("swap-test", ClaimKind::Equality, claim, est,
                       bernoulli_se(claim, shots), shots);
  r.details = {{"n", n}, {"rank", rank}, {"exact_prob", swap_test_prob(rho, sigma)},
               {"overlap", overlap}};
  if (std::abs(swap_test_prob(rho, sigma) - claim) > tol::kStructural) {
    r.verdict = Verdict::Violated;
    r.notes.emplace_back("exact swap-test probability disagrees with (1 + Tr rho sigma)/2");
  }
  return r;
}

double product_test_haar_bound(int m) {
  require(m >= 1, "product_test_haar_bound: m must be positive");
  return 2.0 * std::pow(0.75, m);
}

VerificationReport verify_product_test_haar(int m, std::uint64_t samples, Rng& rng) {
  require(m >= 1 && m <= kMaxProductTestParts,
          "verify_product_test_haar: m outside [1, 16]");
  const SubsystemSpec spec = SubsystemSpec::qubits(m);
  const double exact = lubkin_product_test_mean(spec);
  const double bound = product_test_haar_bound(m);
  if (samples == 0) {
    auto r = make_report("product-test-haar", ClaimKind::UpperBound, bound, exact, 0.0, 0);
    r.details = {{"m", m}, {"lubkin_sum", exact}, {"bound", bound}};
    r.notes.emplace_back("analytic: exact Lubkin sum against the bound");
    return r;
  }
  check_qubit_cap(m);
  RunningStats stats;
  for (std::uint64_t s = 0; s < samples; ++s) {
    stats.add(product_test_prob(haar_state(m, rng), spec));
  }
  auto r = make_report("product-test-haar", ClaimKind::Equality, exact, stats.mean(),
                       stats.standard_error(), samples);
  const Verdict bound_verdict =
      judge(ClaimKind::UpperBound, stats.mean(), bound, stats.standard_error());
  r.verdict = combine(r.verdict, bound_verdict);
  r.details = {{"m", m}, {"lubkin_sum", exact}, {"bound", bound},
               {"bound_ok", bound_verdict == Verdict::Consistent}};
  return r;
}

// Measurement decomposition --------------------------------------------------

MeasuredStep MeasuredStep::apply(std::vector<int> targets, CMatrix unitary) {
  MeasuredStep s;
  s.kind = Kind::Unitary;
  s.targets = std::move(targets);
  s.unitary = std::move(unitary);
  return s;
}

MeasuredStep MeasuredStep::measure(int qubit) {
  MeasuredStep s;
  s.kind = Kind::Measure;
  s.qubit = qubit;
  return s;
}

MeasuredStep MeasuredStep::trace_out(int qubit) {
  MeasuredStep s;
  s.kind = Kind::TraceOut;
  s.qubit = qubit;
  return s;
}

int MeasuredCircuit::measurements() const {
  return static_cast<int>(std::count_if(steps.begin(), steps.end(), [](const auto& s) {
    return s.kind == MeasuredStep::Kind::Measure;
  }));
}

bool MeasuredCircuit::pure() const {
  return std::none_of(steps.begin(), steps.end(), [](const auto& s) {
    return s.kind == MeasuredStep::Kind::TraceOut;
  });
}

void MeasuredCircuit::validate() const {
  require(n_qubits >= 1, "MeasuredCircuit: need at least one qubit");
  check_qubit_cap(n_qubits);
  for (const auto& s : steps) {
    if (s.kind == MeasuredStep::Kind::Unitary) {
      for (int q : s.targets) {
        require(q >= 0 && q < n_qubits, "MeasuredCircuit: target out of range");
      }
      const auto d = static_cast<Eigen::Index>(dim_of(static_cast<int>(s.targets.size())));
      require(s.unitary.rows() == d && s.unitary.cols() == d,
              "MeasuredCircuit: unitary shape does not match its targets");
      UnitaryMatrix check(s.unitary);
    } else {
      require(s.qubit >= 0 && s.qubit < n_qubits, "MeasuredCircuit: qubit out of range");
    }
  }
}

MeasuredCircuit engineered_decomposition_circuit(int data_qubits, int t,
                                                 double eps_budget, Rng& rng) {
  require(data_qubits >= 1 && t >= 0, "engineered_decomposition_circuit: bad shape");
  require(eps_budget > 0.0 && eps_budget < 1.0,
          "engineered_decomposition_circuit: eps_budget must be in (0, 1)");
  MeasuredCircuit c;
  c.n_qubits = data_qubits + t;
  std::vector<int> data(static_cast<std::size_t>(data_qubits));
  for (int i = 0; i < data_qubits; ++i) data[static_cast<std::size_t>(i)] = i;
  c.steps.push_back(MeasuredStep::apply(data, haar_unitary(data_qubits, rng).matrix()));
  for (int i = 0; i < t; ++i) {
    const int flag = data_qubits + i;
    const int control = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(data_qubits)));
    if (rng.bernoulli(0.5)) c.steps.push_back(MeasuredStep::apply({flag}, pauli_x()));
    const double minority = (1.0 - rng.uniform()) * eps_budget / (2.0 * t);
    const double theta = 2.0 * std::asin(std::sqrt(minority));
    CMatrix cry = CMatrix::Identity(4, 4);
    cry(2, 2) = std::cos(theta / 2.0);
    cry(2, 3) = -std::sin(theta / 2.0);
    cry(3, 2) = std::sin(theta / 2.0);
    cry(3, 3) = std::cos(theta / 2.0);
    c.steps.push_back(MeasuredStep::apply({control, flag}, cry));
    c.steps.push_back(MeasuredStep::measure(flag));
    c.steps.push_back(MeasuredStep::apply(data, haar_unitary(data_qubits, rng).matrix()));
  }
  std::vector<int> all(static_cast<std::size_t>(c.n_qubits));
  for (int i = 0; i < c.n_qubits; ++i) all[static_cast<std::size_t>(i)] = i;
  c.steps.push_back(MeasuredStep::apply(all, haar_unitary(c.n_qubits, rng).matrix()));
  return c;
}

MeasuredCircuit fair_coin_circuit(int data_qubits, Rng& rng) {
  require(data_qubits >= 1, "fair_coin_circuit: need at least one qubit");
  MeasuredCircuit c;
  c.n_qubits = data_qubits;
  std::vector<int> all(static_cast<std::size_t>(data_qubits));
  for (int i = 0; i < data_qubits; ++i) all[static_cast<std::size_t>(i)] = i;
  c.steps.push_back(MeasuredStep::apply({0}, hadamard()));
  c.steps.push_back(MeasuredStep::measure(0));
  c.steps.push_back(MeasuredStep::apply(all, haar_unitary(data_qubits, rng).matrix()));
  return c;
}

VerificationReport verify_measurement_decomposition(const MeasuredCircuit& circuit,
                                                    const PureState& input) {
  if (!circuit.pure()) {
    throw std::invalid_argument(
        "verify_measurement_decomposition: circuit contains a trace-out");
  }
  circuit.validate();
  const int n = circuit.n_qubits;
  if (input.n_qubits() != n) {
    throw DimensionMismatch("verify_measurement_decomposition: input size mismatch");
  }
  // Unnormalized branches of the measured algorithm and the single branch
  // that follows the most likely outcomes.
  std::vector<CVector> branches{input.amplitudes()};
  CVector projected = input.amplitudes();
  std::vector<int> outcomes;
  std::vector<double> dominant_probs;
  for (const auto& step : circuit.steps) {
    if (step.kind == MeasuredStep::Kind::Unitary) {
      for (auto& b : branches) apply_on_qubits(b, n, step.unitary, step.targets);
      apply_on_qubits(projected, n, step.unitary, step.targets);
      continue;
    }
    double p[2] = {0.0, 0.0};
    std::vector<CVector> next;
    next.reserve(branches.size() * 2);
    for (const auto& b : branches) {
      for (std::uint64_t bit = 0; bit < 2; ++bit) {
        CVector v = b;
        project_pattern(v, n, {step.qubit}, bit);
        const double w = v.squaredNorm();
        p[bit] += w;
        if (w > 0.0) next.push_back(std::move(v));
      }
    }
    branches = std::move(next);
    const int b = p[1] > p[0] ? 1 : 0;
    outcomes.push_back(b);
    dominant_probs.push_back(p[b]);
    project_pattern(projected, n, {step.qubit}, static_cast<std::uint64_t>(b));
  }
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  CMatrix mixture = CMatrix::Zero(d, d);
  for (const auto& b : branches) mixture.noalias() += b * b.adjoint();
  double out_purity = 0.0;
  for (const auto& a : branches) {
    for (const auto& b : branches) out_purity += std::norm(a.dot(b));
  }
  const double eps = std::max(0.0, 1.0 - out_purity);
  const int t = circuit.measurements();
  const double difference = trace_norm(mixture - projected * projected.adjoint());
  const double bound = static_cast<double>(t) * eps;
  auto r = make_report("measurement-decomposition", ClaimKind::UpperBound, bound,
                       difference, 0.0, 1);
  const double min_dominant =
      dominant_probs.empty()
          ? 1.0
          : *std::min_element(dominant_probs.begin(), dominant_probs.end());
  const Verdict step_verdict =
      judge(ClaimKind::LowerBound, min_dominant, 1.0 - eps, 0.0);
  r.verdict = combine(r.verdict, step_verdict);
  if (step_verdict == Verdict::Violated) {
    r.notes.emplace_back("a dominant outcome has probability below 1 - eps");
  }
  r.details = {{"n_qubits", n},
               {"t", t},
               {"eps", eps},
               {"output_purity", out_purity},
               {"difference_1norm", difference},
               {"outcomes", outcomes},
               {"dominant_probabilities", dominant_probs},
               {"min_dominant_probability", min_dominant},
               {"branches", branches.size()}};
  return r;
}

// Gentle measurement ---------------------------------------------------------

void check_projector(const CMatrix& p, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (p.rows() != d || p.cols() != d) {
    throw DimensionMismatch("check_projector: projector shape mismatch");
  }
  require((p - p.adjoint()).norm() <= tol::kDerived, "check_projector: not Hermitian");
  require((p * p - p).norm() <= tol::kDerived, "check_projector: not idempotent");
}

VerificationReport verify_gentle_measurement(const DensityMatrix& rho,
                                             const CMatrix& p0) {
  check_projector(p0, rho.dim());
  const CMatrix& m = rho.matrix();
  const auto d = static_cast<Eigen::Index>(rho.dim());
  const CMatrix p1 = CMatrix::Identity(d, d) - p0;
  const double eps = std::max(0.0, 1.0 - (p0 * m).trace().real());
  const CMatrix kept = p0 * m * p0;
  const CMatrix measured = kept + p1 * m * p1;
  const double d_measure = 0.5 * trace_norm(m - measured);
  const double d_project = 0.5 * trace_norm(m - kept);
  const double bound_measure = std::sqrt(eps);
  const double bound_project = eps + std::sqrt(eps);
  auto r = make_report("gentle-measurement", ClaimKind::UpperBound, bound_measure,
                       d_measure, 0.0, 1);
  const Verdict projected =
      judge(ClaimKind::UpperBound, d_project, bound_project, 0.0);
  r.verdict = combine(r.verdict, projected);
  if (projected == Verdict::Violated) {
    r.notes.emplace_back("projected-branch distance exceeds eps + sqrt(eps)");
  }
  r.details = {{"eps", eps},
               {"distance_measure", d_measure},
               {"bound_measure", bound_measure},
               {"distance_project", d_project},
               {"bound_project", bound_project}};
  return r;
}

GentleInstance random_gentle_instance(int n, int rank, double eps, Rng& rng) {
  require(eps >= 0.0 && eps <= 1.0, "random_gentle_instance: eps must be in [0, 1]");
  require(n >= 1 && rank >= 1, "random_gentle_instance: bad shape");
  check_qubit_cap(n);
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  const Eigen::Index k = std::max<Eigen::Index>(1, d / 2);
  const CMatrix basis = haar_unitary(n, rng).matrix();
  const CMatrix range = basis.leftCols(k);
  const CMatrix kernel = basis.rightCols(d - k);
  CMatrix rho = CMatrix::Zero(d, d);
  double total = 0.0;
  for (int j = 0; j < rank; ++j) {
    const PureState a = gaussian_state(k, rng);
    const PureState b = gaussian_state(d - k, rng);
    const CVector v = std::sqrt(1.0 - eps) * (range * a.amplitudes()) +
                      std::sqrt(eps) * (kernel * b.amplitudes());
    const double w = -std::log(1.0 - rng.uniform());
    rho.noalias() += w * v * v.adjoint();
    total += w;
  }
  rho /= total;
  return GentleInstance{DensityMatrix(std::move(rho)), range * range.adjoint()};
}

// Approximately pure subsystems ----------------------------------------------

VerificationReport verify_purity_structure(const DensityMatrix& rho_ab,
                                           const SubsystemSpec& spec,
                                           double constant) {
  require(spec.parts() == 2, "verify_purity_structure: need a bipartite split");
  require(constant > 0.0, "verify_purity_structure: constant must be positive");
  if (spec.total_dim() != rho_ab.dim()) {
    throw DimensionMismatch("verify_purity_structure: split does not match the state");
  }
  const DensityMatrix rho_a = partial_trace(rho_ab, spec, {0});
  const double eps = std::max(0.0, 1.0 - purity(rho_a));
  const auto da = static_cast<Eigen::Index>(spec.local_dims()[0]);
  const auto db = static_cast<Eigen::Index>(spec.local_dims()[1]);
  const ClosestPure cp = closest_pure_state(rho_a);
  VerificationReport r;
  r.lemma_id = "purity-structure";
  r.claim_kind = ClaimKind::UpperBound;
  r.claimed_value = constant * eps;
  r.samples = 1;
  r.details = {{"eps", eps}, {"constant", constant}, {"d_a", da}, {"d_b", db}};
  if (cp.degenerate) {
    r.verdict = Verdict::Inconclusive;
    r.notes.emplace_back("reduced state has a degenerate top eigenvalue; no distinguished psi_A");
    return r;
  }
  CMatrix lift = CMatrix::Zero(da * db, db);
  for (Eigen::Index a = 0; a < da; ++a) {
    lift.block(a * db, 0, db, db) =
        cp.state.amplitudes()(a) * CMatrix::Identity(db, db);
  }
  CMatrix sigma_b = lift.adjoint() * rho_ab.matrix() * lift;
  const double weight = sigma_b.trace().real();
  if (weight <= tol::kStructural) {
    r.verdict = Verdict::Inconclusive;
    r.notes.emplace_back("psi_A carries no weight in rho_AB");
    return r;
  }
  sigma_b /= weight;
  const CMatrix psi = cp.state.amplitudes() * cp.state.amplitudes().adjoint();
  CMatrix product(da * db, da * db);
  for (Eigen::Index a = 0; a < da; ++a) {
    for (Eigen::Index b = 0; b < da; ++b) {
      product.block(a * db, b * db, db, db) = psi(a, b) * sigma_b;
    }
  }
  const double distance = trace_norm(rho_ab.matrix() - product);
  r.estimate = distance;
  r.verdict = judge(ClaimKind::UpperBound, distance, r.claimed_value, 0.0);
  r.details["distance"] = distance;
  r.details["ratio"] = eps > 0.0 ? distance / eps : 0.0;
  r.details["sqrt_ratio"] = eps > 0.0 ? distance / std::sqrt(eps) : 0.0;
  if (eps >= 0.5 - tol::kDerived) r.notes.emplace_back("bound vacuous at this mixing");
  return r;
}

VerificationReport verify_gentle_subsystem(const DensityMatrix& rho_ab,
                                           const SubsystemSpec& spec,
                                           const CMatrix& p0,
                                           std::optional<double> eps) {
  require(spec.parts() == 2, "verify_gentle_subsystem: need a bipartite split");
  if (spec.total_dim() != rho_ab.dim()) {
    throw DimensionMismatch("verify_gentle_subsystem: split does not match the state");
  }
  check_projector(p0, rho_ab.dim());
  const CMatrix& m = rho_ab.matrix();
  const auto d = static_cast<Eigen::Index>(rho_ab.dim());
  const CMatrix p1 = CMatrix::Identity(d, d) - p0;
  const DensityMatrix measured = DensityMatrix::trusted(p0 * m * p0 + p1 * m * p1);
  const DensityMatrix before_a = partial_trace(rho_ab, spec, {0});
  const DensityMatrix after_a = partial_trace(measured, spec, {0});
  const double impurity = std::max(0.0, 1.0 - purity(after_a));
  const double e = eps.value_or(impurity);
  require(e >= 0.0, "verify_gentle_subsystem: eps must be non-negative");
  const double distance = trace_norm(before_a.matrix() - after_a.matrix());
  const double bound = std::pow(e, 0.25);
  auto r = make_report("gentle-subsystem", ClaimKind::UpperBound, bound, distance, 0.0, 1);
  r.details = {{"eps", e}, {"impurity", impurity}, {"distance", distance}};
  if (e < impurity - tol::kDerived) {
    r.verdict = Verdict::Inconclusive;
    r.notes.emplace_back("hypothesis unmet: outcome impurity exceeds eps");
  } else if (e > 0.25) {
    r.verdict = Verdict::Inconclusive;
    r.notes.emplace_back("hypothesis unmet: eps > 1/4");
  } else if (e >= kGentleSubsystemEdge) {
    r.notes.emplace_back("bound regime edge");
  }
  return r;
}

GentleSubsystemInstance random_gentle_subsystem_instance(int n_a, int n_b, Rng& rng) {
  require(n_a >= 1 && n_b >= 1, "random_gentle_subsystem_instance: bad shape");
  check_qubit_cap(n_a + n_b);
  const auto da = static_cast<Eigen::Index>(dim_of(n_a));
  const auto db = static_cast<Eigen::Index>(dim_of(n_b));
  const Eigen::Index d = da * db;
  const SubsystemSpec spec({static_cast<int>(da), static_cast<int>(db)});
  for (int attempt = 0;; ++attempt) {
    // A nearly basis-aligned A state next to a mixed B state, a little
    // global noise, and a computational-basis measurement on A's first qubit
    // dressed by a weak global rotation and random local unitaries.
    const double theta = rng.uniform() * std::acos(-1.0) / 5.0;
    CVector a = CVector::Zero(da);
    a(0) = std::cos(theta);
    a(da / 2) = std::sin(theta) * std::exp(Complex(0.0, 2.0 * std::acos(-1.0) * rng.uniform()));
    const int rank_b = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(db)));
    const CMatrix sigma_b = random_density(n_b, rank_b, rng).matrix();
    CMatrix rho(d, d);
    const CMatrix psi = a * a.adjoint();
    for (Eigen::Index i = 0; i < da; ++i) {
      for (Eigen::Index j = 0; j < da; ++j) rho.block(i * db, j * db, db, db) = psi(i, j) * sigma_b;
    }
    const double noise = 0.05 * rng.uniform();
    rho = (1.0 - noise) * rho + noise * random_density(n_a + n_b, 1, rng).matrix();
    CMatrix p0 = CMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (i < d / 2) p0(i, i) = 1.0;
    }
    const CMatrix h = random_density(n_a + n_b, static_cast<int>(d), rng).matrix();
    const CMatrix w = hermitian_exp_i(h, 0.5 * rng.uniform());
    p0 = w * p0 * w.adjoint();
    const CMatrix local =
        tensor_product(haar_unitary(n_a, rng), haar_unitary(n_b, rng)).matrix();
    rho = local * rho * local.adjoint();
    p0 = local * p0 * local.adjoint();
    rho = 0.5 * (rho + rho.adjoint());
    p0 = 0.5 * (p0 + p0.adjoint());
    GentleSubsystemInstance inst{DensityMatrix::trusted(rho), spec, p0};
    const auto check = verify_gentle_subsystem(inst.rho, inst.spec, inst.p0);
    if (check.details.at("impurity").get<double>() <= 0.25 || attempt >= 64) return inst;
  }
}

// Conjecture geometry --------------------------------------------------------

const char* to_string(CapCase c) {
  switch (c) {
    case CapCase::CapCase1: return "CapCase1";
    case CapCase::FarCase2: return "FarCase2";
    case CapCase::Product2: return "Product2";
  }
  return "?";
}

CapCase cap_case_from_string(const std::string& s) {
  if (s == "CapCase1" || s == "case1") return CapCase::CapCase1;
  if (s == "FarCase2" || s == "case2") return CapCase::FarCase2;
  if (s == "Product2" || s == "product2") return CapCase::Product2;
  throw std::invalid_argument("unknown cap case: " + s);
}

double cap_measure(int n, double radius) {
  require(n >= 1, "cap_measure: n must be positive");
  const double r = std::clamp(radius, 0.0, 1.0);
  return std::pow(r, 2.0 * static_cast<double>(dim_of(n) - 1));
}

CapGeometry cap_geometry(int n, double eps, double delta, CapCase c, int n2) {
  require(n >= 1 && n <= 30, "cap_geometry: n out of range");
  require(eps >= 0.0 && delta >= 0.0 && eps + delta <= 1.0,
          "cap_geometry: need eps, delta >= 0 and eps + delta <= 1");
  if (n2 < 0) n2 = n;
  CapGeometry g;
  switch (c) {
    case CapCase::CapCase1: {
      g.sigma_s = cap_measure(n, eps);
      g.sigma_t = cap_measure(n, eps + delta);
      g.lower_bound = g.sigma_s * delta;
      break;
    }
    case CapCase::FarCase2: {
      g.sigma_s = 1.0 - cap_measure(n, 1.0 - eps);
      if (g.sigma_s > 0.5) {
        throw std::invalid_argument("cap_geometry: FarCase2 requires sigma(S) <= 1/2");
      }
      g.sigma_t = 1.0 - cap_measure(n, 1.0 - eps - delta);
      g.lower_bound = delta;
      break;
    }
    case CapCase::Product2: {
      require(n2 >= 1 && n2 <= 30, "cap_geometry: n2 out of range");
      g.sigma_s = cap_measure(n, eps) * cap_measure(n2, eps);
      g.sigma_t = cap_measure(n, eps + delta) * cap_measure(n2, eps + delta);
      g.lower_bound = g.sigma_s * delta;
      break;
    }
  }
  g.difference = g.sigma_t - g.sigma_s;
  return g;
}

VerificationReport conjecture_cap_geometry(int n, double eps, double delta,
                                           CapCase c, std::uint64_t samples,
                                           Rng& rng, int n2) {
  if (n2 < 0) n2 = n;
  const CapGeometry g = cap_geometry(n, eps, delta, c, n2);
  auto r = make_report(std::string("cap-geometry-") + to_string(c), ClaimKind::LowerBound,
                       g.lower_bound, g.difference, 0.0, samples);
  r.details = {{"n", n},           {"eps", eps},
               {"delta", delta},   {"case", to_string(c)},
               {"sigma_s", g.sigma_s}, {"sigma_t", g.sigma_t},
               {"difference", g.difference}, {"lower_bound", g.lower_bound}};
  if (c == CapCase::Product2) r.details["n2"] = n2;
  if (samples == 0) return r;
  check_qubit_cap(std::max(n, n2));
  auto dist = [](const PureState& psi) {
    return std::sqrt(std::max(0.0, 1.0 - std::norm(psi.amplitudes()(0))));
  };
  std::uint64_t in_s = 0;
  std::uint64_t in_t = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double d1 = dist(haar_state(n, rng));
    switch (c) {
      case CapCase::CapCase1:
        in_s += d1 <= eps;
        in_t += d1 <= eps + delta;
        break;
      case CapCase::FarCase2:
        in_s += d1 >= 1.0 - eps;
        in_t += d1 >= 1.0 - eps - delta;
        break;
      case CapCase::Product2: {
        const double d2 = dist(haar_state(n2, rng));
        in_s += d1 <= eps && d2 <= eps;
        in_t += d1 <= eps + delta && d2 <= eps + delta;
        break;
      }
    }
  }
  const auto ns = static_cast<double>(samples);
  const double mc_s = static_cast<double>(in_s) / ns;
  const double mc_t = static_cast<double>(in_t) / ns;
  const double se_s = bernoulli_se(g.sigma_s, samples);
  const double se_t = bernoulli_se(g.sigma_t, samples);
  const Verdict mc = combine(judge(ClaimKind::Equality, mc_s, g.sigma_s, se_s),
                             judge(ClaimKind::Equality, mc_t, g.sigma_t, se_t));
  r.details["mc_sigma_s"] = mc_s;
  r.details["mc_sigma_s_se"] = se_s;
  r.details["mc_sigma_t"] = mc_t;
  r.details["mc_sigma_t_se"] = se_t;
  r.details["mc_agrees"] = mc == Verdict::Consistent;
  r.standard_error = std::hypot(se_s, se_t);
  if (mc == Verdict::Violated) {
    r.notes.emplace_back("Monte Carlo cap measure disagrees with the closed form");
  }
  r.verdict = combine(judge(ClaimKind::LowerBound, g.difference, g.lower_bound, 0.0), mc);
  return r;
}

ExponentFit fit_cap_exponents(int n, CapCase c, const std::vector<double>& eps_grid,
                              const std::vector<double>& delta_grid) {
  std::vector<std::array<double, 3>> rows;
  for (double e : eps_grid) {
    for (double dl : delta_grid) {
      const CapGeometry g = cap_geometry(n, e, dl, c);
      if (dl > 0.0 && g.sigma_s > 0.0 && g.difference > 0.0) {
        rows.push_back({std::log(dl), std::log(g.sigma_s), std::log(g.difference)});
      }
    }
  }
  require(rows.size() >= 3, "fit_cap_exponents: need at least three usable grid points");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    a(row, 0) = rows[i][0];
    a(row, 1) = rows[i][1];
    a(row, 2) = 1.0;
    y(row) = rows[i][2];
  }
  const Eigen::Vector3d coef = a.colPivHouseholderQr().solve(y);
  return ExponentFit{coef(0), coef(1), coef(2), static_cast<int>(rows.size())};
}

// Haar concentration ---------------------------------------------------------

double lipschitz_tail_bound(int n, int queries, double t) {
  require(n >= 1 && queries >= 1, "lipschitz_tail_bound: bad parameters");
  const double big_n = static_cast<double>(dim_of(n));
  const double m = static_cast<double>(queries);
  return std::exp(-t * t * (big_n - 2.0) / (24.0 * m * m));
}

namespace {

double lipschitz_g(int n, int queries, Rng& rng) {
  if (queries == 1) return std::norm(haar_state(n, rng).amplitudes()(0));
  const CMatrix u = haar_unitary(n, rng).matrix();
  CVector v = CVector::Unit(u.rows(), 0);
  for (int i = 0; i < queries; ++i) v = u * v;
  return std::norm(v(0));
}

}  // namespace

VerificationReport verify_lipschitz_tail(int n, int queries, double t,
                                         std::uint64_t samples, Rng& rng) {
  require(samples >= 1, "verify_lipschitz_tail: samples must be positive");
  require(t > 0.0, "verify_lipschitz_tail: t must be positive");
  check_qubit_cap(n);
  const double bound = lipschitz_tail_bound(n, queries, t);
  double mean = 1.0 / static_cast<double>(dim_of(n));
  Rng mean_rng = rng.child(1);
  Rng tail_rng = rng.child(2);
  if (queries > 1) {
    RunningStats s;
    for (std::uint64_t i = 0; i < samples; ++i) s.add(lipschitz_g(n, queries, mean_rng));
    mean = s.mean();
  }
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    if (lipschitz_g(n, queries, tail_rng) >= mean + t) ++hits;
  }
  const double est = static_cast<double>(hits) / static_cast<double>(samples);
  const double se = bernoulli_se(est, samples);
  auto r = make_report("lipschitz-tail", ClaimKind::UpperBound, bound, est, se, samples);
  r.verdict = est > bound + 3.0 * se + kExactSlack ? Verdict::Violated : Verdict::Consistent;
  r.details = {{"n", n}, {"queries", queries}, {"t", t}, {"mean_g", mean},
               {"hits", hits}, {"bound", bound}};
  return r;
}

// Grids ----------------------------------------------------------------------

std::vector<VerificationReport> run_lemma_grid(const std::vector<LemmaCell>& cells,
                                               std::uint64_t seed,
                                               std::uint64_t stream, int workers) {
  const Rng root(seed, stream);
  return parallel_map(cells.size(), workers, [&](std::size_t i) {
    Rng rng = root.child(i);
    return cells[i](rng);
  });
}

}  // namespace chfs
