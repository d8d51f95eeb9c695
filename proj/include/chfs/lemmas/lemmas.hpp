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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chfs/core/rng.hpp"
#include "chfs/core/types.hpp"

namespace chfs {

enum class Verdict { Consistent, Violated, Inconclusive };
enum class ClaimKind { Equality, UpperBound, LowerBound };

const char* to_string(Verdict v);
const char* to_string(ClaimKind k);

/// Verdicts use kVerdictSigmas standard errors; an exact evaluation (zero
/// SE) is compared with kExactSlack absolute slack.
inline constexpr double kVerdictSigmas = 5.0;
inline constexpr double kExactSlack = 1e-9;

struct VerificationReport {
  std::string lemma_id;
  ClaimKind claim_kind = ClaimKind::Equality;
  double claimed_value = 0.0;
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> notes;
  /// Operation-specific parameters and intermediate quantities.
  nlohmann::json details = nlohmann::json::object();

  /// Signed distance from the claim in units of SE (0 when both are exact).
  double z_score() const;
  nlohmann::json to_json() const;
  static VerificationReport from_json(const nlohmann::json& j);
};

/// Applies the 5 SE rule for the report's claim kind.
Verdict judge(ClaimKind kind, double estimate, double claim, double se);

/// Markdown table with one row per report.
std::string reports_markdown(const std::vector<VerificationReport>& reports);

// Haar-measure identities ----------------------------------------------------

/// Mean of <phi,0^{m-n}| P |phi,0^{m-n}> over Haar phi for a random rank-D
/// projector P on m qubits. Equality D/2^n when m == n, upper bound otherwise.
VerificationReport verify_haar_projection(int n, int rank, std::uint64_t samples,
                                          Rng& rng, int m = -1);

/// Empirical Pr[|<psi|phi>|^2 >= 1 - eps] against eps^(2^n - 1).
VerificationReport verify_concentration_overlap(int n, double eps,
                                                std::uint64_t samples, Rng& rng);

/// Mean subsystem purity of a Haar state on local dims (d_S, d_Sbar) against
/// (d_S + d_Sbar)/(d_S d_Sbar + 1).
VerificationReport verify_lubkin(int d_s, int d_sbar, std::uint64_t samples,
                                 Rng& rng);

/// Swap-test pass frequency on rank-`rank` random states against
/// (1 + Tr rho sigma)/2, `shots` samples per pair.
VerificationReport verify_swap_test(int n, int rank, std::uint64_t shots,
                                    Rng& rng);

/// 2 (3/4)^m.
double product_test_haar_bound(int m);

/// Mean Haar product-test pass probability on m single-qubit parts against
/// the exact Lubkin sum, also checking the 2 (3/4)^m bound. With samples == 0
/// the exact sum is checked against the bound analytically.
VerificationReport verify_product_test_haar(int m, std::uint64_t samples,
                                            Rng& rng);

// Measurement decomposition --------------------------------------------------

struct MeasuredStep {
  enum class Kind { Unitary, Measure, TraceOut };
  Kind kind = Kind::Unitary;
  std::vector<int> targets;
  CMatrix unitary;
  int qubit = -1;

  static MeasuredStep apply(std::vector<int> targets, CMatrix unitary);
  /// Binary computational-basis measurement (|0><0| x I, |1><1| x I).
  static MeasuredStep measure(int qubit);
  static MeasuredStep trace_out(int qubit);
};

struct MeasuredCircuit {
  int n_qubits = 0;
  std::vector<MeasuredStep> steps;

  int measurements() const;
  bool pure() const;
  /// Throws std::invalid_argument on out-of-range qubits or non-unitary steps.
  void validate() const;
};

/// Data qubits [0, data_qubits) followed by t flag qubits. Each measured flag
/// is rotated away from a random dominant value by a data-controlled angle
/// whose minority probability is at most eps_budget / (2t), so on inputs with
/// the flags in |0> the output purity is at least 1 - eps_budget.
MeasuredCircuit engineered_decomposition_circuit(int data_qubits, int t,
                                                 double eps_budget, Rng& rng);

/// One data qubit prepared in |+> and measured, then scrambled together with
/// `data_qubits - 1` further qubits.
MeasuredCircuit fair_coin_circuit(int data_qubits, Rng& rng);

/// Exact branch simulation. eps = 1 - Tr(A(phi)^2); asserts that projecting
/// onto the most likely outcomes changes the output by at most t eps in
/// 1-norm and that every dominant outcome has probability >= 1 - eps.
/// Throws std::invalid_argument if the circuit traces out a qubit.
VerificationReport verify_measurement_decomposition(const MeasuredCircuit& circuit,
                                                    const PureState& input);

// Gentle measurement ---------------------------------------------------------

/// Throws std::invalid_argument unless p is a Hermitian idempotent of the
/// right size.
void check_projector(const CMatrix& p, std::size_t dim);

/// With eps = 1 - Tr(P0 rho): ||rho - M(rho)||_tr <= sqrt(eps) and
/// ||rho - P0 rho P0||_tr <= eps + sqrt(eps), evaluated exactly.
VerificationReport verify_gentle_measurement(const DensityMatrix& rho,
                                             const CMatrix& p0);

/// Random instance: rank-`rank` rho on n qubits and a projector P0 for which
/// Tr(P0 rho) = 1 - eps exactly.
struct GentleInstance {
  DensityMatrix rho;
  CMatrix p0;
};
GentleInstance random_gentle_instance(int n, int rank, double eps, Rng& rng);

// Approximately pure subsystems ----------------------------------------------

inline constexpr double kDefaultStructureConstant = 8.0;

/// eps = 1 - Tr(rho_A^2); psi_A = closest pure state to rho_A, sigma_B the
/// normalized <psi_A| rho_AB |psi_A>; checks ||rho_AB - psi_A x sigma_B||_1 <=
/// C eps. Inconclusive when rho_A has a degenerate top eigenvalue.
/// `spec` must have two parts, A first.
VerificationReport verify_purity_structure(const DensityMatrix& rho_ab,
                                           const SubsystemSpec& spec,
                                           double constant = kDefaultStructureConstant);

/// Binary measurement (P0, I - P0) on AB. With eps the smallest value for
/// which Tr[Tr_B(M(rho))^2] >= 1 - eps holds (or the supplied eps), checks
/// ||Tr_B rho - Tr_B M(rho)||_1 <= eps^(1/4). Inconclusive when the supplied
/// eps is below the actual impurity or eps > 1/4; notes "bound regime edge"
/// for eps >= kGentleSubsystemEdge.
inline constexpr double kGentleSubsystemEdge = 0.2;
VerificationReport verify_gentle_subsystem(const DensityMatrix& rho_ab,
                                           const SubsystemSpec& spec,
                                           const CMatrix& p0,
                                           std::optional<double> eps = std::nullopt);

/// Nearly pure A state beside a mixed B state with weak global noise, and a
/// measurement on A's leading qubit dressed by a weak global rotation and
/// random local unitaries. Resampled until the outcome impurity is at most
/// 1/4 (64 attempts).
struct GentleSubsystemInstance {
  DensityMatrix rho;
  SubsystemSpec spec;
  CMatrix p0;
};
GentleSubsystemInstance random_gentle_subsystem_instance(int n_a, int n_b, Rng& rng);

// Conjecture geometry --------------------------------------------------------

enum class CapCase { CapCase1, FarCase2, Product2 };
const char* to_string(CapCase c);
CapCase cap_case_from_string(const std::string& s);

/// Haar measure of {psi : d_tr(psi, phi) <= r} on n qubits, r^(2(2^n - 1)).
double cap_measure(int n, double radius);

/// Closed forms for sigma(S), sigma(T) and sigma(T \ S), with the asserted
/// lower bound (Gamma Delta for the cap cases, Delta for FarCase2).
struct CapGeometry {
  double sigma_s = 0.0;
  double sigma_t = 0.0;
  double difference = 0.0;
  double lower_bound = 0.0;
};
/// Throws std::invalid_argument outside eps, delta >= 0, eps + delta <= 1 or,
/// for FarCase2, when sigma(S) > 1/2. `n2` is the second factor's qubit count
/// for Product2 (defaults to n).
CapGeometry cap_geometry(int n, double eps, double delta, CapCase c, int n2 = -1);

/// Analytic check of sigma(T \ S) >= lower bound, cross-checked by a Monte
/// Carlo estimate of sigma(S) and sigma(T) when samples > 0. The estimate
/// field is the closed-form difference; MC agreement within 5 SE is folded
/// into the verdict and recorded in details.
VerificationReport conjecture_cap_geometry(int n, double eps, double delta,
                                           CapCase c, std::uint64_t samples,
                                           Rng& rng, int n2 = -1);

/// Least-squares fit of log sigma(T \ S) = a log Delta + b log Gamma + c over
/// the grid. Reported only.
struct ExponentFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  int points = 0;
};
ExponentFit fit_cap_exponents(int n, CapCase c, const std::vector<double>& eps_grid,
                              const std::vector<double>& delta_grid);

// Haar concentration ---------------------------------------------------------

/// exp(-t^2 (N - 2) / (24 m^2)) with N = 2^n.
double lipschitz_tail_bound(int n, int queries, double t);

/// Empirical Pr[g(U) >= E g + t] for g(U) = |<0|U^m|0>|^2 against the bound.
/// E g = 2^-n for m = 1; otherwise it is estimated from an independent stream.
VerificationReport verify_lipschitz_tail(int n, int queries, double t,
                                         std::uint64_t samples, Rng& rng);

// Grids ----------------------------------------------------------------------

using LemmaCell = std::function<VerificationReport(Rng&)>;

/// Runs cell i with Rng(seed, stream).child(i); results keep grid order.
std::vector<VerificationReport> run_lemma_grid(const std::vector<LemmaCell>& cells,
                                               std::uint64_t seed,
                                               std::uint64_t stream, int workers);

}  // namespace chfs
