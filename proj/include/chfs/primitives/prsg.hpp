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
#include <vector>

#include <json.hpp>

#include "chfs/core/rng.hpp"
#include "chfs/core/types.hpp"
#include "chfs/oracle/chfs_instance.hpp"
#include "chfs/primitives/circuit.hpp"

namespace chfs {

/// Registers of one universal-oracle query. The measured value of Lambda (read
/// MSB first) selects the length lambda; the oracle reads the first lambda
/// qubits of X and maps |0> to |phi_x> on the first l(lambda) qubits of Y.
struct PrsgQuery {
  std::vector<int> lambda_qubits;
  std::vector<int> x_qubits;
  std::vector<int> y_qubits;

  nlohmann::json to_json() const;
  static PrsgQuery from_json(const nlohmann::json& j);
};

/// U_0, then for each query: measure Lambda X, query, apply the next unitary.
struct PrsgKeyCircuit {
  std::vector<Circuit> unitaries;  // t + 1 entries
  std::vector<PrsgQuery> queries;  // t entries

  /// U_t ... U_0 as one circuit, with the oracle layers dropped.
  Circuit oracle_free() const;

  nlohmann::json to_json() const;
  static PrsgKeyCircuit from_json(const nlohmann::json& j);
};

/// Keyed generator on d output qubits followed by u ancilla qubits, all
/// starting in |0>. The ancilla is traced out at the end.
class PrsgCandidate {
 public:
  PrsgCandidate(int key_bits, int d, int u, std::vector<PrsgKeyCircuit> circuits,
                bool declares_quasi_pure = true, double threshold = 1.0 - 1e-9);

  int key_bits() const { return key_bits_; }
  int output_qubits() const { return d_; }
  int ancilla_qubits() const { return u_; }
  int total_qubits() const { return d_ + u_; }
  bool declares_quasi_pure() const { return quasi_pure_; }
  double threshold() const { return threshold_; }
  const PrsgKeyCircuit& circuit(const BitString& key) const;

  nlohmann::json to_json() const;
  static PrsgCandidate from_json(const nlohmann::json& j);

 private:
  int key_bits_;
  int d_;
  int u_;
  std::vector<PrsgKeyCircuit> circuits_;
  bool quasi_pure_;
  double threshold_;
};

struct QueryOutcome {
  int lambda = 0;
  BitString x;  // the first lambda bits of X
  double probability = 0.0;
};

/// Distribution of (lambda, x) just before one query.
struct QueryLog {
  int index = 0;
  std::vector<QueryOutcome> distribution;  // nonzero entries, sorted by (lambda, x)
  QueryOutcome argmax;                     // ties go to the first entry
};

struct PrsgOutput {
  DensityMatrix output;     // d qubits
  DensityMatrix pre_trace;  // d + u qubits
  std::vector<QueryLog> log;
  double ancilla_fidelity = 1.0;  // <0^u| Tr_out(pre_trace) |0^u>
  bool quasi_pure_ok = true;
};

/// Exact channel output as a mixture over measurement branches. When strict
/// is set and the candidate declares quasi-purity, a fidelity below the
/// threshold throws InvariantViolation; otherwise it is only reported.
PrsgOutput prsg_gen(const PrsgCandidate& c, const ChfsInstance& oracle,
                    const BitString& key, bool strict = false);

/// The per-query branch distributions alone, without the final unitary.
std::vector<QueryLog> prsg_query_log(const PrsgCandidate& c, const ChfsInstance& oracle,
                                     const BitString& key);

struct PrsgTrajectory {
  std::vector<QueryOutcome> outcomes;  // probability = conditional branch probability
  PureState final_state;               // d + u qubits
};

/// One sampled run with measurement outcomes drawn by rng.
PrsgTrajectory sample_prsg_trajectory(const PrsgCandidate& c, const ChfsInstance& oracle,
                                      const BitString& key, Rng& rng);

enum class QueryLearning { DirectInspection, ArgmaxFromBranches };

/// (lambda_i, x_i) per query: the exact argmax of the branch distribution, or
/// the per-query mode over sampled trajectories.
std::vector<QueryOutcome> learn_queries(const PrsgCandidate& c, const ChfsInstance& oracle,
                                        const BitString& key, QueryLearning mode, Rng& rng,
                                        int shots = 64);

struct ProductFormSpec {
  int key_bits = 3;
  std::uint64_t seed = 1;
  /// Probability that the first query string is flipped by a measured
  /// rotation; 0 gives the deterministic product form.
  double flip_probability = 0.0;
};

/// d = 6, u = 2, t = 2 candidate needing l(2) = 2: Y1 = qubits 0-1, Y2 = 2-3,
/// X = 4-5, Lambda = 6-7. Per key, U_0 loads lambda = 2 and x_1, U_1 rewrites
/// X to x_2, and U_2 clears Lambda (and X when deterministic) before a
/// key-seeded Haar unitary on the six output qubits.
PrsgCandidate make_product_form_prsg(const ProductFormSpec& spec);

}  // namespace chfs
