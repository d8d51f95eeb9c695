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
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "chfs/core/rng.hpp"
#include "chfs/core/types.hpp"
#include "chfs/oracle/chfs_instance.hpp"
#include "chfs/primitives/prsg.hpp"
#include "chfs/primitives/pru.hpp"
#include "chfs/statetests/state_tests.hpp"
#include "chfs/tomography/tomography.hpp"

namespace chfs {

using Channel = std::function<DensityMatrix(const DensityMatrix&)>;

/// rho -> U rho U^dagger.
Channel unitary_channel(const UnitaryMatrix& u);
/// The keyed candidate with queries answered by the oracle.
Channel pru_channel(const PruCandidate& c, const ChfsInstance& oracle, const BitString& key);

enum class OrRegime { Accept, Reject, Gap };

struct OrSurrogateResult {
  bool accepted = false;
  BitString best_key;
  double best_score = 0.0;
  OrRegime regime = OrRegime::Gap;
  /// Max score strictly between delta and 1 - epsilon.
  bool promise_violated = false;
  /// (1 - epsilon)^2 / 7, the tester's acceptance floor in the Accept regime.
  double tester_accept_floor = 0.0;
  /// 4 N delta, the tester's acceptance ceiling in the Reject regime.
  double tester_accept_ceiling = 0.0;
  /// The surrogate's decision respects the tester's bound in its regime.
  bool contract_ok = true;

  nlohmann::json to_json() const;
};

/// Exhaustive max over per-key scores (score i belongs to the key whose
/// unsigned value is i). Accepts iff the max is at least 1 - epsilon.
OrSurrogateResult or_surrogate(const std::vector<double>& scores, double epsilon, double delta);

struct Alg1Config {
  int lambda = 4;
  int tau = 3;
  int r = 12;
  PurityBatteryConfig battery{64, 8};
  double pass_fraction = 2.0 / 3.0;
  double tomography_epsilon = 0.0;  // 0 selects 2 / 2^(tau/2)
  double tomography_delta = 0.0;    // 0 selects 2^(-2 lambda)
  NoiseMode tomography_mode = NoiseMode::Exact;
  double or_epsilon = 0.0;  // 0 selects 2^(-lambda)
  double or_delta = 0.0;    // 0 selects 2^(-2 lambda)

  /// Large-scale values: tau = 2 log(16 m), r = 1200 lambda, battery
  /// (16 lambda^2, 8 lambda).
  static Alg1Config full_scale(int lambda, int m);
  void validate() const;
  int pass_threshold() const;  // ceil(pass_fraction * r)
  double tom_epsilon() const;
  double tom_delta() const;
  double or_eps() const;
  double or_del() const;

  nlohmann::json to_json() const;
};

/// S-tilde: tomography reconstructions for every string of length <= tau,
/// identity above.
struct SimulatedOracle {
  std::map<BitString, UnitaryMatrix> reconstructions;
  int tau = 0;
  int queries_used = 0;
  double max_diamond_bound = 0.0;

  QueryResolver resolver() const;
};

SimulatedOracle build_simulated_oracle(const ChfsInstance& oracle, int tau, double epsilon,
                                       double delta, NoiseMode mode, Rng& rng);

/// One pair block A_i A_i' of the state fed to P_k.
struct PairBlock {
  DensityMatrix a;
  DensityMatrix a_prime;
};

/// Exact Pr[P_k accepts]: F_k is applied to each A_i, then A_i is swap-tested
/// against A_i'; accepts when at least the threshold number pass.
double p_k_subprotocol(const Alg1Config& cfg, const std::vector<PairBlock>& blocks,
                       const Channel& f_k);

struct Alg1Result {
  bool output = false;
  bool flag = false;  // step 1 fired
  BatteryResult battery;
  std::vector<double> scores;      // Pr[P_k] per key
  std::vector<double> pass_probs;  // single swap-test pass probability per key
  OrSurrogateResult oracle_or;
  double v_purity = 1.0;           // Tr V(rho)^2, a diagnostic the adversary never reads
  bool gap_regime = false;         // purity below 1 - 1/lambda and step 1 silent
  int tomography_queries = 0;

  nlohmann::json to_json() const;
};

Alg1Result alg1_distinguish(const Alg1Config& cfg, const Channel& v, const ChfsInstance& oracle,
                            const PruCandidate& candidate, Rng& rng);

/// Trace distance between the candidate with true and simulated queries on rho.
double alg1_hybrid_distance(const PruCandidate& c, const ChfsInstance& oracle,
                            const SimulatedOracle& sim, const BitString& key,
                            const DensityMatrix& rho);

struct Alg2Config {
  int lambda = 4;
  int r = 4;
  double big_t = 0.0;  // T; only logged at desk scale
  PurityBatteryConfig battery{64, 8};
  QueryLearning learning = QueryLearning::DirectInspection;
  int learning_shots = 64;
  double or_epsilon = 0.2;
  double or_delta = 0.0;  // 0 selects 2^(-2 lambda)

  /// Large-scale values: r = 10 lambda^2, T = 20 r^2 (2 t d + 1)^3, battery
  /// (16 T lambda, 8 lambda).
  static Alg2Config full_scale(int lambda, int t, int d);
  void validate() const;
  double or_del() const;

  nlohmann::json to_json() const;
};

struct Alg2KeyPlan {
  std::vector<QueryOutcome> queries;
  std::vector<int> part_dims;  // local dimensions of the product-test parts
  double product_test_prob = 0.0;
  double score = 0.0;  // product_test_prob^r
};

struct Alg2Result {
  bool output = false;
  bool aborted = false;  // step 1 fired
  BatteryResult battery;
  std::vector<Alg2KeyPlan> plans;
  OrSurrogateResult oracle_or;
  double challenge_purity = 1.0;
  bool gap_regime = false;  // purity below 1 - 1/T and step 1 silent (T > 0 only)

  nlohmann::json to_json() const;
};

/// Qubit order and part dimensions of the product test for the learned
/// queries: the first l(lambda_i) qubits of each Y_i, then every other output
/// qubit alone.
struct ProductPartition {
  std::vector<int> order;
  std::vector<int> dims;
};
ProductPartition alg2_partition(const PrsgCandidate& c, const PrsgKeyCircuit& kc,
                                const std::vector<QueryOutcome>& queries,
                                const LengthFunction& ell);

Alg2Result alg2_distinguish(const Alg2Config& cfg, const DensityMatrix& challenge,
                            const ChfsInstance& oracle, const PrsgCandidate& candidate, Rng& rng);

}  // namespace chfs
