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

#include "chfs/attacks/attacks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "chfs/core/errors.hpp"
#include "chfs/core/gates.hpp"
#include "chfs/core/haar.hpp"
#include "chfs/core/linalg.hpp"
#include "chfs/core/stats.hpp"

namespace chfs {

namespace {

const char* regime_name(OrRegime r) {
  switch (r) {
    case OrRegime::Accept: return "accept";
    case OrRegime::Reject: return "reject";
    case OrRegime::Gap: return "gap";
  }
  return "?";
}

nlohmann::json battery_json(const BatteryResult& b) {
  return {{"fail_count", b.fail_count}, {"flagged_impure", b.flagged_impure}};
}

nlohmann::json battery_cfg_json(const PurityBatteryConfig& b) {
  return {{"repetitions", b.repetitions}, {"fail_threshold", b.fail_threshold}};
}

DensityMatrix pure_density(const PureState& p) {
  return DensityMatrix::trusted(p.amplitudes() * p.amplitudes().adjoint());
}

}  // namespace

Channel unitary_channel(const UnitaryMatrix& u) {
  return [u](const DensityMatrix& rho) {
    if (rho.dim() != u.dim()) throw DimensionMismatch("unitary_channel: dimension mismatch");
    return DensityMatrix::trusted(u.matrix() * rho.matrix() * u.matrix().adjoint());
  };
}

Channel pru_channel(const PruCandidate& c, const ChfsInstance& oracle, const BitString& key) {
  return [&c, &oracle, key](const DensityMatrix& rho) { return pru_apply(c, oracle, key, rho); };
}

nlohmann::json OrSurrogateResult::to_json() const {
  return {{"accepted", accepted},
          {"best_key", best_key.to_string()},
          {"best_score", best_score},
          {"regime", regime_name(regime)},
          {"promise_violated", promise_violated},
          {"tester_accept_floor", tester_accept_floor},
          {"tester_accept_ceiling", tester_accept_ceiling},
          {"contract_ok", contract_ok}};
}

OrSurrogateResult or_surrogate(const std::vector<double>& scores, double epsilon, double delta) {
  if (scores.empty()) throw std::invalid_argument("or_surrogate: no keys");
  if (!(epsilon >= 0.0 && epsilon < 1.0) || !(delta >= 0.0 && delta < 1.0)) {
    throw std::invalid_argument("or_surrogate: epsilon and delta must lie in [0, 1)");
  }
  std::size_t best = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!(scores[i] >= -tol::kStructural && scores[i] <= 1.0 + tol::kStructural)) {
      throw std::invalid_argument("or_surrogate: score " + std::to_string(scores[i]) +
                                  " outside [0, 1]");
    }
    if (scores[i] > scores[best]) best = i;
  }
  OrSurrogateResult r;
  const int width = std::max(1, static_cast<int>(std::bit_width(scores.size() - 1)));
  r.best_key = BitString::from_uint(best, width);
  r.best_score = std::clamp(scores[best], 0.0, 1.0);
  r.accepted = r.best_score >= 1.0 - epsilon;
  r.tester_accept_floor = (1.0 - epsilon) * (1.0 - epsilon) / 7.0;
  r.tester_accept_ceiling = 4.0 * static_cast<double>(scores.size()) * delta;
  if (r.accepted) {
    r.regime = OrRegime::Accept;
    r.contract_ok = 1.0 >= r.tester_accept_floor;
  } else if (r.best_score <= delta) {
    r.regime = OrRegime::Reject;
    r.contract_ok = 0.0 <= r.tester_accept_ceiling;
  } else {
    r.regime = OrRegime::Gap;
    r.promise_violated = true;
  }
  return r;
}

Alg1Config Alg1Config::full_scale(int lambda, int m) {
  Alg1Config c;
  c.lambda = lambda;
  c.tau = static_cast<int>(std::floor(2.0 * std::log2(16.0 * m)));
  c.r = 1200 * lambda;
  c.battery = PurityBatteryConfig{16 * lambda * lambda, 8 * lambda};
  return c;
}

void Alg1Config::validate() const {
  if (lambda < 1) throw std::invalid_argument("Alg1Config: lambda must be positive");
  if (r < 3) throw std::invalid_argument("Alg1Config: r must be at least 3");
  if (tau < 1) throw std::invalid_argument("Alg1Config: tau must be at least 1");
  if (!(pass_fraction > 0.5 && pass_fraction < 1.0)) {
    throw std::invalid_argument("Alg1Config: pass_fraction must lie in (1/2, 1)");
  }
  battery.validate();
}

int Alg1Config::pass_threshold() const {
  return static_cast<int>(std::ceil(pass_fraction * r - 1e-9));
}

double Alg1Config::tom_epsilon() const {
  return tomography_epsilon > 0.0 ? tomography_epsilon : 2.0 / std::pow(2.0, tau / 2.0);
}
double Alg1Config::tom_delta() const {
  return tomography_delta > 0.0 ? tomography_delta : std::pow(2.0, -2.0 * lambda);
}
double Alg1Config::or_eps() const { return or_epsilon > 0.0 ? or_epsilon : std::pow(2.0, -lambda); }
double Alg1Config::or_del() const { return or_delta > 0.0 ? or_delta : std::pow(2.0, -2.0 * lambda); }

nlohmann::json Alg1Config::to_json() const {
  return {{"lambda", lambda},
          {"tau", tau},
          {"r", r},
          {"battery", battery_cfg_json(battery)},
          {"pass_fraction", pass_fraction},
          {"pass_threshold", pass_threshold()},
          {"tomography_epsilon", tom_epsilon()},
          {"tomography_delta", tom_delta()},
          {"tomography_mode", tomography_mode == NoiseMode::Exact ? "exact" : "perturbed"},
          {"or_epsilon", or_eps()},
          {"or_delta", or_del()}};
}

QueryResolver SimulatedOracle::resolver() const {
  return [this](const BitString& x) -> std::optional<UnitaryMatrix> {
    if (x.size() > tau) return std::nullopt;
    const auto it = reconstructions.find(x);
    if (it == reconstructions.end()) {
      throw std::logic_error("SimulatedOracle: no reconstruction for " + x.to_string());
    }
    return it->second;
  };
}

SimulatedOracle build_simulated_oracle(const ChfsInstance& oracle, int tau, double epsilon,
                                       double delta, NoiseMode mode, Rng& rng) {
  SimulatedOracle sim;
  sim.tau = tau;
  for (int len = 1; len <= tau; ++len) {
    for (const auto& x : all_bitstrings(len)) {
      const UnitaryMatrix s = oracle.swap_unitary(x);
      const UnitaryBlackBox box = [&s](const CVector& v) -> CVector { return s.matrix() * v; };
      const auto res = reconstruct_unitary(box, s.dim(), epsilon, delta, mode, rng);
      sim.queries_used += res.queries_used;
      sim.max_diamond_bound = std::max(sim.max_diamond_bound, res.diamond_bound);
      sim.reconstructions.emplace(x, res.reconstructed);
    }
  }
  return sim;
}

double p_k_subprotocol(const Alg1Config& cfg, const std::vector<PairBlock>& blocks,
                       const Channel& f_k) {
  cfg.validate();
  if (static_cast<int>(blocks.size()) != cfg.r) {
    throw DimensionMismatch("p_k_subprotocol: expected " + std::to_string(cfg.r) +
                            " blocks, got " + std::to_string(blocks.size()));
  }
  std::vector<double> pass;
  pass.reserve(blocks.size());
  for (const auto& b : blocks) {
    if (b.a.dim() != b.a_prime.dim()) throw DimensionMismatch("p_k_subprotocol: block shape mismatch");
    pass.push_back(swap_test_prob(f_k(b.a), b.a_prime));
  }
  return poisson_binomial_tail_ge(pass, static_cast<std::uint64_t>(cfg.pass_threshold()));
}

nlohmann::json Alg1Result::to_json() const {
  return {{"output", output},           {"flag", flag},
          {"battery", battery_json(battery)}, {"scores", scores},
          {"pass_probs", pass_probs},   {"or", oracle_or.to_json()},
          {"v_purity", v_purity},       {"gap_regime", gap_regime},
          {"tomography_queries", tomography_queries}};
}

Alg1Result alg1_distinguish(const Alg1Config& cfg, const Channel& v, const ChfsInstance& oracle,
                            const PruCandidate& candidate, Rng& rng) {
  cfg.validate();
  candidate.validate(oracle.length_fn());
  const int n = candidate.n_qubits();
  Alg1Result res;

  const DensityMatrix rho = pure_density(haar_state(n, rng));
  const DensityMatrix v_rho = v(rho);
  if (v_rho.n_qubits() != n) throw DimensionMismatch("alg1_distinguish: V changes the qubit count");
  res.battery = purity_battery(v_rho, cfg.battery, rng);
  res.flag = res.battery.flagged_impure;
  res.v_purity = purity(v_rho);
  res.gap_regime = !res.flag && res.v_purity < 1.0 - 1.0 / cfg.lambda;

  const auto sim = build_simulated_oracle(oracle, cfg.tau, cfg.tom_epsilon(), cfg.tom_delta(),
                                          cfg.tomography_mode, rng);
  res.tomography_queries = sim.queries_used;
  const auto resolver = sim.resolver();
  const std::vector<PairBlock> blocks(static_cast<std::size_t>(cfg.r), PairBlock{rho, v_rho});
  for (std::uint64_t k = 0; k < dim_of(candidate.key_bits()); ++k) {
    const auto key = BitString::from_uint(k, candidate.key_bits());
    const DensityMatrix f_rho = pru_apply(candidate, key, rho, resolver);
    res.pass_probs.push_back(swap_test_prob(f_rho, v_rho));
    // Every block carries the same rho, so F_k(rho) is computed once.
    res.scores.push_back(p_k_subprotocol(cfg, blocks, [&](const DensityMatrix&) { return f_rho; }));
  }
  res.oracle_or = or_surrogate(res.scores, cfg.or_eps(), cfg.or_del());
  res.output = res.flag || res.oracle_or.accepted;
  return res;
}

double alg1_hybrid_distance(const PruCandidate& c, const ChfsInstance& oracle,
                            const SimulatedOracle& sim, const BitString& key,
                            const DensityMatrix& rho) {
  return trace_distance(pru_apply(c, oracle, key, rho), pru_apply(c, key, rho, sim.resolver()));
}

Alg2Config Alg2Config::full_scale(int lambda, int t, int d) {
  Alg2Config c;
  c.lambda = lambda;
  c.r = 10 * lambda * lambda;
  c.big_t = 20.0 * c.r * c.r * std::pow(2.0 * t * d + 1.0, 3);
  const double reps = 16.0 * c.big_t * lambda;
  c.battery = PurityBatteryConfig{reps > 2e9 ? 2000000000 : static_cast<int>(reps), 8 * lambda};
  c.or_epsilon = 0.2;
  return c;
}

void Alg2Config::validate() const {
  if (lambda < 1 || r < 1 || big_t < 0.0 || learning_shots < 1) {
    throw std::invalid_argument("Alg2Config: parameters must be positive");
  }
  if (!(or_epsilon > 0.0 && or_epsilon < 1.0)) throw std::invalid_argument("Alg2Config: or_epsilon outside (0, 1)");
  battery.validate();
}

double Alg2Config::or_del() const { return or_delta > 0.0 ? or_delta : std::pow(2.0, -2.0 * lambda); }

nlohmann::json Alg2Config::to_json() const {
  return {{"lambda", lambda},
          {"r", r},
          {"T", big_t},
          {"battery", battery_cfg_json(battery)},
          {"learning", learning == QueryLearning::DirectInspection ? "direct" : "argmax_branches"},
          {"learning_shots", learning_shots},
          {"or_epsilon", or_epsilon},
          {"or_delta", or_del()}};
}

nlohmann::json Alg2Result::to_json() const {
  nlohmann::json plans_json = nlohmann::json::array();
  for (const auto& p : plans) {
    nlohmann::json qs = nlohmann::json::array();
    for (const auto& q : p.queries) {
      qs.push_back({{"lambda", q.lambda}, {"x", q.x.to_string()}, {"probability", q.probability}});
    }
    plans_json.push_back({{"queries", qs},
                          {"part_dims", p.part_dims},
                          {"product_test_prob", p.product_test_prob},
                          {"score", p.score}});
  }
  return {{"output", output},
          {"aborted", aborted},
          {"battery", battery_json(battery)},
          {"plans", plans_json},
          {"or", oracle_or.to_json()},
          {"challenge_purity", challenge_purity},
          {"gap_regime", gap_regime}};
}

ProductPartition alg2_partition(const PrsgCandidate& c, const PrsgKeyCircuit& kc,
                                const std::vector<QueryOutcome>& queries,
                                const LengthFunction& ell) {
  if (queries.size() != kc.queries.size()) {
    throw DimensionMismatch("alg2_partition: one learned outcome per query required");
  }
  const int d = c.output_qubits();
  ProductPartition part;
  std::set<int> used;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const int len = ell(queries[i].lambda);
    const auto& y = kc.queries[i].y_qubits;
    if (len > static_cast<int>(y.size())) {
      throw DimensionMismatch("alg2_partition: l(lambda) exceeds the Y register");
    }
    for (int j = 0; j < len; ++j) {
      const int q = y[static_cast<std::size_t>(j)];
      if (q >= d) throw DimensionMismatch("alg2_partition: Y register reaches into the ancilla");
      if (!used.insert(q).second) throw DimensionMismatch("alg2_partition: Y registers overlap");
      part.order.push_back(q);
    }
    part.dims.push_back(static_cast<int>(dim_of(len)));
  }
  for (int q = 0; q < d; ++q) {
    if (used.count(q) != 0) continue;
    part.order.push_back(q);
    part.dims.push_back(2);
  }
  if (static_cast<int>(part.dims.size()) > kMaxProductTestParts) {
    throw DimensionCapExceeded("alg2_partition: too many product-test parts");
  }
  return part;
}

Alg2Result alg2_distinguish(const Alg2Config& cfg, const DensityMatrix& challenge,
                            const ChfsInstance& oracle, const PrsgCandidate& candidate, Rng& rng) {
  cfg.validate();
  const int d = candidate.output_qubits();
  const int u = candidate.ancilla_qubits();
  const int n = d + u;
  if (challenge.n_qubits() != d) {
    throw DimensionMismatch("alg2_distinguish: challenge has " + std::to_string(challenge.n_qubits()) +
                            " qubits, candidate outputs " + std::to_string(d));
  }
  Alg2Result res;
  res.battery = purity_battery(challenge, cfg.battery, rng);
  res.challenge_purity = purity(challenge);
  if (res.battery.flagged_impure) {
    res.output = true;
    res.aborted = true;
    return res;
  }
  res.gap_regime = cfg.big_t > 0.0 && res.challenge_purity < 1.0 - 1.0 / cfg.big_t;

  // U^dagger (rho (x) |0><0|) U is assembled from the eigenvectors of rho
  // padded with |0^u>, then the ancilla is traced out.
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(challenge.matrix());
  const auto dim_u = static_cast<Eigen::Index>(dim_of(u));
  const auto dim_d = static_cast<Eigen::Index>(dim_of(d));

  std::vector<double> scores;
  for (std::uint64_t k = 0; k < dim_of(candidate.key_bits()); ++k) {
    const auto key = BitString::from_uint(k, candidate.key_bits());
    const auto& kc = candidate.circuit(key);
    Alg2KeyPlan plan;
    plan.queries = learn_queries(candidate, oracle, key, cfg.learning, rng, cfg.learning_shots);
    const auto part = alg2_partition(candidate, kc, plan.queries, oracle.length_fn());
    plan.part_dims = part.dims;
    const Circuit undo = kc.oracle_free().adjoint();
    CMatrix reduced = CMatrix::Zero(dim_d, dim_d);
    for (Eigen::Index e = 0; e < dim_d; ++e) {
      const double w = eig.eigenvalues()(e);
      if (w <= tol::kStructural) continue;
      CVector psi = CVector::Zero(dim_d * dim_u);
      for (Eigen::Index o = 0; o < dim_d; ++o) psi(o * dim_u) = eig.eigenvectors()(o, e);
      undo.apply(psi, n);
      const Eigen::Map<const CMatrix> a(psi.data(), dim_u, dim_d);
      reduced.noalias() += w * (a.transpose() * a.conjugate());
    }
    const auto arranged = DensityMatrix::trusted(permute_qubits(reduced, d, part.order));
    plan.product_test_prob = product_test_prob(arranged, SubsystemSpec(part.dims));
    plan.score = std::pow(plan.product_test_prob, cfg.r);
    scores.push_back(plan.score);
    res.plans.push_back(std::move(plan));
  }
  res.oracle_or = or_surrogate(scores, cfg.or_epsilon, cfg.or_del());
  res.output = res.oracle_or.accepted;
  return res;
}

}  // namespace chfs
