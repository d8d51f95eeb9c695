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

#include "chfs/primitives/prsg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "chfs/core/errors.hpp"
#include "chfs/core/gates.hpp"
#include "chfs/core/linalg.hpp"

namespace chfs {

namespace {

std::vector<int> concat(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

/// Splits a measured Lambda X pattern into lambda and the first lambda bits of X.
struct Decoded {
  int lambda;
  std::uint64_t x;
};

Decoded decode(std::uint64_t v, const PrsgQuery& q) {
  const int xw = static_cast<int>(q.x_qubits.size());
  const auto lam = static_cast<int>(v >> xw);
  const std::uint64_t xfull = v & (dim_of(xw) - 1);
  if (lam < 1 || lam > xw) {
    throw std::invalid_argument("prsg: measured length " + std::to_string(lam) +
                                " outside [1, " + std::to_string(xw) + "]");
  }
  return {lam, xfull >> (xw - lam)};
}

/// Unitary on the first l(lambda) qubits of Y taking |0> to |phi_x>, and the
/// qubits it acts on.
struct OracleAction {
  UnitaryMatrix unitary;
  std::vector<int> targets;
};

OracleAction oracle_action(const ChfsInstance& oracle, const PrsgQuery& q, const Decoded& dv) {
  const auto x = BitString::from_uint(dv.x, dv.lambda);
  const PureState phi = oracle.oracle_state(x);
  const int len = phi.n_qubits();
  if (len > static_cast<int>(q.y_qubits.size())) {
    throw DimensionMismatch("prsg: l(" + std::to_string(dv.lambda) + ") = " +
                            std::to_string(len) + " exceeds the " +
                            std::to_string(q.y_qubits.size()) + "-qubit Y register");
  }
  return {householder_map(PureState::zero(len).amplitudes(), phi.amplitudes()),
          std::vector<int>(q.y_qubits.begin(), q.y_qubits.begin() + len)};
}

void check_register(const std::vector<int>& r, int n, const char* what) {
  for (int qb : r) {
    if (qb < 0 || qb >= n) {
      throw DimensionMismatch(std::string("PrsgCandidate: ") + what + " qubit " +
                              std::to_string(qb) + " outside the register");
    }
  }
}

QueryLog summarize(int index, const std::map<std::pair<int, std::uint64_t>, double>& dist) {
  QueryLog log;
  log.index = index;
  double best = -1.0;
  for (const auto& [key, p] : dist) {
    QueryOutcome o{key.first, BitString::from_uint(key.second, key.first), p};
    if (p > best) {
      best = p;
      log.argmax = o;
    }
    log.distribution.push_back(std::move(o));
  }
  return log;
}

}  // namespace

nlohmann::json PrsgQuery::to_json() const {
  return {{"lambda_qubits", lambda_qubits}, {"x_qubits", x_qubits}, {"y_qubits", y_qubits}};
}

PrsgQuery PrsgQuery::from_json(const nlohmann::json& j) {
  return {j.at("lambda_qubits").get<std::vector<int>>(), j.at("x_qubits").get<std::vector<int>>(),
          j.at("y_qubits").get<std::vector<int>>()};
}

Circuit PrsgKeyCircuit::oracle_free() const {
  Circuit all;
  for (const auto& u : unitaries)
    for (const auto& g : u.gates()) all.add(g);
  return all;
}

nlohmann::json PrsgKeyCircuit::to_json() const {
  nlohmann::json us = nlohmann::json::array();
  for (const auto& u : unitaries) us.push_back(u.to_json());
  nlohmann::json qs = nlohmann::json::array();
  for (const auto& q : queries) qs.push_back(q.to_json());
  return {{"unitaries", us}, {"queries", qs}};
}

PrsgKeyCircuit PrsgKeyCircuit::from_json(const nlohmann::json& j) {
  PrsgKeyCircuit c;
  for (const auto& u : j.at("unitaries")) c.unitaries.push_back(Circuit::from_json(u));
  for (const auto& q : j.at("queries")) c.queries.push_back(PrsgQuery::from_json(q));
  return c;
}

PrsgCandidate::PrsgCandidate(int key_bits, int d, int u, std::vector<PrsgKeyCircuit> circuits,
                             bool declares_quasi_pure, double threshold)
    : key_bits_(key_bits), d_(d), u_(u), circuits_(std::move(circuits)),
      quasi_pure_(declares_quasi_pure), threshold_(threshold) {
  if (key_bits < 1 || key_bits > 16) throw std::invalid_argument("PrsgCandidate: key_bits out of range");
  if (d < 1 || u < 0) throw std::invalid_argument("PrsgCandidate: bad register sizes");
  check_qubit_cap(d + u);
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw std::invalid_argument("PrsgCandidate: threshold outside [0, 1]");
  }
  if (circuits_.size() != dim_of(key_bits)) {
    throw std::invalid_argument("PrsgCandidate: need one circuit per key");
  }
  const int n = d + u;
  for (const auto& c : circuits_) {
    if (c.unitaries.size() != c.queries.size() + 1) {
      throw std::invalid_argument("PrsgCandidate: need t + 1 unitaries for t queries");
    }
    for (const auto& uc : c.unitaries) uc.check_fits(n);
    for (const auto& q : c.queries) {
      if (q.lambda_qubits.empty() || q.x_qubits.empty() || q.y_qubits.empty()) {
        throw std::invalid_argument("PrsgCandidate: empty query register");
      }
      check_register(q.lambda_qubits, n, "Lambda");
      check_register(q.x_qubits, n, "X");
      check_register(q.y_qubits, n, "Y");
      const auto all = concat(concat(q.lambda_qubits, q.x_qubits), q.y_qubits);
      if (std::set<int>(all.begin(), all.end()).size() != all.size()) {
        throw std::invalid_argument("PrsgCandidate: query registers overlap");
      }
    }
  }
}

const PrsgKeyCircuit& PrsgCandidate::circuit(const BitString& key) const {
  if (key.size() != key_bits_) {
    throw DimensionMismatch("PrsgCandidate: key has " + std::to_string(key.size()) +
                            " bits, expected " + std::to_string(key_bits_));
  }
  return circuits_[key.to_uint()];
}

nlohmann::json PrsgCandidate::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : circuits_) cs.push_back(c.to_json());
  return {{"type", "prsg"},       {"key_bits", key_bits_},
          {"d", d_},              {"u", u_},
          {"declares_quasi_pure", quasi_pure_},
          {"threshold", threshold_}, {"circuits", cs}};
}

PrsgCandidate PrsgCandidate::from_json(const nlohmann::json& j) {
  std::vector<PrsgKeyCircuit> cs;
  for (const auto& c : j.at("circuits")) cs.push_back(PrsgKeyCircuit::from_json(c));
  return PrsgCandidate(j.at("key_bits").get<int>(), j.at("d").get<int>(), j.at("u").get<int>(),
                       std::move(cs), j.at("declares_quasi_pure").get<bool>(),
                       j.at("threshold").get<double>());
}

namespace {

/// Runs the branch mixture; stops before the final unitary when log_only is set.
CMatrix simulate(const PrsgCandidate& c, const ChfsInstance& oracle, const BitString& key,
                 bool log_only, std::vector<QueryLog>& log) {
  const auto& kc = c.circuit(key);
  const int n = c.total_qubits();
  const auto dim = static_cast<Eigen::Index>(dim_of(n));
  CMatrix rho = CMatrix::Zero(dim, dim);
  rho(0, 0) = 1.0;
  kc.unitaries[0].apply(rho, n);

  for (std::size_t i = 0; i < kc.queries.size(); ++i) {
    const auto& q = kc.queries[i];
    const auto reg = concat(q.lambda_qubits, q.x_qubits);
    std::vector<std::uint64_t> pattern(static_cast<std::size_t>(dim));
    std::map<std::uint64_t, double> weights;
    for (Eigen::Index r = 0; r < dim; ++r) {
      pattern[static_cast<std::size_t>(r)] = extract_bits(static_cast<std::uint64_t>(r), n, reg);
      weights[pattern[static_cast<std::size_t>(r)]] += rho(r, r).real();
    }
    std::map<std::pair<int, std::uint64_t>, double> dist;
    CMatrix next = CMatrix::Zero(dim, dim);
    for (const auto& [v, p] : weights) {
      if (p <= tol::kStructural) continue;
      const Decoded dv = decode(v, q);
      dist[{dv.lambda, dv.x}] += p;
      CMatrix branch = rho;
      for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index s = 0; s < dim; ++s) {
          if (pattern[static_cast<std::size_t>(r)] != v || pattern[static_cast<std::size_t>(s)] != v) {
            branch(r, s) = 0.0;
          }
        }
      }
      const auto act = oracle_action(oracle, q, dv);
      apply_on_qubits(branch, n, act.unitary.matrix(), act.targets);
      next += branch;
    }
    log.push_back(summarize(static_cast<int>(i), dist));
    rho = std::move(next);
    if (log_only && i + 1 == kc.queries.size()) break;
    kc.unitaries[i + 1].apply(rho, n);
  }
  return rho;
}

}  // namespace

std::vector<QueryLog> prsg_query_log(const PrsgCandidate& c, const ChfsInstance& oracle,
                                     const BitString& key) {
  std::vector<QueryLog> log;
  simulate(c, oracle, key, true, log);
  return log;
}

PrsgOutput prsg_gen(const PrsgCandidate& c, const ChfsInstance& oracle, const BitString& key,
                    bool strict) {
  PrsgOutput out{DensityMatrix::maximally_mixed(0), DensityMatrix::maximally_mixed(0), {}, 1.0, true};
  const CMatrix rho = simulate(c, oracle, key, false, out.log);

  out.pre_trace = DensityMatrix::trusted(rho);
  const SubsystemSpec split({static_cast<int>(dim_of(c.output_qubits())),
                             static_cast<int>(dim_of(c.ancilla_qubits()))});
  out.output = partial_trace(out.pre_trace, split, {0});
  out.ancilla_fidelity = partial_trace(out.pre_trace, split, {1}).matrix()(0, 0).real();
  out.quasi_pure_ok = out.ancilla_fidelity >= c.threshold();
  if (strict && c.declares_quasi_pure() && !out.quasi_pure_ok) {
    throw InvariantViolation("prsg_gen: ancilla fidelity " + std::to_string(out.ancilla_fidelity) +
                             " below the declared threshold " + std::to_string(c.threshold()));
  }
  return out;
}

PrsgTrajectory sample_prsg_trajectory(const PrsgCandidate& c, const ChfsInstance& oracle,
                                      const BitString& key, Rng& rng) {
  const auto& kc = c.circuit(key);
  const int n = c.total_qubits();
  CVector psi = PureState::zero(n).amplitudes();
  kc.unitaries[0].apply(psi, n);
  PrsgTrajectory traj{{}, PureState::zero(0)};
  for (std::size_t i = 0; i < kc.queries.size(); ++i) {
    const auto& q = kc.queries[i];
    const auto reg = concat(q.lambda_qubits, q.x_qubits);
    std::map<std::uint64_t, double> weights;
    for (Eigen::Index r = 0; r < psi.size(); ++r) {
      weights[extract_bits(static_cast<std::uint64_t>(r), n, reg)] += std::norm(psi(r));
    }
    double u = rng.uniform();
    auto chosen = weights.begin();
    for (auto it = weights.begin(); it != weights.end(); ++it) {
      if (it->second <= tol::kStructural) continue;
      chosen = it;
      if (u < it->second) break;
      u -= it->second;
    }
    const auto [v, p] = *chosen;
    const Decoded dv = decode(v, q);
    project_pattern(psi, n, reg, v);
    psi /= psi.norm();
    const auto act = oracle_action(oracle, q, dv);
    apply_on_qubits(psi, n, act.unitary.matrix(), act.targets);
    traj.outcomes.push_back({dv.lambda, BitString::from_uint(dv.x, dv.lambda), p});
    kc.unitaries[i + 1].apply(psi, n);
  }
  traj.final_state = PureState::normalized(std::move(psi));
  return traj;
}

std::vector<QueryOutcome> learn_queries(const PrsgCandidate& c, const ChfsInstance& oracle,
                                        const BitString& key, QueryLearning mode, Rng& rng,
                                        int shots) {
  std::vector<QueryOutcome> out;
  if (mode == QueryLearning::DirectInspection) {
    for (const auto& log : prsg_query_log(c, oracle, key)) out.push_back(log.argmax);
    return out;
  }
  if (shots < 1) throw std::invalid_argument("learn_queries: shots must be positive");
  const std::size_t t = c.circuit(key).queries.size();
  std::vector<std::map<std::pair<int, std::uint64_t>, int>> counts(t);
  for (int s = 0; s < shots; ++s) {
    const auto traj = sample_prsg_trajectory(c, oracle, key, rng);
    for (std::size_t i = 0; i < t; ++i) {
      const auto& o = traj.outcomes[i];
      ++counts[i][{o.lambda, o.x.to_uint()}];
    }
  }
  for (const auto& cnt : counts) {
    QueryOutcome best;
    int top = -1;
    for (const auto& [k, n] : cnt) {
      if (n > top) {
        top = n;
        best = {k.first, BitString::from_uint(k.second, k.first),
                static_cast<double>(n) / static_cast<double>(shots)};
      }
    }
    out.push_back(best);
  }
  return out;
}

PrsgCandidate make_product_form_prsg(const ProductFormSpec& spec) {
  const double p = spec.flip_probability;
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("make_product_form_prsg: flip probability outside [0, 1]");
  }
  const PrsgQuery q1{{6, 7}, {4, 5}, {0, 1}};
  const PrsgQuery q2{{6, 7}, {4, 5}, {2, 3}};
  const double theta = 2.0 * std::asin(std::sqrt(p));
  CMatrix ry(2, 2);
  ry << std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2), std::cos(theta / 2);

  std::vector<PrsgKeyCircuit> circuits;
  for (std::uint64_t k = 0; k < dim_of(spec.key_bits); ++k) {
    Rng rng = Rng(spec.seed, 0x50525347ULL).child(k);
    const std::uint64_t x1 = rng.uniform_int(4);
    const std::uint64_t x2 = rng.uniform_int(4);
    auto load = [](Circuit& c, std::uint64_t bits) {
      if (bits & 2U) c.add(Gate::x(4));
      if (bits & 1U) c.add(Gate::x(5));
    };
    PrsgKeyCircuit kc;
    Circuit u0;
    u0.add(Gate::x(6));  // Lambda = 10, lambda = 2
    load(u0, x1);
    if (p > 0.0) u0.add(Gate::matrix({4}, ry));
    Circuit u1;
    load(u1, x1 ^ x2);
    Circuit u2;
    u2.add(Gate::x(6));
    load(u2, x2);
    u2.add(Gate::haar({0, 1, 2, 3, 4, 5}, rng.next_u64()));
    kc.unitaries = {u0, u1, u2};
    kc.queries = {q1, q2};
    circuits.push_back(std::move(kc));
  }
  return PrsgCandidate(spec.key_bits, 6, 2, std::move(circuits));
}

}  // namespace chfs
