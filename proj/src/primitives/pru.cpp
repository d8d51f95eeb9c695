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

#include "chfs/primitives/pru.hpp"

#include <stdexcept>
#include <string>

#include "chfs/core/errors.hpp"
#include "chfs/core/gates.hpp"
#include "chfs/core/rng.hpp"

namespace chfs {

namespace {

const char* step_name(PruStep::Kind k) {
  switch (k) {
    case PruStep::Kind::Unitary: return "unitary";
    case PruStep::Kind::FixedQuery: return "fixed_query";
    case PruStep::Kind::AdaptiveQuery: return "adaptive_query";
    case PruStep::Kind::Depolarize: return "depolarize";
  }
  return "?";
}

std::vector<int> span(int offset, int count) {
  std::vector<int> q(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) q[static_cast<std::size_t>(i)] = offset + i;
  return q;
}

void apply_block(CMatrix& rho, int n, const std::optional<UnitaryMatrix>& u, int offset) {
  if (!u) return;
  apply_on_qubits(rho, n, u->matrix(), span(offset, u->n_qubits()));
}

}  // namespace

PruStep PruStep::unitary(Gate g) {
  PruStep s;
  s.kind = Kind::Unitary;
  s.gate = std::move(g);
  return s;
}

PruStep PruStep::fixed_query(BitString x, int offset) {
  if (x.empty()) throw std::invalid_argument("PruStep: empty query string");
  PruStep s;
  s.kind = Kind::FixedQuery;
  s.x = std::move(x);
  s.offset = offset;
  return s;
}

PruStep PruStep::adaptive_query(std::vector<int> x_qubits, int offset) {
  if (x_qubits.empty()) throw std::invalid_argument("PruStep: empty query register");
  PruStep s;
  s.kind = Kind::AdaptiveQuery;
  s.x_qubits = std::move(x_qubits);
  s.offset = offset;
  return s;
}

PruStep PruStep::depolarize(double strength) {
  if (!(strength >= 0.0 && strength <= 1.0)) {
    throw std::invalid_argument("PruStep: depolarizing strength outside [0, 1]");
  }
  PruStep s;
  s.kind = Kind::Depolarize;
  s.strength = strength;
  return s;
}

nlohmann::json PruStep::to_json() const {
  nlohmann::json j{{"kind", step_name(kind)}};
  switch (kind) {
    case Kind::Unitary: j["gate"] = gate->to_json(); break;
    case Kind::FixedQuery: j["x"] = x.to_string(); j["offset"] = offset; break;
    case Kind::AdaptiveQuery: j["x_qubits"] = x_qubits; j["offset"] = offset; break;
    case Kind::Depolarize: j["strength"] = strength; break;
  }
  return j;
}

PruStep PruStep::from_json(const nlohmann::json& j) {
  const auto k = j.at("kind").get<std::string>();
  if (k == "unitary") return unitary(Gate::from_json(j.at("gate")));
  if (k == "fixed_query") {
    return fixed_query(BitString::parse(j.at("x").get<std::string>()), j.at("offset").get<int>());
  }
  if (k == "adaptive_query") {
    return adaptive_query(j.at("x_qubits").get<std::vector<int>>(), j.at("offset").get<int>());
  }
  if (k == "depolarize") return depolarize(j.at("strength").get<double>());
  throw std::invalid_argument("PruStep: unknown kind '" + k + "'");
}

PruCandidate::PruCandidate(int key_bits, int n_qubits,
                           std::vector<std::vector<PruStep>> circuits)
    : key_bits_(key_bits), n_qubits_(n_qubits), circuits_(std::move(circuits)) {
  if (key_bits < 1 || key_bits > 16) throw std::invalid_argument("PruCandidate: key_bits out of range");
  if (n_qubits < 1) throw std::invalid_argument("PruCandidate: need at least one qubit");
  if (circuits_.size() != dim_of(key_bits)) {
    throw std::invalid_argument("PruCandidate: need one circuit per key");
  }
  for (const auto& c : circuits_) {
    for (const auto& s : c) {
      if (s.kind == PruStep::Kind::Unitary) {
        Circuit(std::vector<Gate>{*s.gate}).check_fits(n_qubits);
      }
    }
  }
}

const std::vector<PruStep>& PruCandidate::steps(const BitString& key) const {
  if (key.size() != key_bits_) {
    throw DimensionMismatch("PruCandidate: key has " + std::to_string(key.size()) +
                            " bits, expected " + std::to_string(key_bits_));
  }
  return circuits_[key.to_uint()];
}

bool PruCandidate::has_nonunitary_steps() const {
  for (const auto& c : circuits_)
    for (const auto& s : c)
      if (s.kind == PruStep::Kind::AdaptiveQuery || s.kind == PruStep::Kind::Depolarize) return true;
  return false;
}

std::vector<BitString> PruCandidate::fixed_queries(const BitString& key) const {
  std::vector<BitString> out;
  for (const auto& s : steps(key)) {
    if (s.kind == PruStep::Kind::FixedQuery) out.push_back(s.x);
  }
  return out;
}

void PruCandidate::validate(const LengthFunction& ell) const {
  for (const auto& c : circuits_) {
    for (const auto& s : c) {
      int len = 0;
      if (s.kind == PruStep::Kind::FixedQuery) len = s.x.size();
      if (s.kind == PruStep::Kind::AdaptiveQuery) len = static_cast<int>(s.x_qubits.size());
      if (len == 0) continue;
      const int width = ell(len) + 1;
      if (s.offset < 0 || s.offset + width > n_qubits_) {
        throw DimensionMismatch("PruCandidate: query of length " + std::to_string(len) +
                                " needs " + std::to_string(width) + " qubits at offset " +
                                std::to_string(s.offset) + " of a " +
                                std::to_string(n_qubits_) + "-qubit register");
      }
      for (int q : s.x_qubits) {
        if (q < 0 || q >= n_qubits_ || (q >= s.offset && q < s.offset + width)) {
          throw DimensionMismatch("PruCandidate: adaptive register overlaps the reflection");
        }
      }
    }
  }
}

nlohmann::json PruCandidate::to_json() const {
  nlohmann::json circuits = nlohmann::json::array();
  for (const auto& c : circuits_) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : c) steps.push_back(s.to_json());
    circuits.push_back(steps);
  }
  return {{"type", "pru"}, {"key_bits", key_bits_}, {"n_qubits", n_qubits_}, {"circuits", circuits}};
}

PruCandidate PruCandidate::from_json(const nlohmann::json& j) {
  std::vector<std::vector<PruStep>> circuits;
  for (const auto& c : j.at("circuits")) {
    std::vector<PruStep> steps;
    for (const auto& s : c) steps.push_back(PruStep::from_json(s));
    circuits.push_back(std::move(steps));
  }
  return PruCandidate(j.at("key_bits").get<int>(), j.at("n_qubits").get<int>(), std::move(circuits));
}

QueryResolver oracle_resolver(const ChfsInstance& oracle) {
  return [&oracle](const BitString& x) -> std::optional<UnitaryMatrix> {
    return oracle.swap_unitary(x);
  };
}

DensityMatrix pru_apply(const PruCandidate& c, const ChfsInstance& oracle,
                        const BitString& key, const DensityMatrix& rho) {
  c.validate(oracle.length_fn());
  return pru_apply(c, key, rho, oracle_resolver(oracle));
}

DensityMatrix pru_apply(const PruCandidate& c, const BitString& key,
                        const DensityMatrix& rho, const QueryResolver& resolver) {
  const int n = c.n_qubits();
  if (rho.n_qubits() != n) {
    throw DimensionMismatch("pru_apply: state has " + std::to_string(rho.n_qubits()) +
                            " qubits, candidate acts on " + std::to_string(n));
  }
  CMatrix m = rho.matrix();
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  for (const auto& s : c.steps(key)) {
    switch (s.kind) {
      case PruStep::Kind::Unitary:
        apply_on_qubits(m, n, s.gate->unitary(), s.gate->targets());
        break;
      case PruStep::Kind::FixedQuery:
        apply_block(m, n, resolver(s.x), s.offset);
        break;
      case PruStep::Kind::AdaptiveQuery: {
        const int len = static_cast<int>(s.x_qubits.size());
        CMatrix acc = CMatrix::Zero(d, d);
        for (std::uint64_t v = 0; v < dim_of(len); ++v) {
          CMatrix branch = m;
          for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
              if (extract_bits(static_cast<std::uint64_t>(i), n, s.x_qubits) != v ||
                  extract_bits(static_cast<std::uint64_t>(j), n, s.x_qubits) != v) {
                branch(i, j) = 0.0;
              }
            }
          }
          if (branch.trace().real() <= 0.0) continue;
          apply_block(branch, n, resolver(BitString::from_uint(v, len)), s.offset);
          acc += branch;
        }
        m = acc;
        break;
      }
      case PruStep::Kind::Depolarize:
        m = (1.0 - s.strength) * m +
            s.strength * CMatrix::Identity(d, d) / static_cast<double>(d);
        break;
    }
  }
  return DensityMatrix::trusted(std::move(m));
}

PureState pru_apply_pure(const PruCandidate& c, const ChfsInstance& oracle,
                         const BitString& key, const PureState& psi) {
  c.validate(oracle.length_fn());
  const int n = c.n_qubits();
  if (psi.n_qubits() != n) throw DimensionMismatch("pru_apply_pure: qubit count mismatch");
  CVector v = psi.amplitudes();
  for (const auto& s : c.steps(key)) {
    switch (s.kind) {
      case PruStep::Kind::Unitary:
        apply_on_qubits(v, n, s.gate->unitary(), s.gate->targets());
        break;
      case PruStep::Kind::FixedQuery: {
        const auto u = oracle.swap_unitary(s.x);
        apply_on_qubits(v, n, u.matrix(), span(s.offset, u.n_qubits()));
        break;
      }
      default:
        throw std::logic_error("pru_apply_pure: circuit measures or adds noise");
    }
  }
  return PureState::normalized(std::move(v));
}

PruCandidate make_layered_pru(const LayeredPruSpec& spec, const LengthFunction& ell) {
  const int n = spec.n_qubits;
  std::vector<std::vector<PruStep>> circuits;
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) all[static_cast<std::size_t>(q)] = q;
  for (std::uint64_t k = 0; k < dim_of(spec.key_bits); ++k) {
    Rng rng = Rng(spec.seed, 0x505255ULL).child(k);
    std::vector<PruStep> steps;
    steps.push_back(PruStep::unitary(Gate::haar(all, rng.next_u64())));
    for (std::size_t i = 0; i < spec.query_lengths.size(); ++i) {
      const int len = spec.query_lengths[i];
      const int width = ell(len) + 1;
      const bool adaptive = spec.adaptive_last && i + 1 == spec.query_lengths.size();
      const int lo = adaptive ? len : 0;
      if (lo + width > n) {
        throw DimensionMismatch("make_layered_pru: query of length " + std::to_string(len) +
                                " does not fit " + std::to_string(n) + " qubits");
      }
      const int offset = lo + static_cast<int>(rng.uniform_int(
                                  static_cast<std::uint64_t>(n - width - lo + 1)));
      if (adaptive) {
        steps.push_back(PruStep::adaptive_query(span(0, len), offset));
      } else {
        const auto x = BitString::from_uint(rng.uniform_int(dim_of(len)), len);
        steps.push_back(PruStep::fixed_query(x, offset));
      }
      if (spec.depolarize > 0.0 && i + 1 == spec.query_lengths.size()) {
        steps.push_back(PruStep::depolarize(spec.depolarize));
      }
      steps.push_back(PruStep::unitary(Gate::haar(all, rng.next_u64())));
    }
    circuits.push_back(std::move(steps));
  }
  PruCandidate c(spec.key_bits, n, std::move(circuits));
  c.validate(ell);
  return c;
}

}  // namespace chfs
