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

#include "chfs/primitives/circuit.hpp"

#include <stdexcept>
#include <string>

#include "chfs/core/gates.hpp"
#include "chfs/core/haar.hpp"
#include "chfs/core/rng.hpp"
#include "chfs/primitives/serialization.hpp"

namespace chfs {

namespace {

constexpr std::uint64_t kHaarGateStream = 0x4861617247617465ULL;

const char* kind_name(Gate::Kind k) {
  switch (k) {
    case Gate::Kind::X: return "x";
    case Gate::Kind::H: return "h";
    case Gate::Kind::Z: return "z";
    case Gate::Kind::Haar: return "haar";
    case Gate::Kind::Matrix: return "matrix";
  }
  return "?";
}

}  // namespace

Gate::Gate(Kind k, std::vector<int> targets, std::uint64_t seed, CMatrix m)
    : kind_(k), targets_(std::move(targets)), seed_(seed), m_(std::move(m)) {
  if (targets_.empty()) throw std::invalid_argument("Gate: no targets");
  const auto d = static_cast<Eigen::Index>(dim_of(static_cast<int>(targets_.size())));
  if (m_.rows() != d || m_.cols() != d) {
    throw std::invalid_argument("Gate: matrix does not match target count");
  }
}

Gate Gate::x(int q) { return Gate(Kind::X, {q}, 0, pauli_x()); }
Gate Gate::h(int q) { return Gate(Kind::H, {q}, 0, hadamard()); }
Gate Gate::z(int q) { return Gate(Kind::Z, {q}, 0, pauli_z()); }

Gate Gate::haar(std::vector<int> targets, std::uint64_t seed) {
  Rng rng(seed, kHaarGateStream);
  Limits lim;
  lim.max_qubits = 8;
  CMatrix m = haar_unitary(static_cast<int>(targets.size()), rng, lim).matrix();
  return Gate(Kind::Haar, std::move(targets), seed, std::move(m));
}

Gate Gate::matrix(std::vector<int> targets, const CMatrix& m) {
  UnitaryMatrix checked(m);
  return Gate(Kind::Matrix, std::move(targets), 0, checked.matrix());
}

Gate Gate::adjoint() const {
  switch (kind_) {
    case Kind::X:
    case Kind::H:
    case Kind::Z:
      return *this;
    default:
      return Gate(Kind::Matrix, targets_, 0, m_.adjoint());
  }
}

nlohmann::json Gate::to_json() const {
  nlohmann::json j{{"kind", kind_name(kind_)}, {"targets", targets_}};
  if (kind_ == Kind::Haar) j["seed"] = seed_;
  if (kind_ == Kind::Matrix) j["matrix"] = matrix_to_json(m_);
  return j;
}

Gate Gate::from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  auto targets = j.at("targets").get<std::vector<int>>();
  if (kind == "x" || kind == "h" || kind == "z") {
    if (targets.size() != 1) throw std::invalid_argument("Gate: single-qubit kind with many targets");
    if (kind == "x") return x(targets[0]);
    if (kind == "h") return h(targets[0]);
    return z(targets[0]);
  }
  if (kind == "haar") return haar(std::move(targets), j.at("seed").get<std::uint64_t>());
  if (kind == "matrix") return matrix(std::move(targets), matrix_from_json(j.at("matrix")));
  throw std::invalid_argument("Gate: unknown kind '" + kind + "'");
}

void Circuit::apply(CVector& state, int n_qubits) const {
  for (const auto& g : gates_) apply_on_qubits(state, n_qubits, g.unitary(), g.targets());
}

void Circuit::apply(CMatrix& rho, int n_qubits) const {
  for (const auto& g : gates_) apply_on_qubits(rho, n_qubits, g.unitary(), g.targets());
}

CMatrix Circuit::matrix(int n_qubits) const {
  const auto d = static_cast<Eigen::Index>(dim_of(n_qubits));
  CMatrix m = CMatrix::Identity(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    CVector col = m.col(c);
    apply(col, n_qubits);
    m.col(c) = col;
  }
  return m;
}

Circuit Circuit::adjoint() const {
  std::vector<Gate> out;
  out.reserve(gates_.size());
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) out.push_back(it->adjoint());
  return Circuit(std::move(out));
}

void Circuit::check_fits(int n_qubits) const {
  for (const auto& g : gates_) {
    for (int q : g.targets()) {
      if (q < 0 || q >= n_qubits) {
        throw std::out_of_range("Circuit: gate target " + std::to_string(q) +
                                " outside a " + std::to_string(n_qubits) + "-qubit register");
      }
    }
  }
}

nlohmann::json Circuit::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& g : gates_) arr.push_back(g.to_json());
  return arr;
}

Circuit Circuit::from_json(const nlohmann::json& j) {
  std::vector<Gate> gates;
  for (const auto& g : j) gates.push_back(Gate::from_json(g));
  return Circuit(std::move(gates));
}

}  // namespace chfs
