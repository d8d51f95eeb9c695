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

#include "chfs/core/types.hpp"

namespace chfs {

/// A unitary acting on listed qubits. Haar gates are regenerated from their
/// seed, so only the seed is serialized.
class Gate {
 public:
  enum class Kind { X, H, Z, Haar, Matrix };

  static Gate x(int qubit);
  static Gate h(int qubit);
  static Gate z(int qubit);
  static Gate haar(std::vector<int> targets, std::uint64_t seed);
  static Gate matrix(std::vector<int> targets, const CMatrix& m);

  Kind kind() const { return kind_; }
  const std::vector<int>& targets() const { return targets_; }
  std::uint64_t seed() const { return seed_; }
  const CMatrix& unitary() const { return m_; }

  Gate adjoint() const;

  nlohmann::json to_json() const;
  static Gate from_json(const nlohmann::json& j);

 private:
  Gate(Kind k, std::vector<int> targets, std::uint64_t seed, CMatrix m);
  Kind kind_;
  std::vector<int> targets_;
  std::uint64_t seed_ = 0;
  CMatrix m_;
};

/// Gate sequence applied left to right.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::vector<Gate> gates) : gates_(std::move(gates)) {}

  void add(Gate g) { gates_.push_back(std::move(g)); }
  const std::vector<Gate>& gates() const { return gates_; }
  bool empty() const { return gates_.empty(); }

  void apply(CVector& state, int n_qubits) const;
  void apply(CMatrix& rho, int n_qubits) const;
  /// Full 2^n matrix.
  CMatrix matrix(int n_qubits) const;
  Circuit adjoint() const;

  /// Throws std::out_of_range if a gate touches a qubit outside [0, n).
  void check_fits(int n_qubits) const;

  nlohmann::json to_json() const;
  static Circuit from_json(const nlohmann::json& j);

 private:
  std::vector<Gate> gates_;
};

}  // namespace chfs
