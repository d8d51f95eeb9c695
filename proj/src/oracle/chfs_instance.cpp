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

#include "chfs/oracle/chfs_instance.hpp"

#include <cmath>
#include <stdexcept>

#include "chfs/core/haar.hpp"
#include "chfs/core/rng.hpp"

namespace chfs {

ChfsInstance::ChfsInstance(std::uint64_t master_seed, LengthFunction length_fn,
                           Limits limits)
    : seed_(master_seed), length_fn_(length_fn), limits_(limits) {}

int ChfsInstance::output_qubits(int input_length) const {
  return length_fn_(input_length);
}

std::uint64_t ChfsInstance::seed_for(const BitString& x) const {
  std::uint64_t h = mix64(seed_ ^ 0x43484653ULL);
  h = mix64(h ^ static_cast<std::uint64_t>(x.size()));
  std::uint64_t word = 0;
  int filled = 0;
  for (auto b : x.bits()) {
    word = (word << 1) | b;
    if (++filled == 64) {
      h = mix64(h ^ word);
      word = 0;
      filled = 0;
    }
  }
  if (filled > 0) h = mix64(h ^ word ^ (std::uint64_t{1} << filled));
  return h;
}

PureState ChfsInstance::oracle_state(const BitString& x) const {
  if (x.empty()) {
    throw std::invalid_argument("oracle_state: empty input string");
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(x);
    if (it != cache_.end()) return *it->second;
  }
  const int ell = output_qubits(x.size());
  check_qubit_cap(ell, limits_);
  Rng rng(seed_for(x), static_cast<std::uint64_t>(x.size()));
  auto state = std::make_shared<const PureState>(haar_state(ell, rng, limits_));
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = cache_.emplace(x, std::move(state));
  return *it->second;
}

void ChfsInstance::apply_swap(const BitString& x, Complex* data,
                              std::size_t stride) const {
  const PureState phi = oracle_state(x);
  const CVector& a = phi.amplitudes();
  // Reflection I - 2 w w^dagger with w = (|0> - |phi>|1>)/sqrt(2).
  Complex inner = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    inner += std::conj(a(i)) * data[(2 * static_cast<std::size_t>(i) + 1) * stride];
  }
  const Complex c = data[0] - inner;
  data[0] -= c;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    data[(2 * static_cast<std::size_t>(i) + 1) * stride] += a(i) * c;
  }
}

UnitaryMatrix ChfsInstance::swap_unitary(const BitString& x) const {
  const int ell = output_qubits(x.size());
  check_qubit_cap(ell + 1, limits_);
  const auto d = static_cast<Eigen::Index>(dim_of(ell + 1));
  CMatrix s = CMatrix::Identity(d, d);
  for (Eigen::Index c = 0; c < d; ++c) apply_swap(x, s.col(c).data(), 1);
  return UnitaryMatrix(std::move(s));
}

std::size_t ChfsInstance::cached_states() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.size();
}

nlohmann::json ChfsInstance::descriptor() const {
  return nlohmann::json{{"master_seed", seed_},
                        {"length_fn", length_fn_.to_string()}};
}

std::unique_ptr<ChfsInstance> ChfsInstance::from_descriptor(
    const nlohmann::json& j, Limits limits) {
  return std::make_unique<ChfsInstance>(
      j.at("master_seed").get<std::uint64_t>(),
      LengthFunction::parse(j.at("length_fn").get<std::string>()), limits);
}

}  // namespace chfs
