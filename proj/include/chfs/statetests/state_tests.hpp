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
#include <optional>
#include <vector>

#include "chfs/core/rng.hpp"
#include "chfs/core/types.hpp"

namespace chfs {

struct TestOutcome {
  bool passed = false;
  std::optional<double> exact_prob;
};

struct PurityBatteryConfig {
  int repetitions = 64;
  int fail_threshold = 8;

  /// (16 T lambda, 8 lambda).
  static PurityBatteryConfig from_security(int t, int lambda);
  /// Throws std::invalid_argument unless 0 <= fail_threshold <= repetitions
  /// and repetitions >= 1.
  void validate() const;
};

struct BatteryResult {
  int fail_count = 0;
  bool flagged_impure = false;
};

/// (1 + Tr(rho sigma)) / 2.
double swap_test_prob(const DensityMatrix& rho, const DensityMatrix& sigma);
TestOutcome swap_test_sample(const DensityMatrix& rho,
                             const DensityMatrix& sigma, Rng& rng);
/// (1 + |<a|b>|^2) / 2.
double swap_test_prob(const PureState& a, const PureState& b);
TestOutcome swap_test_sample(const PureState& a, const PureState& b, Rng& rng);

/// Runs cfg.repetitions swap tests of rho against itself and flags the state
/// once at least cfg.fail_threshold of them fail.
BatteryResult purity_battery(const DensityMatrix& rho,
                             const PurityBatteryConfig& cfg, Rng& rng);
/// Exact probability that purity_battery flags a state of the given purity.
double battery_flag_probability(double purity, const PurityBatteryConfig& cfg);

inline constexpr int kMaxProductTestParts = 16;

/// Tr(rho_S^2) for every subset S of the parts, indexed by the bitmask with
/// part 0 as the most significant bit.
std::vector<double> subset_purities(const DensityMatrix& rho,
                                    const SubsystemSpec& spec);
std::vector<double> subset_purities(const PureState& psi,
                                    const SubsystemSpec& spec);

/// Mean of subset_purities: the probability that all pairwise swap tests
/// between two copies pass.
double product_test_prob(const DensityMatrix& rho, const SubsystemSpec& spec);
double product_test_prob(const PureState& psi, const SubsystemSpec& spec);

/// Joint distribution of the m swap-test outcomes on two copies of rho.
/// Entry b has bit i (part 0 most significant) set when test i failed, so
/// entry 0 is the all-pass probability.
std::vector<double> product_test_distribution(const DensityMatrix& rho,
                                              const SubsystemSpec& spec);

struct ProductTestSample {
  TestOutcome outcome;
  std::uint64_t failed_mask = 0;
};

/// Draws one joint outcome of the m swap tests.
ProductTestSample product_test_sample(const DensityMatrix& rho,
                                      const SubsystemSpec& spec, Rng& rng);

/// (d_S + d_Sbar) / (d_S d_Sbar + 1).
double lubkin_expectation(double d_s, double d_sbar);

/// Haar average of product_test_prob over the given split.
double lubkin_product_test_mean(const SubsystemSpec& spec);

}  // namespace chfs
