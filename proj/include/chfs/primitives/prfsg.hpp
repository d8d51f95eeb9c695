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
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "chfs/core/rng.hpp"
#include "chfs/core/types.hpp"
#include "chfs/oracle/chfs_instance.hpp"
#include "chfs/primitives/game.hpp"

namespace chfs {

/// Longest k || x the PRFSG accepts.
inline constexpr int kMaxPrfsgInputLength = 24;

struct PrfsgParams {
  int key_bits = 8;
  int input_bits = 4;
  std::shared_ptr<const ChfsInstance> oracle;

  /// Output qubit count l(key_bits + input_bits).
  int output_qubits() const;
  void validate() const;
};

/// |phi_{k || x}>: one oracle query on K X with K discarded.
PureState prfsg_gen(const PrfsgParams& params, const BitString& k, const BitString& x);

/// Classical-access challenge: each query returns one copy of the state for
/// the chosen input. The adversary also holds the oracle.
class PrfsgChallenge {
 public:
  using Source = std::function<PureState(const BitString&)>;

  PrfsgChallenge(std::shared_ptr<const ChfsInstance> oracle, int key_bits, int input_bits,
                 int budget, Source source);

  /// Throws std::logic_error once the budget is exhausted.
  PureState query(const BitString& x);
  const ChfsInstance& oracle() const { return *oracle_; }
  int key_bits() const { return key_bits_; }
  int input_bits() const { return input_bits_; }
  int budget() const { return budget_; }
  int used() const { return used_; }

 private:
  std::shared_ptr<const ChfsInstance> oracle_;
  int key_bits_;
  int input_bits_;
  int budget_;
  int used_ = 0;
  Source source_;
};

/// Real arm: a fresh hidden key. Ideal arm: a lazily sampled Haar function
/// with the same output length, independent of the oracle.
PrfsgChallenge prfsg_real_challenge(const PrfsgParams& params, int budget, Rng& rng);
PrfsgChallenge prfsg_ideal_challenge(const PrfsgParams& params, int budget, Rng& rng);

enum class PrfsgAdversaryKind {
  ZeroQuery,       // outputs a fair coin
  KeyGuessSingle,  // one copy of x = 0, one swap test against a guessed key
  KeyGuessMulti,   // four distinct guessed keys, four copies each on inputs 0..3
  CollisionProbe,  // swap tests between outputs on distinct inputs
  Informed,        // knows the key; sanity inversion, not part of the suite
};

std::string to_string(PrfsgAdversaryKind kind);
/// Queries the adversary spends for a given budget q.
int prfsg_adversary_queries(PrfsgAdversaryKind kind, int q, int key_bits, int input_bits);
/// Runs one adversary against a challenge. Informed reads the key from key.
bool prfsg_run_adversary(PrfsgAdversaryKind kind, PrfsgChallenge& ch, int q, Rng& rng,
                         const BitString& key = {});

struct PrfsgSuiteConfig {
  int key_bits = 8;
  int input_bits = 4;
  LengthFunction length_fn = LengthFunction::floor_log();
  int queries = 16;
  std::uint64_t trials = 400;
  int workers = 0;
};

struct PrfsgSuiteResult {
  std::map<std::string, GameResult> games;
  std::string best_adversary;
  double max_advantage = 0.0;

  nlohmann::json to_json() const;
};

/// Plays every suite adversary with a fresh oracle per trial.
PrfsgSuiteResult prfsg_hybrid_adversary_suite(const PrfsgSuiteConfig& cfg, const Rng& rng);

/// Same game for the informed adversary.
GameResult prfsg_informed_game(const PrfsgSuiteConfig& cfg, const Rng& rng);

struct ExactGame {
  double rate_real = 0.0;
  double rate_ideal = 0.0;
  double advantage = 0.0;
};

/// Exact acceptance rates for a fixed oracle: the real arm enumerates keys and
/// the adversary's guesses; the ideal arm averages over Haar states through
/// the Beta(1, N - 1) law of |<psi|phi>|^2. Needs key_bits <= 10.
ExactGame prfsg_exact_game(const PrfsgParams& params, PrfsgAdversaryKind kind, int q);

/// Monte Carlo of the same game against the fixed oracle in params.
GameResult prfsg_fixed_oracle_game(const PrfsgParams& params, PrfsgAdversaryKind kind, int q,
                                   std::uint64_t trials, const Rng& rng, int workers = 0);

}  // namespace chfs
