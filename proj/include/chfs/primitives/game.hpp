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

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <json.hpp>

#include "chfs/core/parallel.hpp"
#include "chfs/core/rng.hpp"
#include "chfs/core/stats.hpp"

namespace chfs {

struct GameResult {
  double advantage = 0.0;     // |rate_real - rate_ideal|
  double advantage_se = 0.0;  // binomial standard error of the difference
  std::uint64_t trials = 0;   // per arm
  double rate_real = 0.0;
  double rate_ideal = 0.0;

  nlohmann::json to_json() const {
    return {{"advantage", advantage}, {"advantage_se", advantage_se}, {"trials", trials},
            {"rate_real", rate_real}, {"rate_ideal", rate_ideal}};
  }
};

/// Builds a GameResult from per-arm acceptance counts.
inline GameResult game_result(std::uint64_t accepted_real, std::uint64_t accepted_ideal,
                              std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("game_result: no trials");
  GameResult g;
  g.trials = trials;
  g.rate_real = static_cast<double>(accepted_real) / static_cast<double>(trials);
  g.rate_ideal = static_cast<double>(accepted_ideal) / static_cast<double>(trials);
  g.advantage = std::abs(g.rate_real - g.rate_ideal);
  g.advantage_se = std::hypot(bernoulli_se(g.rate_real, trials), bernoulli_se(g.rate_ideal, trials));
  return g;
}

/// Plays trials rounds per arm. Trial i of each arm draws its challenge and
/// the adversary's coins from child streams of rng, so the result does not
/// depend on the worker count.
///
///   real_arm(Rng&) -> Challenge, ideal_arm(Rng&) -> Challenge,
///   adversary(Challenge&, Rng&) -> bool
template <class Adversary, class RealArm, class IdealArm>
GameResult distinguishing_game(Adversary&& adversary, RealArm&& real_arm, IdealArm&& ideal_arm,
                               std::uint64_t trials, const Rng& rng, int workers = 0) {
  auto play = [&](std::uint64_t arm, auto& sampler) {
    const auto wins = parallel_map(trials, workers, [&](std::size_t i) {
      Rng trial = rng.child(arm).child(i);
      Rng challenge_rng = trial.child(0);
      Rng coins = trial.child(1);
      auto challenge = sampler(challenge_rng);
      return adversary(challenge, coins) ? 1 : 0;
    });
    std::uint64_t total = 0;
    for (int w : wins) total += static_cast<std::uint64_t>(w);
    return total;
  };
  const std::uint64_t real = play(1, real_arm);
  const std::uint64_t ideal = play(2, ideal_arm);
  return game_result(real, ideal, trials);
}

}  // namespace chfs
