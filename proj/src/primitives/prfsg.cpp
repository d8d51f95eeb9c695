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

#include "chfs/primitives/prfsg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chfs/core/errors.hpp"
#include "chfs/core/haar.hpp"
#include "chfs/core/stats.hpp"
#include "chfs/statetests/state_tests.hpp"

namespace chfs {

namespace {

constexpr int kCopiesPerGuess = 4;
constexpr int kMaxGuesses = 4;

int guess_count(int q, int key_bits, int input_bits) {
  const auto cap = static_cast<int>(std::min<std::uint64_t>(dim_of(std::min(key_bits, 20)),
                                                            dim_of(std::min(input_bits, 20))));
  return std::min({q / kCopiesPerGuess, kMaxGuesses, cap});
}

int pair_count(int q, int input_bits) {
  return static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(q),
                                                  dim_of(std::min(input_bits, 20)))) / 2;
}

int collision_threshold(int pairs) { return (3 * pairs + 3) / 4; }

/// E[((1 + s) / 2)^c] for s ~ Beta(1, N - 1).
double beta_pass_moment(double n_dim, int c) {
  double total = 0.0;
  double moment = 1.0;  // E[s^j]
  double binom = 1.0;   // C(c, j)
  for (int j = 0; j <= c; ++j) {
    total += binom * moment;
    moment *= static_cast<double>(j + 1) / (n_dim + j);
    binom = binom * (c - j) / (j + 1);
  }
  return total / std::pow(2.0, c);
}

std::vector<std::uint64_t> distinct_keys(int count, std::uint64_t n_keys, Rng& rng) {
  std::vector<std::uint64_t> out;
  while (static_cast<int>(out.size()) < count) {
    const auto k = rng.uniform_int(n_keys);
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  return out;
}

std::vector<PrfsgAdversaryKind> suite_kinds() {
  return {PrfsgAdversaryKind::ZeroQuery, PrfsgAdversaryKind::KeyGuessSingle,
          PrfsgAdversaryKind::KeyGuessMulti, PrfsgAdversaryKind::CollisionProbe};
}

}  // namespace

int PrfsgParams::output_qubits() const {
  if (!oracle) throw std::invalid_argument("PrfsgParams: missing oracle");
  return oracle->length_fn()(key_bits + input_bits);
}

void PrfsgParams::validate() const {
  if (key_bits < 1 || input_bits < 1) throw std::invalid_argument("PrfsgParams: empty key or input");
  if (key_bits + input_bits > kMaxPrfsgInputLength) {
    throw DimensionCapExceeded("PrfsgParams: key plus input length " +
                               std::to_string(key_bits + input_bits) + " exceeds " +
                               std::to_string(kMaxPrfsgInputLength));
  }
  check_qubit_cap(output_qubits(), oracle->limits());
}

PureState prfsg_gen(const PrfsgParams& params, const BitString& k, const BitString& x) {
  params.validate();
  if (k.size() != params.key_bits || x.size() != params.input_bits) {
    throw DimensionMismatch("prfsg_gen: expected |k| = " + std::to_string(params.key_bits) +
                            " and |x| = " + std::to_string(params.input_bits));
  }
  return params.oracle->oracle_state(k.concat(x));
}

PrfsgChallenge::PrfsgChallenge(std::shared_ptr<const ChfsInstance> oracle, int key_bits,
                               int input_bits, int budget, Source source)
    : oracle_(std::move(oracle)), key_bits_(key_bits), input_bits_(input_bits),
      budget_(budget), source_(std::move(source)) {}

PureState PrfsgChallenge::query(const BitString& x) {
  if (used_ >= budget_) throw std::logic_error("PrfsgChallenge: query budget exhausted");
  if (x.size() != input_bits_) throw DimensionMismatch("PrfsgChallenge: input length mismatch");
  ++used_;
  return source_(x);
}

PrfsgChallenge prfsg_real_challenge(const PrfsgParams& params, int budget, Rng& rng) {
  params.validate();
  const auto key = BitString::from_uint(rng.uniform_int(dim_of(params.key_bits)), params.key_bits);
  auto oracle = params.oracle;
  return PrfsgChallenge(params.oracle, params.key_bits, params.input_bits, budget,
                        [oracle, key](const BitString& x) { return oracle->oracle_state(key.concat(x)); });
}

PrfsgChallenge prfsg_ideal_challenge(const PrfsgParams& params, int budget, Rng& rng) {
  params.validate();
  const int n = params.output_qubits();
  const Rng base(rng.next_u64(), 0x4944454cULL);
  return PrfsgChallenge(params.oracle, params.key_bits, params.input_bits, budget,
                        [base, n](const BitString& x) {
                          Rng r = base.child(x.to_uint());
                          return haar_state(n, r);
                        });
}

std::string to_string(PrfsgAdversaryKind kind) {
  switch (kind) {
    case PrfsgAdversaryKind::ZeroQuery: return "zero_query";
    case PrfsgAdversaryKind::KeyGuessSingle: return "key_guess_single";
    case PrfsgAdversaryKind::KeyGuessMulti: return "key_guess_multi";
    case PrfsgAdversaryKind::CollisionProbe: return "collision_probe";
    case PrfsgAdversaryKind::Informed: return "informed";
  }
  return "?";
}

int prfsg_adversary_queries(PrfsgAdversaryKind kind, int q, int key_bits, int input_bits) {
  switch (kind) {
    case PrfsgAdversaryKind::ZeroQuery: return 0;
    case PrfsgAdversaryKind::KeyGuessSingle: return std::min(q, 1);
    case PrfsgAdversaryKind::KeyGuessMulti:
      return guess_count(q, key_bits, input_bits) * kCopiesPerGuess;
    case PrfsgAdversaryKind::CollisionProbe: return 2 * pair_count(q, input_bits);
    case PrfsgAdversaryKind::Informed: return q;
  }
  return 0;
}

bool prfsg_run_adversary(PrfsgAdversaryKind kind, PrfsgChallenge& ch, int q, Rng& rng,
                         const BitString& key) {
  const int kb = ch.key_bits();
  const int mb = ch.input_bits();
  const auto& oracle = ch.oracle();
  auto guess_state = [&](std::uint64_t k, std::uint64_t x) {
    return oracle.oracle_state(BitString::from_uint(k, kb).concat(BitString::from_uint(x, mb)));
  };
  switch (kind) {
    case PrfsgAdversaryKind::ZeroQuery:
      return rng.bernoulli(0.5);
    case PrfsgAdversaryKind::KeyGuessSingle: {
      if (q < 1) return rng.bernoulli(0.5);
      const auto guess = rng.uniform_int(dim_of(kb));
      const auto copy = ch.query(BitString::from_uint(0, mb));
      return swap_test_sample(copy, guess_state(guess, 0), rng).passed;
    }
    case PrfsgAdversaryKind::KeyGuessMulti: {
      const int g = guess_count(q, kb, mb);
      if (g < 1) return rng.bernoulli(0.5);
      const auto guesses = distinct_keys(g, dim_of(kb), rng);
      bool accept = false;
      for (int j = 0; j < g; ++j) {
        const auto target = guess_state(guesses[static_cast<std::size_t>(j)], static_cast<std::uint64_t>(j));
        bool ok = true;
        for (int c = 0; c < kCopiesPerGuess; ++c) {
          const auto copy = ch.query(BitString::from_uint(static_cast<std::uint64_t>(j), mb));
          ok = swap_test_sample(copy, target, rng).passed && ok;
        }
        accept = accept || ok;
      }
      return accept;
    }
    case PrfsgAdversaryKind::CollisionProbe: {
      const int pairs = pair_count(q, mb);
      if (pairs < 1) return rng.bernoulli(0.5);
      int passes = 0;
      for (int j = 0; j < pairs; ++j) {
        const auto a = ch.query(BitString::from_uint(static_cast<std::uint64_t>(2 * j), mb));
        const auto b = ch.query(BitString::from_uint(static_cast<std::uint64_t>(2 * j + 1), mb));
        if (swap_test_sample(a, b, rng).passed) ++passes;
      }
      return passes >= collision_threshold(pairs);
    }
    case PrfsgAdversaryKind::Informed: {
      if (key.size() != kb) throw DimensionMismatch("informed adversary: key length mismatch");
      const auto target = guess_state(key.to_uint(), 0);
      bool ok = true;
      for (int c = 0; c < q; ++c) {
        ok = swap_test_sample(ch.query(BitString::from_uint(0, mb)), target, rng).passed && ok;
      }
      return ok;
    }
  }
  return false;
}

nlohmann::json PrfsgSuiteResult::to_json() const {
  nlohmann::json games_json = nlohmann::json::object();
  for (const auto& [name, g] : games) games_json[name] = g.to_json();
  return {{"games", games_json}, {"best_adversary", best_adversary}, {"max_advantage", max_advantage}};
}

namespace {

/// Challenge carrying its own fresh oracle and the key handed to the informed
/// adversary (independent of the challenge in the ideal arm).
struct FreshChallenge {
  PrfsgChallenge challenge;
  BitString key;
};

FreshChallenge fresh_challenge(const PrfsgSuiteConfig& cfg, bool real, Rng& rng) {
  PrfsgParams p{cfg.key_bits, cfg.input_bits,
                std::make_shared<const ChfsInstance>(rng.next_u64(), cfg.length_fn)};
  Rng key_rng = rng.child(7);
  const auto key = BitString::from_uint(key_rng.uniform_int(dim_of(cfg.key_bits)), cfg.key_bits);
  if (!real) return {prfsg_ideal_challenge(p, cfg.queries, rng), key};
  auto oracle = p.oracle;
  return {PrfsgChallenge(p.oracle, p.key_bits, p.input_bits, cfg.queries,
                         [oracle, key](const BitString& x) { return oracle->oracle_state(key.concat(x)); }),
          key};
}

GameResult play_fresh(const PrfsgSuiteConfig& cfg, PrfsgAdversaryKind kind, const Rng& rng) {
  return distinguishing_game(
      [&](FreshChallenge& fc, Rng& coins) {
        return prfsg_run_adversary(kind, fc.challenge, cfg.queries, coins, fc.key);
      },
      [&](Rng& r) { return fresh_challenge(cfg, true, r); },
      [&](Rng& r) { return fresh_challenge(cfg, false, r); }, cfg.trials, rng, cfg.workers);
}

}  // namespace

PrfsgSuiteResult prfsg_hybrid_adversary_suite(const PrfsgSuiteConfig& cfg, const Rng& rng) {
  if (cfg.key_bits > 10) throw std::invalid_argument("prfsg suite: key_bits above 10");
  PrfsgSuiteResult out;
  for (auto kind : suite_kinds()) {
    const auto g = play_fresh(cfg, kind, rng.child(static_cast<std::uint64_t>(kind)));
    out.games[to_string(kind)] = g;
    if (out.best_adversary.empty() || g.advantage > out.max_advantage) {
      out.max_advantage = g.advantage;
      out.best_adversary = to_string(kind);
    }
  }
  return out;
}

GameResult prfsg_informed_game(const PrfsgSuiteConfig& cfg, const Rng& rng) {
  return play_fresh(cfg, PrfsgAdversaryKind::Informed,
                    rng.child(static_cast<std::uint64_t>(PrfsgAdversaryKind::Informed)));
}

ExactGame prfsg_exact_game(const PrfsgParams& params, PrfsgAdversaryKind kind, int q) {
  params.validate();
  if (params.key_bits > 10) throw std::invalid_argument("prfsg_exact_game: key_bits above 10");
  const int kb = params.key_bits;
  const int mb = params.input_bits;
  const std::uint64_t n_keys = dim_of(kb);
  const double n_dim = static_cast<double>(dim_of(params.output_qubits()));
  const auto& oracle = *params.oracle;
  auto state = [&](std::uint64_t k, std::uint64_t x) {
    return oracle.oracle_state(BitString::from_uint(k, kb).concat(BitString::from_uint(x, mb)));
  };
  auto pass = [&](std::uint64_t k1, std::uint64_t k2, std::uint64_t x) {
    return swap_test_prob(state(k1, x), state(k2, x));
  };
  const double ideal_single = (1.0 + 1.0 / n_dim) / 2.0;

  ExactGame e;
  switch (kind) {
    case PrfsgAdversaryKind::ZeroQuery:
      e.rate_real = e.rate_ideal = 0.5;
      break;
    case PrfsgAdversaryKind::KeyGuessSingle: {
      if (q < 1) {
        e.rate_real = e.rate_ideal = 0.5;
        break;
      }
      double total = 0.0;
      for (std::uint64_t k = 0; k < n_keys; ++k)
        for (std::uint64_t g = 0; g < n_keys; ++g) total += pass(k, g, 0);
      e.rate_real = total / static_cast<double>(n_keys * n_keys);
      e.rate_ideal = ideal_single;
      break;
    }
    case PrfsgAdversaryKind::KeyGuessMulti: {
      const int g = guess_count(q, kb, mb);
      if (g < 1) {
        e.rate_real = e.rate_ideal = 0.5;
        break;
      }
      // Ordered tuples of distinct guesses, enumerated by recursion.
      double total = 0.0;
      std::uint64_t tuples = 0;
      std::vector<std::uint64_t> tuple;
      std::function<void(std::uint64_t)> rec = [&](std::uint64_t key) {
        if (static_cast<int>(tuple.size()) == g) {
          double reject = 1.0;
          for (int j = 0; j < g; ++j) {
            const double p = pass(key, tuple[static_cast<std::size_t>(j)], static_cast<std::uint64_t>(j));
            reject *= 1.0 - std::pow(p, kCopiesPerGuess);
          }
          total += 1.0 - reject;
          ++tuples;
          return;
        }
        for (std::uint64_t c = 0; c < n_keys; ++c) {
          if (std::find(tuple.begin(), tuple.end(), c) != tuple.end()) continue;
          tuple.push_back(c);
          rec(key);
          tuple.pop_back();
        }
      };
      for (std::uint64_t k = 0; k < n_keys; ++k) rec(k);
      e.rate_real = total / static_cast<double>(tuples);
      e.rate_ideal = 1.0 - std::pow(1.0 - beta_pass_moment(n_dim, kCopiesPerGuess), g);
      break;
    }
    case PrfsgAdversaryKind::CollisionProbe: {
      const int pairs = pair_count(q, mb);
      if (pairs < 1) {
        e.rate_real = e.rate_ideal = 0.5;
        break;
      }
      const int thr = collision_threshold(pairs);
      double total = 0.0;
      for (std::uint64_t k = 0; k < n_keys; ++k) {
        std::vector<double> p;
        for (int j = 0; j < pairs; ++j) {
          p.push_back(swap_test_prob(state(k, static_cast<std::uint64_t>(2 * j)),
                                     state(k, static_cast<std::uint64_t>(2 * j + 1))));
        }
        total += poisson_binomial_tail_ge(p, static_cast<std::uint64_t>(thr));
      }
      e.rate_real = total / static_cast<double>(n_keys);
      e.rate_ideal = binomial_tail_ge(static_cast<std::uint64_t>(pairs), ideal_single,
                                      static_cast<std::uint64_t>(thr));
      break;
    }
    case PrfsgAdversaryKind::Informed:
      e.rate_real = 1.0;
      e.rate_ideal = beta_pass_moment(n_dim, q);
      break;
  }
  e.advantage = std::abs(e.rate_real - e.rate_ideal);
  return e;
}

GameResult prfsg_fixed_oracle_game(const PrfsgParams& params, PrfsgAdversaryKind kind, int q,
                                   std::uint64_t trials, const Rng& rng, int workers) {
  params.validate();
  struct Fixed {
    PrfsgChallenge challenge;
    BitString key;
  };
  return distinguishing_game(
      [&](Fixed& f, Rng& coins) { return prfsg_run_adversary(kind, f.challenge, q, coins, f.key); },
      [&](Rng& r) {
        const auto key = BitString::from_uint(r.uniform_int(dim_of(params.key_bits)), params.key_bits);
        auto oracle = params.oracle;
        return Fixed{PrfsgChallenge(params.oracle, params.key_bits, params.input_bits, q,
                                    [oracle, key](const BitString& x) {
                                      return oracle->oracle_state(key.concat(x));
                                    }),
                     key};
      },
      [&](Rng& r) {
        const auto key = BitString::from_uint(r.uniform_int(dim_of(params.key_bits)), params.key_bits);
        return Fixed{prfsg_ideal_challenge(params, q, r), key};
      },
      trials, rng, workers);
}

}  // namespace chfs
