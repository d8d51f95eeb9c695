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

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <memory>

#include "chfs/attacks/attacks.hpp"
#include "chfs/core/haar.hpp"
#include "chfs/core/linalg.hpp"
#include "chfs/core/stats.hpp"
#include "chfs/core/parallel.hpp"
#include "chfs/harness/harness.hpp"
#include "chfs/lemmas/lemmas.hpp"
#include "chfs/primitives/game.hpp"
#include "chfs/primitives/prfsg.hpp"

#ifndef CHFS_LAB_VERSION
#define CHFS_LAB_VERSION "unknown"
#endif
#ifndef CHFS_LAB_GIT
#define CHFS_LAB_GIT ""
#endif

namespace chfs {

namespace {

constexpr std::uint64_t kLemmaStream = 0x4c454d4d;
constexpr std::uint64_t kConjectureStream = 0x434f4e4a;
constexpr std::uint64_t kAlg1Stream = 0x414c4731;
constexpr std::uint64_t kAlg2Stream = 0x414c4732;
constexpr std::uint64_t kPrfsgStream = 0x50524653;
constexpr std::uint64_t kExactStream = 0x45584354;

using Cell = std::map<std::string, double>;

struct Outcome {
  nlohmann::json trials = nlohmann::json::array();
  nlohmann::json summary = nlohmann::json::object();
  bool violated = false;
};

int as_int(const Cell& cell, const std::string& key) {
  const double v = cell.at(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw UsageError(key + ": expected an integer, got " + std::to_string(v));
  }
  return static_cast<int>(v);
}

std::uint64_t as_count(const Cell& cell, const std::string& key) {
  const int v = as_int(cell, key);
  if (v < 0) throw UsageError(key + ": must be non-negative");
  return static_cast<std::uint64_t>(v);
}

/// Cartesian product of the comma-separated axes, first axis slowest.
std::vector<Cell> grid(const RunConfig& c,
                       const std::vector<std::pair<std::string, std::vector<double>>>& axes) {
  std::vector<Cell> cells{Cell{}};
  for (const auto& [key, fallback] : axes) {
    const auto values = c.get_doubles(key, fallback);
    std::vector<Cell> next;
    for (const auto& cell : cells) {
      for (double v : values) {
        Cell extended = cell;
        extended[key] = v;
        next.push_back(std::move(extended));
      }
    }
    cells = std::move(next);
  }
  const auto repeat = c.get_int("repeat", 1);
  if (repeat < 1) throw UsageError("repeat: must be at least 1");
  std::vector<Cell> out;
  for (const auto& cell : cells) {
    for (std::int64_t r = 0; r < repeat; ++r) out.push_back(cell);
  }
  return out;
}

nlohmann::json cell_json(const Cell& cell) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : cell) j[k] = v;
  return j;
}

Outcome summarize_reports(const std::string& label, const std::vector<Cell>& cells,
                          const std::vector<VerificationReport>& reports) {
  Outcome o;
  std::uint64_t consistent = 0, violated = 0, inconclusive = 0;
  double max_abs_z = 0.0;
  nlohmann::json estimates = nlohmann::json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    nlohmann::json t = r.to_json();
    t["cell"] = cell_json(cells[i]);
    o.trials.push_back(std::move(t));
    estimates.push_back(r.estimate);
    switch (r.verdict) {
      case Verdict::Consistent: ++consistent; break;
      case Verdict::Violated: ++violated; break;
      case Verdict::Inconclusive: ++inconclusive; break;
    }
    const double z = std::abs(r.z_score());
    if (std::isfinite(z)) max_abs_z = std::max(max_abs_z, z);
  }
  o.summary = {{"lemma", label},
               {"cells", reports.size()},
               {"consistent", consistent},
               {"violated", violated},
               {"inconclusive", inconclusive},
               {"estimates", estimates},
               {"max_abs_z", max_abs_z}};
  o.violated = violated > 0;
  return o;
}

using CellRunner = std::function<VerificationReport(const Cell&, Rng&)>;

struct LemmaSpec {
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  CellRunner runner;
};

LemmaSpec lemma_spec(const std::string& id, const RunConfig& c) {
  if (id == "haar-projection") {
    return {{{"n", {2}}, {"rank", {1}}, {"m", {-1}}, {"samples", {10000}}},
            [](const Cell& k, Rng& rng) {
              return verify_haar_projection(as_int(k, "n"), as_int(k, "rank"),
                                            as_count(k, "samples"), rng, as_int(k, "m"));
            }};
  }
  if (id == "concentration") {
    return {{{"n", {1}}, {"eps", {0.5}}, {"samples", {100000}}},
            [](const Cell& k, Rng& rng) {
              return verify_concentration_overlap(as_int(k, "n"), k.at("eps"),
                                                  as_count(k, "samples"), rng);
            }};
  }
  if (id == "lubkin") {
    // n is the total Hilbert-space dimension, split as evenly as possible
    // into two power-of-two factors unless d_s and d_sbar are given.
    return {{{"n", {4}}, {"d_s", {0}}, {"d_sbar", {0}}, {"samples", {20000}}},
            [](const Cell& k, Rng& rng) {
              int ds = as_int(k, "d_s");
              int dsb = as_int(k, "d_sbar");
              if (ds == 0 || dsb == 0) {
                const int n = as_int(k, "n");
                if (n < 2 || (n & (n - 1)) != 0) {
                  throw UsageError("n: lubkin expects a power-of-two total dimension");
                }
                const int qubits = std::countr_zero(static_cast<unsigned>(n));
                ds = 1 << (qubits / 2);
                dsb = n / ds;
              }
              return verify_lubkin(ds, dsb, as_count(k, "samples"), rng);
            }};
  }
  if (id == "swap-test") {
    return {{{"n", {2}}, {"rank", {1}}, {"shots", {10000}}},
            [](const Cell& k, Rng& rng) {
              return verify_swap_test(as_int(k, "n"), as_int(k, "rank"),
                                      as_count(k, "shots"), rng);
            }};
  }
  if (id == "product-test") {
    return {{{"m", {4}}, {"samples", {20000}}}, [](const Cell& k, Rng& rng) {
              return verify_product_test_haar(as_int(k, "m"), as_count(k, "samples"), rng);
            }};
  }
  if (id == "decomposition") {
    const std::string circuit = c.get_string("circuit", "engineered");
    if (circuit != "engineered" && circuit != "fair") {
      throw UsageError("circuit: expected 'engineered' or 'fair'");
    }
    return {{{"data", {3}}, {"t", {3}}, {"eps", {0.02}}},
            [circuit](const Cell& k, Rng& rng) {
              const int data = as_int(k, "data");
              if (circuit == "fair") {
                const auto mc = fair_coin_circuit(data, rng);
                return verify_measurement_decomposition(mc, PureState::zero(data));
              }
              const int t = as_int(k, "t");
              const auto mc = engineered_decomposition_circuit(data, t, k.at("eps"), rng);
              const PureState input = tensor_product(haar_state(data, rng), PureState::zero(t));
              return verify_measurement_decomposition(mc, input);
            }};
  }
  if (id == "gentle") {
    return {{{"n", {2}}, {"rank", {2}}, {"eps", {0.04}}}, [](const Cell& k, Rng& rng) {
              const auto inst = random_gentle_instance(as_int(k, "n"), as_int(k, "rank"),
                                                       k.at("eps"), rng);
              return verify_gentle_measurement(inst.rho, inst.p0);
            }};
  }
  if (id == "purity-structure") {
    const std::string family = c.get_string("family", "noise");
    if (family != "noise" && family != "entangled") {
      throw UsageError("family: expected 'noise' or 'entangled'");
    }
    return {{{"na", {1}}, {"nb", {2}}, {"p", {0.01}}, {"constant", {kDefaultStructureConstant}}},
            [family](const Cell& k, Rng& rng) {
              const int na = as_int(k, "na");
              const int nb = as_int(k, "nb");
              const double p = k.at("p");
              if (p < 0.0 || p > 1.0) throw UsageError("p: must be in [0, 1]");
              const SubsystemSpec split({1 << na, 1 << nb});
              if (family == "entangled") {
                // sqrt(1 - p)|0..0> + sqrt(p)|1..1>.
                CVector v = CVector::Zero(static_cast<Eigen::Index>(dim_of(na + nb)));
                v(0) = std::sqrt(1.0 - p);
                v(v.size() - 1) = std::sqrt(p);
                return verify_purity_structure(PureState(v).density(), split, k.at("constant"));
              }
              const auto prod = tensor_product(haar_state(na, rng).density(),
                                               random_density(nb, 1 << nb, rng));
              const auto noise = random_density(na + nb, 1 << (na + nb), rng);
              const CMatrix m = (1.0 - p) * prod.matrix() + p * noise.matrix();
              return verify_purity_structure(DensityMatrix::trusted(m), split, k.at("constant"));
            }};
  }
  if (id == "gentle-subsystem") {
    return {{{"na", {1}}, {"nb", {1}}}, [](const Cell& k, Rng& rng) {
              const auto inst =
                  random_gentle_subsystem_instance(as_int(k, "na"), as_int(k, "nb"), rng);
              return verify_gentle_subsystem(inst.rho, inst.spec, inst.p0);
            }};
  }
  if (id == "lipschitz") {
    return {{{"n", {4}}, {"m", {1}}, {"t", {0.3}}, {"samples", {10000}}},
            [](const Cell& k, Rng& rng) {
              return verify_lipschitz_tail(as_int(k, "n"), as_int(k, "m"), k.at("t"),
                                           as_count(k, "samples"), rng);
            }};
  }
  if (id == "cap-geometry") {
    const CapCase cc = cap_case_from_string(c.get_string("case", "CapCase1"));
    return {{{"n", {1}}, {"eps", {0.3}}, {"delta", {0.05}}, {"samples", {100000}}, {"n2", {-1}}},
            [cc](const Cell& k, Rng& rng) {
              return conjecture_cap_geometry(as_int(k, "n"), k.at("eps"), k.at("delta"), cc,
                                             as_count(k, "samples"), rng, as_int(k, "n2"));
            }};
  }
  throw UsageError("id: unknown lemma '" + id + "'");
}

Outcome run_lemma_cells(const RunConfig& c, const std::string& label, const LemmaSpec& spec,
                        std::uint64_t stream) {
  const auto cells = grid(c, spec.axes);
  std::vector<LemmaCell> runners;
  runners.reserve(cells.size());
  for (const auto& cell : cells) {
    runners.push_back([cell, &spec](Rng& rng) { return spec.runner(cell, rng); });
  }
  const auto reports = run_lemma_grid(runners, c.seed, stream, c.workers);
  return summarize_reports(label, cells, reports);
}

Outcome run_lemma(const RunConfig& c) {
  if (!c.has("id")) throw UsageError("id: lemma requires --id");
  const std::string id = c.get_string("id", "");
  return run_lemma_cells(c, id, lemma_spec(id, c), kLemmaStream);
}

Outcome run_conjecture(const RunConfig& c) {
  RunConfig defaults = c;
  for (const auto& [k, v] : std::map<std::string, std::string>{
           {"n", "1,2"}, {"eps", "0.1,0.3"}, {"delta", "0.02,0.05"}}) {
    if (!defaults.has(k)) defaults.params[k] = v;
  }
  auto o = run_lemma_cells(defaults, "cap-geometry", lemma_spec("cap-geometry", defaults),
                           kConjectureStream);
  const CapCase cc = cap_case_from_string(c.get_string("case", "CapCase1"));
  nlohmann::json fits = nlohmann::json::array();
  for (auto n : defaults.get_ints("n", {})) {
    try {
      const auto fit = fit_cap_exponents(static_cast<int>(n), cc,
                                         defaults.get_doubles("eps", {}),
                                         defaults.get_doubles("delta", {}));
      fits.push_back({{"n", n}, {"a", fit.a}, {"b", fit.b}, {"c", fit.c},
                      {"points", fit.points}});
    } catch (const std::invalid_argument&) {
      fits.push_back({{"n", n}, {"points", 0}});
    }
  }
  o.summary["case"] = to_string(cc);
  o.summary["exponent_fits"] = fits;
  return o;
}

LengthFunction length_param(const RunConfig& c, const std::string& fallback) {
  try {
    return LengthFunction::parse(c.get_string("length", fallback));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("length: ") + e.what());
  }
}

PurityBatteryConfig battery_param(const RunConfig& c, PurityBatteryConfig fallback) {
  PurityBatteryConfig b;
  b.repetitions = static_cast<int>(c.get_int("battery_reps", fallback.repetitions));
  b.fail_threshold = static_cast<int>(c.get_int("battery_fail", fallback.fail_threshold));
  try {
    b.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("battery_reps/battery_fail: ") + e.what());
  }
  return b;
}

std::uint64_t trials_param(const RunConfig& c, std::int64_t fallback) {
  const auto t = c.get_int("trials", fallback);
  if (t < 1) throw UsageError("trials: must be at least 1");
  return static_cast<std::uint64_t>(t);
}

int key_bits_param(const RunConfig& c, int fallback) {
  const auto k = c.get_int("kappa", fallback);
  if (k < 1 || k > 16) throw UsageError("kappa: must be in [1, 16]");
  return static_cast<int>(k);
}

/// Runs `trials` real-arm and ideal-arm distinguisher trials; trial_fn returns
/// the per-trial JSON, which must carry a boolean "output".
Outcome run_arms(const RunConfig& c, std::uint64_t trials, std::uint64_t stream,
                 const std::function<nlohmann::json(bool real, Rng&)>& trial_fn) {
  const Rng root(c.seed, stream);
  const auto rows = parallel_map(2 * trials, c.workers, [&](std::size_t i) {
    const bool real = i < trials;
    const std::uint64_t index = real ? i : i - trials;
    Rng rng = root.child(real ? 1 : 2).child(index);
    nlohmann::json t = trial_fn(real, rng);
    t["arm"] = real ? "real" : "ideal";
    t["index"] = index;
    return t;
  });
  Outcome o;
  std::uint64_t acc_real = 0, acc_ideal = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const bool out = rows[i].at("output").get<bool>();
    if (i < trials) {
      acc_real += out;
    } else {
      acc_ideal += out;
    }
    o.trials.push_back(rows[i]);
  }
  o.summary = game_result(acc_real, acc_ideal, trials).to_json();
  return o;
}

Outcome run_attack_pru(const RunConfig& c) {
  LayeredPruSpec spec;
  spec.n_qubits = static_cast<int>(c.get_int("n", 5));
  spec.key_bits = key_bits_param(c, 3);
  spec.seed = static_cast<std::uint64_t>(c.get_int("candidate_seed", 1));
  spec.adaptive_last = c.get_bool("adaptive", false);
  spec.depolarize = c.get_double("depolarize", 0.0);
  spec.query_lengths.clear();
  for (auto q : c.get_ints("query_lengths", {3, 2})) spec.query_lengths.push_back(static_cast<int>(q));
  const LengthFunction ell = length_param(c, "identity");
  const PruCandidate cand = make_layered_pru(spec, ell);

  Alg1Config cfg;
  cfg.lambda = static_cast<int>(c.get_int("lambda", cfg.lambda));
  cfg.tau = static_cast<int>(c.get_int("tau", cfg.tau));
  cfg.r = static_cast<int>(c.get_int("r", cfg.r));
  cfg.battery = battery_param(c, cfg.battery);
  cfg.pass_fraction = c.get_double("pass_fraction", cfg.pass_fraction);
  cfg.validate();
  const auto trials = trials_param(c, 50);
  const std::uint64_t keys = std::uint64_t{1} << spec.key_bits;

  auto o = run_arms(c, trials, kAlg1Stream, [&](bool real, Rng& rng) {
    const ChfsInstance oracle(rng.next_u64(), ell);
    nlohmann::json t;
    Alg1Result res;
    if (real) {
      const auto key = BitString::from_uint(rng.uniform_int(keys), spec.key_bits);
      t["key"] = key.to_uint();
      res = alg1_distinguish(cfg, pru_channel(cand, oracle, key), oracle, cand, rng);
    } else {
      const auto u = haar_unitary(spec.n_qubits, rng);
      res = alg1_distinguish(cfg, unitary_channel(u), oracle, cand, rng);
    }
    const auto or_json = res.oracle_or.to_json();
    t["output"] = res.output;
    t["flag"] = res.flag;
    t["best_score"] = res.oracle_or.best_score;
    t["regime"] = or_json.at("regime");
    t["promise_violated"] = res.oracle_or.promise_violated;
    t["gap_regime"] = res.gap_regime;
    t["tomography_queries"] = res.tomography_queries;
    return t;
  });
  std::uint64_t flagged = 0, gap = 0, promise = 0;
  for (const auto& t : o.trials) {
    flagged += t.at("flag").get<bool>();
    gap += t.at("gap_regime").get<bool>();
    promise += t.at("promise_violated").get<bool>();
  }
  o.summary["flagged"] = flagged;
  o.summary["gap_regime_trials"] = gap;
  o.summary["or_promise_violations"] = promise;
  o.summary["config"] = cfg.to_json();
  return o;
}

Outcome run_attack_prsg(const RunConfig& c) {
  if (c.get_int("d", 6) != 6) throw UsageError("d: only the d = 6 product-form candidate is available");
  if (c.get_int("t", 2) != 2) throw UsageError("t: only the t = 2 product-form candidate is available");
  ProductFormSpec spec;
  spec.key_bits = key_bits_param(c, 3);
  spec.seed = static_cast<std::uint64_t>(c.get_int("candidate_seed", 1));
  spec.flip_probability = c.get_double("flip", 0.0);
  if (spec.flip_probability < 0.0 || spec.flip_probability > 1.0) {
    throw UsageError("flip: must be in [0, 1]");
  }
  const PrsgCandidate cand = make_product_form_prsg(spec);
  const LengthFunction ell = length_param(c, "two_floor_log");

  Alg2Config cfg;
  cfg.lambda = static_cast<int>(c.get_int("lambda", cfg.lambda));
  cfg.r = static_cast<int>(c.get_int("r", cfg.r));
  cfg.battery = battery_param(c, cfg.battery);
  cfg.learning_shots = static_cast<int>(c.get_int("learning_shots", cfg.learning_shots));
  const std::string learning = c.get_string("learning", "direct");
  if (learning == "direct") {
    cfg.learning = QueryLearning::DirectInspection;
  } else if (learning == "branches") {
    cfg.learning = QueryLearning::ArgmaxFromBranches;
  } else {
    throw UsageError("learning: expected 'direct' or 'branches'");
  }
  cfg.validate();
  const auto trials = trials_param(c, 50);
  const std::uint64_t keys = std::uint64_t{1} << spec.key_bits;

  auto o = run_arms(c, trials, kAlg2Stream, [&](bool real, Rng& rng) {
    const ChfsInstance oracle(rng.next_u64(), ell);
    nlohmann::json t;
    Alg2Result res;
    if (real) {
      const auto key = BitString::from_uint(rng.uniform_int(keys), spec.key_bits);
      t["key"] = key.to_uint();
      const auto challenge = prsg_gen(cand, oracle, key).output;
      res = alg2_distinguish(cfg, challenge, oracle, cand, rng);
    } else {
      const auto challenge = haar_state(cand.output_qubits(), rng).density();
      res = alg2_distinguish(cfg, challenge, oracle, cand, rng);
    }
    t["output"] = res.output;
    t["aborted"] = res.aborted;
    t["best_score"] = res.oracle_or.best_score;
    t["regime"] = res.oracle_or.to_json().at("regime");
    t["challenge_purity"] = res.challenge_purity;
    return t;
  });
  std::uint64_t aborted = 0;
  for (const auto& t : o.trials) aborted += t.at("aborted").get<bool>();
  o.summary["aborted"] = aborted;
  o.summary["config"] = cfg.to_json();
  return o;
}

Outcome run_prfsg_game(const RunConfig& c) {
  PrfsgSuiteConfig cfg;
  cfg.key_bits = key_bits_param(c, cfg.key_bits);
  cfg.input_bits = static_cast<int>(c.get_int("m", cfg.input_bits));
  cfg.queries = static_cast<int>(c.get_int("q", cfg.queries));
  cfg.length_fn = length_param(c, "floor_log");
  cfg.trials = trials_param(c, 400);
  cfg.workers = c.workers;
  if (cfg.input_bits < 1 || cfg.input_bits > kMaxPrfsgInputLength) {
    throw UsageError("m: input length out of range");
  }
  if (cfg.queries < 0) throw UsageError("q: must be non-negative");
  Outcome o;
  const auto suite = prfsg_hybrid_adversary_suite(cfg, Rng(c.seed, kPrfsgStream));
  for (const auto& [name, g] : suite.games) {
    nlohmann::json t = g.to_json();
    t["adversary"] = name;
    t["arm"] = "suite";
    o.trials.push_back(std::move(t));
  }
  o.summary = suite.to_json();
  if (c.get_bool("exact", false)) {
    PrfsgParams params;
    params.key_bits = static_cast<int>(c.get_int("exact_kappa", 3));
    if (params.key_bits < 1 || params.key_bits > 6) {
      throw UsageError("exact_kappa: exact enumeration supports 1 to 6 key bits");
    }
    params.input_bits = cfg.input_bits;
    params.oracle = std::make_shared<const ChfsInstance>(
        static_cast<std::uint64_t>(c.get_int("exact_oracle_seed", 314)), cfg.length_fn);
    params.validate();
    const auto exact_trials = static_cast<std::uint64_t>(c.get_int("exact_trials", 4000));
    bool agree = true;
    nlohmann::json rows = nlohmann::json::array();
    const Rng exact_rng(c.seed, kExactStream);
    for (auto kind : {PrfsgAdversaryKind::ZeroQuery, PrfsgAdversaryKind::KeyGuessSingle,
                      PrfsgAdversaryKind::KeyGuessMulti, PrfsgAdversaryKind::CollisionProbe,
                      PrfsgAdversaryKind::Informed}) {
      const auto ex = prfsg_exact_game(params, kind, cfg.queries);
      const auto mc = prfsg_fixed_oracle_game(params, kind, cfg.queries, exact_trials,
                                              exact_rng.child(static_cast<std::uint64_t>(kind)),
                                              c.workers);
      const double se_real = bernoulli_se(ex.rate_real, exact_trials);
      const double se_ideal = bernoulli_se(ex.rate_ideal, exact_trials);
      const bool ok = std::abs(mc.rate_real - ex.rate_real) <= 3.0 * se_real + 1e-12 &&
                      std::abs(mc.rate_ideal - ex.rate_ideal) <= 3.0 * se_ideal + 1e-12;
      agree = agree && ok;
      nlohmann::json t = {{"adversary", to_string(kind)},
                          {"arm", "exact"},
                          {"exact_rate_real", ex.rate_real},
                          {"exact_rate_ideal", ex.rate_ideal},
                          {"exact_advantage", ex.advantage},
                          {"mc_rate_real", mc.rate_real},
                          {"mc_rate_ideal", mc.rate_ideal},
                          {"mc_advantage", mc.advantage},
                          {"within_3se", ok}};
      rows.push_back(t);
      o.trials.push_back(std::move(t));
    }
    o.summary["exact"] = {{"key_bits", params.key_bits},
                          {"trials", exact_trials},
                          {"agrees_within_3se", agree},
                          {"games", rows}};
  }
  return o;
}

Outcome run_report(const RunConfig& c) {
  namespace fs = std::filesystem;
  const fs::path dir = c.get_string("dir", c.output_dir);
  if (!fs::is_directory(dir)) throw UsageError("dir: '" + dir.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  Outcome o;
  std::map<std::string, std::uint64_t> by_command;
  std::uint64_t records = 0, violated = 0, unreadable = 0;
  for (const auto& f : files) {
    ExperimentRecord rec;
    try {
      rec = load_record(f.string());
    } catch (const std::exception&) {
      ++unreadable;
      continue;
    }
    if (rec.config.command == Command::Report) continue;
    ++records;
    ++by_command[to_string(rec.config.command)];
    violated += rec.violated;
    o.trials.push_back({{"file", f.filename().string()},
                        {"command", to_string(rec.config.command)},
                        {"seed", rec.config.seed},
                        {"violated", rec.violated},
                        {"summary", rec.summary}});
  }
  o.summary = {{"records", records},
               {"violated", violated},
               {"unreadable", unreadable},
               {"by_command", by_command}};
  return o;
}

}  // namespace

std::string tool_version() {
  std::string v = std::string("chfs_lab ") + CHFS_LAB_VERSION;
  const std::string git = CHFS_LAB_GIT;
  if (!git.empty()) v += " (" + git + ")";
  return v;
}

ExperimentRecord run(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  switch (config.command) {
    case Command::Lemma: o = run_lemma(config); break;
    case Command::AttackPru: o = run_attack_pru(config); break;
    case Command::AttackPrsg: o = run_attack_prsg(config); break;
    case Command::Conjecture: o = run_conjecture(config); break;
    case Command::PrfsgGame: o = run_prfsg_game(config); break;
    case Command::Report: o = run_report(config); break;
  }
  ExperimentRecord rec;
  rec.tool_version = tool_version();
  rec.config = config;
  rec.trials = std::move(o.trials);
  rec.summary = std::move(o.summary);
  rec.violated = o.violated;
  rec.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace chfs
