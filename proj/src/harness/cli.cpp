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
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "chfs/core/errors.hpp"
#include "chfs/harness/harness.hpp"

namespace chfs {

namespace {

struct CommandKeys {
  const char* name;
  std::vector<std::string> keys;
};

const std::vector<CommandKeys>& command_keys() {
  static const std::vector<CommandKeys> table = {
      {"lemma",
       {"id", "n", "rank", "m", "samples", "eps", "d_s", "d_sbar", "shots", "circuit", "data",
        "t", "family", "na", "nb", "p", "constant", "case", "delta", "n2", "repeat"}},
      {"conjecture", {"n", "eps", "delta", "samples", "case", "n2", "repeat"}},
      {"attack-pru",
       {"n", "kappa", "candidate_seed", "adaptive", "depolarize", "query_lengths", "length",
        "lambda", "tau", "r", "battery_reps", "battery_fail", "pass_fraction", "trials"}},
      {"attack-prsg",
       {"d", "t", "kappa", "candidate_seed", "flip", "length", "lambda", "r", "battery_reps",
        "battery_fail", "learning_shots", "learning", "trials"}},
      {"prfsg-game",
       {"kappa", "m", "q", "length", "trials", "exact", "exact_kappa", "exact_oracle_seed",
        "exact_trials"}},
      {"report", {"dir"}},
  };
  return table;
}

const std::vector<std::string>& keys_for(Command c) {
  for (const auto& entry : command_keys()) {
    if (entry.name == std::string(to_string(c))) return entry.keys;
  }
  throw std::logic_error("no key table for command");
}

void check_param_keys(const RunConfig& c) {
  const auto& allowed = keys_for(c.command);
  for (const auto& [k, v] : c.params) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw UsageError(k + ": not a parameter of '" + to_string(c.command) + "'");
    }
  }
}

struct SubcommandState {
  Command command;
  CLI::App* app = nullptr;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
};

void summary_line(std::ostream& out, const ExperimentRecord& rec) {
  out << to_string(rec.config.command) << " seed=" << rec.config.seed
      << " violated=" << (rec.violated ? "yes" : "no") << " summary=" << rec.summary.dump()
      << "\n";
}

int execute(SubcommandState& s, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::optional<std::uint64_t> file_seed;
  if (!s.config_path.empty()) {
    std::vector<std::string> seen;
    config = load_config_file(s.config_path, &seen);
    if (std::find(seen.begin(), seen.end(), "command") != seen.end() &&
        config.command != s.command) {
      throw UsageError(std::string("command: config file is for '") + to_string(config.command) +
                       "', not '" + to_string(s.command) + "'");
    }
    if (std::find(seen.begin(), seen.end(), "seed") != seen.end()) file_seed = config.seed;
  }
  config.command = s.command;
  config.seed = resolve_seed(s.seed, file_seed, std::getenv("CHFS_LAB_SEED"));
  if (s.out_dir) config.output_dir = *s.out_dir;
  if (s.workers) config.workers = *s.workers;
  if (config.workers < 0) throw UsageError("workers: must be non-negative");
  for (const auto& [k, v] : s.flags) config.params[k] = v;
  for (const auto& kv : s.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("set: expected key=value, got '" + kv + "'");
    }
    config.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  // Round-trip through the text form so flag values obey the file rules.
  config = RunConfig::from_text(config.to_text());
  check_param_keys(config);

  const ExperimentRecord rec = run(config);
  const OutputPaths paths = write_outputs(rec);
  summary_line(out, rec);
  out << "wrote " << paths.json << "\n";
  if (rec.violated) {
    err << "a verification verdict of Violated is present\n";
    return kExitViolated;
  }
  return kExitOk;
}

int execute_replay(const std::string& path, std::ostream& out, std::ostream& err) {
  const ExperimentRecord rec = load_record(path);
  const ReplayResult r = replay(rec);
  if (r.version_mismatch) {
    err << "warning: record written by '" << rec.tool_version << "', replaying with '"
        << tool_version() << "'\n";
  }
  if (!r.match) {
    err << "replay mismatch\n  expected: " << r.expected_summary
        << "\n  actual:   " << r.actual_summary << "\n";
    return kExitViolated;
  }
  out << "replay match: " << path << "\n";
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Desk-scale experiments on CHFS oracles, pseudorandom primitives and attacks",
               "chfs_lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  std::vector<std::unique_ptr<SubcommandState>> states;
  for (const auto& entry : command_keys()) {
    auto st = std::make_unique<SubcommandState>();
    st->command = command_from_string(entry.name);
    CLI::App* sub = app.add_subcommand(entry.name, std::string("run ") + entry.name);
    st->app = sub;
    sub->add_option("--config", st->config_path, "key = value configuration file");
    sub->add_option("--seed", st->seed, "master seed");
    sub->add_option("--out", st->out_dir, "output directory");
    sub->add_option("--workers", st->workers, "worker threads, 0 for all cores");
    sub->add_option("--set", st->sets, "extra parameter as key=value")->take_all();
    for (const auto& key : entry.keys) {
      auto* target = &st->flags;
      sub->add_option_function<std::string>(
          "--" + key, [target, key](const std::string& v) { (*target)[key] = v; },
          "parameter " + key);
    }
    if (entry.name == std::string("lemma")) {
      auto* target = &st->flags;
      sub->add_option_function<std::string>(
          "--D", [target](const std::string& v) { (*target)["rank"] = v; },
          "projector or mixture rank (alias of --rank)");
    }
    states.push_back(std::move(st));
  }
  std::string replay_path;
  CLI::App* replay_cmd = app.add_subcommand("replay", "re-run a record and compare summaries");
  replay_cmd->add_option("record", replay_path, "path to an ExperimentRecord JSON file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (replay_cmd->parsed()) return execute_replay(replay_path, out, err);
    for (auto& st : states) {
      if (st->app->parsed()) return execute(*st, out, err);
    }
    err << "no command given\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionCapExceeded& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace chfs
