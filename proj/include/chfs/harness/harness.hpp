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
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace chfs {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::uint64_t kDefaultSeed = 1;

/// Invalid command-line or configuration input; the message names the field.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Command { Lemma, AttackPru, AttackPrsg, Conjecture, PrfsgGame, Report };

const char* to_string(Command c);
Command command_from_string(const std::string& s);

struct RunConfig {
  Command command = Command::Lemma;
  std::uint64_t seed = kDefaultSeed;
  std::string output_dir = "out";
  int workers = 0;  // 0 selects the number of logical cores
  std::map<std::string, std::string> params;

  /// Flat "key = value" lines; '#' starts a comment. `keys_seen`, when
  /// given, receives every key present in the text.
  std::string to_text() const;
  static RunConfig from_text(const std::string& text,
                             std::vector<std::string>* keys_seen = nullptr);
  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);

  bool has(const std::string& key) const { return params.count(key) != 0; }
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated list; a single value yields one element.
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
  std::vector<std::int64_t> get_ints(const std::string& key,
                                     std::vector<std::int64_t> fallback) const;

  bool operator==(const RunConfig&) const = default;
};

/// Parses the `key = value` file layout; command, seed, output_dir and workers
/// are lifted out of the parameter map.
RunConfig load_config_file(const std::string& path,
                           std::vector<std::string>* keys_seen = nullptr);

/// Flag > config file > CHFS_LAB_SEED > kDefaultSeed. `env` is the raw
/// environment value (nullptr when unset).
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag,
                           std::optional<std::uint64_t> file, const char* env);

struct ExperimentRecord {
  int schema_version = kSchemaVersion;
  std::string tool_version;
  RunConfig config;
  double wall_clock_seconds = 0.0;
  nlohmann::json trials = nlohmann::json::array();
  nlohmann::json summary = nlohmann::json::object();
  /// A verification verdict of Violated appears in the record.
  bool violated = false;

  nlohmann::json to_json() const;
  static ExperimentRecord from_json(const nlohmann::json& j);
};

std::string tool_version();

/// Dispatches to the module named by the command. Throws UsageError on bad
/// parameters.
ExperimentRecord run(const RunConfig& config);

std::string record_markdown(const ExperimentRecord& record);
std::string record_csv(const ExperimentRecord& record);

struct OutputPaths {
  std::string json;
  std::string markdown;
  std::string csv;
};
/// Writes <command>_seed<seed>.{json,md,csv} into config.output_dir.
OutputPaths write_outputs(const ExperimentRecord& record);

ExperimentRecord load_record(const std::string& path);

struct ReplayResult {
  bool match = false;
  bool version_mismatch = false;
  ExperimentRecord replayed;
  std::string expected_summary;
  std::string actual_summary;
};
ReplayResult replay(const ExperimentRecord& record);

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitViolated = 1, kExitUsage = 2, kExitInternal = 3 };

/// The chfs_lab command line. Reads CHFS_LAB_SEED from the environment.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chfs
