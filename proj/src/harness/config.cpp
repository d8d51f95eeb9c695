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
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "chfs/harness/harness.hpp"

namespace chfs {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(const std::string& k) {
  return !k.empty() && std::all_of(k.begin(), k.end(), [](unsigned char c) {
    return std::islower(c) || std::isdigit(c) || c == '_' || c == '-' || c == '.';
  });
}

void check_entry(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw UsageError("config: invalid key '" + key + "'");
  if (value.find('\n') != std::string::npos || value.find('#') != std::string::npos) {
    throw UsageError("config: value of '" + key + "' may not contain newlines or '#'");
  }
  if (trim(value) != value) {
    throw UsageError("config: value of '" + key + "' has surrounding whitespace");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw UsageError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

std::int64_t parse_i64(const std::string& key, const std::string& text) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw UsageError(key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw UsageError(key + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

void apply_entry(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "command") {
    c.command = command_from_string(value);
  } else if (key == "seed") {
    c.seed = parse_u64("seed", value);
  } else if (key == "output_dir") {
    c.output_dir = value;
  } else if (key == "workers") {
    c.workers = static_cast<int>(parse_i64("workers", value));
    if (c.workers < 0) throw UsageError("workers: must be non-negative");
  } else {
    c.params[key] = value;
  }
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::Lemma: return "lemma";
    case Command::AttackPru: return "attack-pru";
    case Command::AttackPrsg: return "attack-prsg";
    case Command::Conjecture: return "conjecture";
    case Command::PrfsgGame: return "prfsg-game";
    case Command::Report: return "report";
  }
  return "?";
}

Command command_from_string(const std::string& s) {
  for (Command c : {Command::Lemma, Command::AttackPru, Command::AttackPrsg,
                    Command::Conjecture, Command::PrfsgGame, Command::Report}) {
    if (s == to_string(c)) return c;
  }
  throw UsageError("command: unknown command '" + s + "'");
}

std::string RunConfig::to_text() const {
  std::ostringstream out;
  out << "command = " << to_string(command) << "\n";
  out << "seed = " << seed << "\n";
  out << "output_dir = " << output_dir << "\n";
  out << "workers = " << workers << "\n";
  for (const auto& [k, v] : params) {
    check_entry(k, v);
    out << k << " = " << v << "\n";
  }
  return out.str();
}

RunConfig RunConfig::from_text(const std::string& text,
                               std::vector<std::string>* keys_seen) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    check_entry(key, value);
    apply_entry(c, key, value);
    if (keys_seen != nullptr) keys_seen->push_back(key);
  }
  return c;
}

nlohmann::json RunConfig::to_json() const {
  return nlohmann::json{{"command", to_string(command)},
                        {"seed", seed},
                        {"output_dir", output_dir},
                        {"workers", workers},
                        {"params", params}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  c.command = command_from_string(j.at("command").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  c.output_dir = j.at("output_dir").get<std::string>();
  c.workers = j.at("workers").get<int>();
  c.params = j.at("params").get<std::map<std::string, std::string>>();
  return c;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : parse_double(key, it->second);
}

std::int64_t RunConfig::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : parse_i64(key, it->second);
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  const std::string& v = it->second;
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw UsageError(key + ": expected a boolean, got '" + v + "'");
}

std::vector<double> RunConfig::get_doubles(const std::string& key,
                                           std::vector<double> fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(it->second)) out.push_back(parse_double(key, item));
  if (out.empty()) throw UsageError(key + ": empty list");
  return out;
}

std::vector<std::int64_t> RunConfig::get_ints(const std::string& key,
                                              std::vector<std::int64_t> fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::vector<std::int64_t> out;
  for (const auto& item : split_list(it->second)) out.push_back(parse_i64(key, item));
  if (out.empty()) throw UsageError(key + ": empty list");
  return out;
}

RunConfig load_config_file(const std::string& path,
                           std::vector<std::string>* keys_seen) {
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return RunConfig::from_text(buf.str(), keys_seen);
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag,
                           std::optional<std::uint64_t> file, const char* env) {
  if (flag) return *flag;
  if (file) return *file;
  if (env != nullptr && *env != '\0') return parse_u64("CHFS_LAB_SEED", trim(env));
  return kDefaultSeed;
}

}  // namespace chfs
