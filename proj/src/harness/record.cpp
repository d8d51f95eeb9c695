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

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "chfs/harness/harness.hpp"
#include "chfs/lemmas/lemmas.hpp"

namespace chfs {

namespace {

std::string csv_field(const nlohmann::json& v) {
  std::string s;
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_null()) {
    s = "";
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char ch : s) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + "\"";
  }
  return s;
}

std::string md_value(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_primitive()) return v.dump();
  return "`" + v.dump() + "`";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

nlohmann::json ExperimentRecord::to_json() const {
  return nlohmann::json{{"schema_version", schema_version},
                        {"tool_version", tool_version},
                        {"config", config.to_json()},
                        {"wall_clock_seconds", wall_clock_seconds},
                        {"trials", trials},
                        {"summary", summary},
                        {"violated", violated}};
}

ExperimentRecord ExperimentRecord::from_json(const nlohmann::json& j) {
  ExperimentRecord r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kSchemaVersion) {
    throw std::invalid_argument("record: unsupported schema_version " +
                                std::to_string(r.schema_version));
  }
  r.tool_version = j.at("tool_version").get<std::string>();
  r.config = RunConfig::from_json(j.at("config"));
  r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  r.trials = j.at("trials");
  r.summary = j.at("summary");
  r.violated = j.at("violated").get<bool>();
  return r;
}

std::string record_markdown(const ExperimentRecord& record) {
  std::ostringstream out;
  const auto& c = record.config;
  out << "# " << to_string(c.command) << " (seed " << c.seed << ")\n\n";
  out << "Tool: " << record.tool_version << "  \n";
  out << "Wall clock: " << std::fixed << std::setprecision(3) << record.wall_clock_seconds
      << " s\n\n";
  out.unsetf(std::ios::floatfield);
  out << "## Configuration\n\n| key | value |\n|---|---|\n";
  out << "| command | " << to_string(c.command) << " |\n";
  out << "| seed | " << c.seed << " |\n";
  out << "| workers | " << c.workers << " |\n";
  out << "| output_dir | " << c.output_dir << " |\n";
  for (const auto& [k, v] : c.params) out << "| " << k << " | " << v << " |\n";
  out << "\n## Summary\n\n| key | value |\n|---|---|\n";
  for (const auto& [k, v] : record.summary.items()) {
    out << "| " << k << " | " << md_value(v) << " |\n";
  }
  if (c.command == Command::Lemma || c.command == Command::Conjecture) {
    std::vector<VerificationReport> reports;
    for (const auto& t : record.trials) reports.push_back(VerificationReport::from_json(t));
    out << "\n## Reports\n\n" << reports_markdown(reports);
  }
  return out.str();
}

std::string record_csv(const ExperimentRecord& record) {
  std::vector<std::string> columns;
  for (const auto& t : record.trials) {
    for (const auto& [k, v] : t.items()) {
      if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
    }
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << columns[i];
  }
  out << "\n";
  for (const auto& t : record.trials) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out << (i ? "," : "");
      if (t.contains(columns[i])) out << csv_field(t.at(columns[i]));
    }
    out << "\n";
  }
  return out.str();
}

OutputPaths write_outputs(const ExperimentRecord& record) {
  namespace fs = std::filesystem;
  const fs::path dir = record.config.output_dir;
  fs::create_directories(dir);
  const std::string stem =
      std::string(to_string(record.config.command)) + "_seed" + std::to_string(record.config.seed);
  OutputPaths p{(dir / (stem + ".json")).string(), (dir / (stem + ".md")).string(),
                (dir / (stem + ".csv")).string()};
  write_file(p.json, record.to_json().dump(2) + "\n");
  write_file(p.markdown, record_markdown(record));
  write_file(p.csv, record_csv(record));
  return p;
}

ExperimentRecord load_record(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("record: cannot read '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("record: '" + path + "' is not valid JSON: " + e.what());
  }
  return ExperimentRecord::from_json(j);
}

ReplayResult replay(const ExperimentRecord& record) {
  ReplayResult r;
  r.version_mismatch = record.tool_version != tool_version();
  r.replayed = run(record.config);
  r.expected_summary = record.summary.dump();
  r.actual_summary = r.replayed.summary.dump();
  r.match = r.expected_summary == r.actual_summary;
  return r;
}

}  // namespace chfs
