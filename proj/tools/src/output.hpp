// Copyright 2026 The hybridfit Authors
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

/// \file
/// \brief Output directory handling: JSON and CSV artifacts plus the run
/// manifest.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hybridfit/json_io.hpp"
#include "run_config.hpp"

namespace hybridfit::cli {

/// Shortest round-trip decimal form of a double.
std::string num(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Collects the artifacts of one command. Every file except the manifest is
/// a pure function of the inputs and the resolved config.
class Run {
 public:
  Run(std::string command, RunConfig cfg, std::filesystem::path out);

  const RunConfig& cfg() const { return cfg_; }
  void add_input(const std::filesystem::path& path);
  void write_json(const std::string& name, const Json& value);
  void write_csv(const std::string& name, const CsvTable& table);
  /// Writes manifest.json: command, resolved config, inputs, outputs and a
  /// UTC timestamp.
  void finish(const Json& summary = Json::object());

 private:
  std::string command_;
  RunConfig cfg_;
  std::filesystem::path out_;
  Json inputs_ = Json::array();
  Json outputs_ = Json::array();
};

}  // namespace hybridfit::cli
