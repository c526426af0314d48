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

#include "output.hpp"

#include <chrono>
#include <ctime>

#include <fmt/format.h>

namespace hybridfit::cli {

namespace {

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string num(double v) { return fmt::format("{}", v); }

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    throw std::logic_error("csv row width does not match header");
  }
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

Run::Run(std::string command, RunConfig cfg, std::filesystem::path out)
    : command_(std::move(command)), cfg_(std::move(cfg)), out_(std::move(out)) {
  std::filesystem::create_directories(out_);
}

void Run::add_input(const std::filesystem::path& path) {
  inputs_.push_back(path.string());
}

void Run::write_json(const std::string& name, const Json& value) {
  write_json_file(out_ / name, value);
  outputs_.push_back(name);
}

void Run::write_csv(const std::string& name, const CsvTable& table) {
  write_text_file(out_ / name, table.str());
  outputs_.push_back(name);
}

void Run::finish(const Json& summary) {
  Json manifest = {{"tool", "hybridfit"},
                   {"version", "0.1.0"},
                   {"command", command_},
                   {"config", cfg_.to_json()},
                   {"inputs", inputs_},
                   {"outputs", outputs_},
                   {"summary", summary},
                   {"timestamp", utc_timestamp()}};
  write_json_file(out_ / "manifest.json", manifest);
}

}  // namespace hybridfit::cli
