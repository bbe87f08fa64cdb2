// Copyright 2026 The pdlearn Authors
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

// Experiment config files: a single flat JSON object. Omitted keys keep their
// defaults, unknown keys are rejected. Units are SI (W, Hz, m).

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdl/harness.hpp"

namespace pdl::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::string key, std::optional<int> line = {})
      : std::runtime_error(message), key_(std::move(key)), line_(line) {}

  // Empty for syntax errors.
  const std::string& key() const { return key_; }
  // Set for syntax errors.
  std::optional<int> line() const { return line_; }

 private:
  std::string key_;
  std::optional<int> line_;
};

// Every accepted key, in documentation order.
const std::vector<std::string>& config_keys();

ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig parse_config(const std::filesystem::path& path);

// The effective config as a JSON object (parse_config_text round-trips it).
std::string config_to_json(const ExperimentConfig& config);

Algorithm parse_algorithm(std::string_view name);
Problem parse_problem(std::string_view name);

}  // namespace pdl::cli
