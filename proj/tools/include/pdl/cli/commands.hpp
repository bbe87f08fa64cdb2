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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pdl/cli/output.hpp"
#include "pdl/harness.hpp"

namespace pdl::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDiverged = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

struct RunOptions {
  std::optional<std::filesystem::path> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<Algorithm> algorithm;
  std::string out = "-";  // "-" is stdout
  OutputFormat format = OutputFormat::Csv;
};

// Config file (or defaults) with the command-line overrides applied.
ExperimentConfig resolve_config(const RunOptions& options);

// Runs one experiment and writes its records; the summary goes to `log`.
int run_command(const RunOptions& options, std::ostream& stdout_stream, std::ostream& log);

struct SweepOptions {
  RunOptions base;
  std::vector<std::uint64_t> seeds;
  int threads = 1;
  std::filesystem::path out_dir = ".";
};

// One output file per seed, <algorithm>_seed<N>.<csv|json>, and one summary
// JSON line per seed on `stdout_stream`, in seed order.
int sweep_command(const SweepOptions& options, std::ostream& stdout_stream, std::ostream& log);

}  // namespace pdl::cli
