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

#include "pdl/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "pdl/cli/config.hpp"

namespace pdl::cli {

namespace {

bool write_file(const std::filesystem::path& path, const std::string& contents,
                std::ostream& log) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (out) out << contents;
  if (!out) {
    log << "error: cannot write " << path.string() << '\n';
    return false;
  }
  return true;
}

std::string render(const ExperimentResult& result, OutputFormat format) {
  std::ostringstream out;
  write_records(out, result.records, format);
  return out.str();
}

}  // namespace

ExperimentConfig resolve_config(const RunOptions& options) {
  ExperimentConfig config = options.config_path ? parse_config(*options.config_path)
                                                : parse_config_text("{}");
  if (options.seed) config.seed = *options.seed;
  if (options.algorithm) {
    config.algorithm = *options.algorithm;
    try {
      config.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--algo: ") + e.what(), "algorithm");
    }
  }
  return config;
}

int run_command(const RunOptions& options, std::ostream& stdout_stream, std::ostream& log) {
  const ExperimentConfig config = resolve_config(options);
  const ExperimentResult result = run_experiment(config);
  const std::string text = render(result, options.format);
  if (options.out == "-") {
    stdout_stream << text;
  } else if (!write_file(options.out, text, log)) {
    return kExitIo;
  }
  log << summary_json(config, result) << '\n';
  if (result.failed) {
    log << "error: " << result.failure_message << '\n';
    return kExitDiverged;
  }
  return kExitOk;
}

int sweep_command(const SweepOptions& options, std::ostream& stdout_stream, std::ostream& log) {
  if (options.seeds.empty()) throw ConfigError("--seeds: need at least one seed", "seed");
  const ExperimentConfig base = resolve_config(options.base);
  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec) {
    log << "error: cannot create " << options.out_dir.string() << ": " << ec.message() << '\n';
    return kExitIo;
  }

  const std::size_t n = options.seeds.size();
  std::vector<ExperimentResult> results(n);
  std::vector<ExperimentConfig> configs(n, base);
  for (std::size_t i = 0; i < n; ++i) configs[i].seed = options.seeds[i];

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) results[i] = run_experiment(configs[i]);
  };
  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(n)));
  std::vector<std::jthread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  const char* ext = options.base.format == OutputFormat::Csv ? ".csv" : ".json";
  int code = kExitOk;
  for (std::size_t i = 0; i < n; ++i) {
    const auto path = options.out_dir / (to_string(configs[i].algorithm) + "_seed" +
                                         std::to_string(configs[i].seed) + ext);
    if (!write_file(path, render(results[i], options.base.format), log)) code = kExitIo;
    stdout_stream << summary_json(configs[i], results[i]) << '\n';
    if (results[i].failed && code == kExitOk) code = kExitDiverged;
  }
  return code;
}

}  // namespace pdl::cli
