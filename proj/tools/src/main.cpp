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

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "pdl/cli/commands.hpp"
#include "pdl/cli/config.hpp"
#include "pdl/cli/selftest.hpp"

namespace {

using namespace pdl;
using namespace pdl::cli;

const std::map<std::string, Algorithm> kAlgorithms = {
    {"model-based", Algorithm::ModelBased},
    {"model-free-det", Algorithm::ModelFreeDet},
    {"model-free-sto", Algorithm::ModelFreeStochastic},
    {"supervised", Algorithm::Supervised},
    {"oracle", Algorithm::Oracle}};

const std::map<std::string, OutputFormat> kFormats = {{"csv", OutputFormat::Csv},
                                                      {"json", OutputFormat::Json}};

void add_run_flags(CLI::App& cmd, RunOptions& opts, bool with_algo) {
  cmd.add_option("--config", opts.config_path, "JSON config file (defaults when omitted)")
      ->check(CLI::ExistingFile);
  cmd.add_option("--seed", opts.seed, "Override the config seed");
  cmd.add_option("--format", opts.format, "Record format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case).description(""))
      ->type_name("csv|json");
  if (with_algo) {
    cmd.add_option("--algo", opts.algorithm, "Override the config algorithm")
        ->transform(CLI::CheckedTransformer(kAlgorithms, CLI::ignore_case).description(""))
        ->type_name("model-based|model-free-det|model-free-sto|supervised|oracle");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Primal-dual learning for constrained functional optimization"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Train one learner and write its convergence records");
  add_run_flags(*run, run_opts, true);
  run->add_option("--out", run_opts.out, "Output file, - for stdout");

  RunOptions oracle_opts;
  auto* oracle = app.add_subcommand("oracle", "Record the oracle's curve for a config");
  add_run_flags(*oracle, oracle_opts, false);
  oracle->add_option("--out", oracle_opts.out, "Output file, - for stdout");

  SelftestOptions self_opts;
  auto* selftest = app.add_subcommand("selftest", "Run gradient, estimator and oracle checks");
  selftest->add_flag("--inject-softmax-fault", self_opts.inject_softmax_fault,
                     "Corrupt the softmax Jacobian; the gradient check must fail");

  SweepOptions sweep_opts;
  std::string out_dir = ".";
  auto* sweep = app.add_subcommand("sweep", "Run one config over several seeds");
  add_run_flags(*sweep, sweep_opts.base, true);
  sweep->add_option("--seeds", sweep_opts.seeds, "Seeds to run")->required()->delimiter(',');
  sweep->add_option("--threads", sweep_opts.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out-dir", out_dir, "Directory for per-seed record files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends are "errors" with a zero exit code.
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return run_command(run_opts, std::cout, std::cerr);
    if (*oracle) {
      oracle_opts.algorithm = Algorithm::Oracle;
      return run_command(oracle_opts, std::cout, std::cerr);
    }
    if (*selftest) {
      return print_selftest_table(std::cout, run_selftest(self_opts)) ? kExitOk : kExitDiverged;
    }
    sweep_opts.out_dir = out_dir;
    return sweep_command(sweep_opts, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
