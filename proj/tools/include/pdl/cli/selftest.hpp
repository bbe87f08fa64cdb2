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

// Built-in consistency checks: finite-difference gradients, exact
// enumeration of the score-function estimator, oracle properties.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pdl::cli {

struct SelftestOptions {
  std::uint64_t seed = 20260415;
  int gradient_networks = 100;
  // Backpropagate through the grouped softmax with its diagonal only. The
  // gradient check is expected to fail.
  bool inject_softmax_fault = false;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> run_selftest(const SelftestOptions& options);

// Prints one row per check; returns true iff all passed.
bool print_selftest_table(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace pdl::cli
