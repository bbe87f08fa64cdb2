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

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "pdl/harness.hpp"

namespace pdl::cli {

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(std::string_view name);

// CSV header: iteration,avg_rate_bps,violation_prob,lagrangian,multiplier_norm
// Reals are printed with 17 significant digits so they read back exactly.
void write_csv(std::ostream& out, std::span<const MetricRecord> records);
// Array of objects keyed like the CSV columns.
void write_json(std::ostream& out, std::span<const MetricRecord> records);
void write_records(std::ostream& out, std::span<const MetricRecord> records, OutputFormat format);

std::string summary_json(const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace pdl::cli
