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

#include "pdl/cli/output.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace pdl::cli {

namespace {

std::string g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown format \"" + std::string(name) + "\" (csv, json)");
}

void write_csv(std::ostream& out, std::span<const MetricRecord> records) {
  out << "iteration,avg_rate_bps,violation_prob,lagrangian,multiplier_norm\n";
  for (const auto& r : records) {
    out << r.iteration << ',' << g17(r.avg_rate) << ',' << g17(r.violation_prob) << ','
        << g17(r.lagrangian) << ',' << g17(r.multiplier_norm) << '\n';
  }
}

void write_json(std::ostream& out, std::span<const MetricRecord> records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json o;
    o["iteration"] = r.iteration;
    o["avg_rate_bps"] = r.avg_rate;
    o["violation_prob"] = r.violation_prob;
    o["lagrangian"] = r.lagrangian;
    o["multiplier_norm"] = r.multiplier_norm;
    arr.push_back(std::move(o));
  }
  out << arr.dump(1) << '\n';
}

void write_records(std::ostream& out, std::span<const MetricRecord> records, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    write_csv(out, records);
  } else {
    write_json(out, records);
  }
}

std::string summary_json(const ExperimentConfig& config, const ExperimentResult& result) {
  const RunSummary& s = result.summary;
  nlohmann::ordered_json j;
  j["problem"] = to_string(config.problem);
  j["algorithm"] = to_string(config.algorithm);
  j["seed"] = config.seed;
  j["failed"] = result.failed;
  if (result.failed) j["failure"] = result.failure_message;
  j["iterations_completed"] = s.iterations_completed;
  j["final_avg_rate"] = s.final_avg_rate;
  j["final_violation_prob"] = s.final_violation_prob;
  j["eval_rate"] = s.eval_rate;
  j["eval_violation_prob"] = s.eval_violation_prob;
  j["eval_rate_argmax"] = s.eval_rate_argmax;
  j["eval_violation_prob_argmax"] = s.eval_violation_prob_argmax;
  j["oracle_rate"] = s.oracle_rate;
  if (s.oracle_rate != 0.0) j["final_rate_over_oracle"] = s.final_avg_rate / s.oracle_rate;
  if (s.waterfilling_deviation) j["waterfilling_deviation"] = *s.waterfilling_deviation;
  if (s.eval_avg_power) j["eval_avg_power"] = *s.eval_avg_power;
  return j.dump();
}

}  // namespace pdl::cli
