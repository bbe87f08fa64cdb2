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

#include "pdl/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace pdl::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kKeys = {
    // experiment
    "problem", "algorithm", "seed", "iterations", "eval_every", "eval_samples",
    "moving_average_window", "eval_mode",
    // learners
    "batch_size", "lr_base", "lr_decay", "hidden_layers", "baseline", "exploration_fraction",
    "exploration_decay",
    // user association
    "num_bs", "num_users", "capacity", "inter_bs_distance", "bs_road_offset", "tx_power",
    "bandwidth", "noise_figure_db", "noise_psd_dbm_hz", "rayleigh_fading",
    // power control
    "avg_power_budget", "mean_channel_gain", "noise_power", "max_power"};

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what, key);
}

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key, "expected a number, got " + std::string(v.type_name()));
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(key, "must be finite");
  return x;
}

// Integers may be written as 2e5 as long as the value is integral.
long long get_integer(const json& v, const std::string& key, long long lo, long long hi) {
  long long x = 0;
  if (v.is_number_integer()) {
    if (v.is_number_unsigned() &&
        v.get<unsigned long long>() > static_cast<unsigned long long>(hi)) {
      fail(key, "out of range");
    }
    x = v.get<long long>();
  } else if (v.is_number_float()) {
    const double d = v.get<double>();
    if (!std::isfinite(d) || d != std::floor(d)) fail(key, "expected an integer");
    if (d < static_cast<double>(lo) || d > static_cast<double>(hi)) fail(key, "out of range");
    x = static_cast<long long>(d);
  } else {
    fail(key, "expected an integer, got " + std::string(v.type_name()));
  }
  if (x < lo || x > hi) fail(key, "out of range");
  return x;
}

int get_int(const json& v, const std::string& key) {
  return static_cast<int>(get_integer(v, key, std::numeric_limits<int>::min(),
                                      std::numeric_limits<int>::max()));
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) fail(key, "expected a string, got " + std::string(v.type_name()));
  return v.get<std::string>();
}

bool get_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) fail(key, "expected true or false, got " + std::string(v.type_name()));
  return v.get<bool>();
}

int line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
}

// Core validation messages start with the setting name, "name: ..." or
// "name must ...".
std::string key_in_message(const std::string& message) {
  for (const auto& key : kKeys) {
    if (message.rfind(key, 0) == 0 && message.size() > key.size() &&
        (message[key.size()] == ':' || message[key.size()] == ' ')) {
      return key;
    }
  }
  return {};
}

void apply(ExperimentConfig& c, const std::string& key, const json& v) {
  auto& ua = c.user_assoc;
  auto& pc = c.power_control;
  if (key == "problem") {
    try {
      c.problem = parse_problem(get_string(v, key));
    } catch (const std::invalid_argument& e) {
      fail(key, e.what());
    }
  } else if (key == "algorithm") {
    try {
      c.algorithm = parse_algorithm(get_string(v, key));
    } catch (const std::invalid_argument& e) {
      fail(key, e.what());
    }
  } else if (key == "seed") {
    if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0) {
      fail(key, "must be >= 0");
    }
    if (!v.is_number_unsigned()) fail(key, "expected a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  } else if (key == "iterations") {
    c.iterations = static_cast<long>(
        get_integer(v, key, std::numeric_limits<long>::min(), std::numeric_limits<long>::max()));
  } else if (key == "eval_every") {
    c.eval_every = get_int(v, key);
  } else if (key == "eval_samples") {
    c.eval_samples = get_int(v, key);
  } else if (key == "moving_average_window") {
    c.moving_average_window = get_int(v, key);
  } else if (key == "eval_mode") {
    const std::string s = get_string(v, key);
    if (s == "sample") {
      c.eval_mode = EvalMode::Sample;
    } else if (s == "argmax") {
      c.eval_mode = EvalMode::Argmax;
    } else {
      fail(key, "expected \"sample\" or \"argmax\", got \"" + s + "\"");
    }
  } else if (key == "batch_size") {
    c.batch_size = get_int(v, key);
  } else if (key == "lr_base") {
    c.lr.base = get_number(v, key);
  } else if (key == "lr_decay") {
    c.lr.decay = get_number(v, key);
  } else if (key == "hidden_layers") {
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of layer widths");
    c.hidden_layers.clear();
    for (const auto& w : v) c.hidden_layers.push_back(get_int(w, key));
  } else if (key == "baseline") {
    const std::string s = get_string(v, key);
    if (s == "lagrangian") {
      c.baseline = BaselineKind::Lagrangian;
    } else if (s == "objective") {
      c.baseline = BaselineKind::Objective;
    } else {
      fail(key, "expected \"lagrangian\" or \"objective\", got \"" + s + "\"");
    }
  } else if (key == "exploration_fraction") {
    c.exploration_fraction = get_number(v, key);
  } else if (key == "exploration_decay") {
    c.exploration_decay = get_number(v, key);
  } else if (key == "num_bs") {
    ua.num_bs = get_int(v, key);
  } else if (key == "num_users") {
    ua.num_users = get_int(v, key);
  } else if (key == "capacity") {
    ua.capacity = get_int(v, key);
  } else if (key == "inter_bs_distance") {
    ua.inter_bs_distance = get_number(v, key);
  } else if (key == "bs_road_offset") {
    ua.bs_road_offset = get_number(v, key);
  } else if (key == "tx_power") {
    ua.tx_power = get_number(v, key);
  } else if (key == "bandwidth") {
    ua.bandwidth = get_number(v, key);
  } else if (key == "noise_figure_db") {
    ua.noise_figure_db = get_number(v, key);
  } else if (key == "noise_psd_dbm_hz") {
    ua.noise_psd_dbm_hz = get_number(v, key);
  } else if (key == "rayleigh_fading") {
    ua.rayleigh_fading = get_bool(v, key);
  } else if (key == "avg_power_budget") {
    pc.avg_power_budget = get_number(v, key);
  } else if (key == "mean_channel_gain") {
    pc.mean_channel_gain = get_number(v, key);
  } else if (key == "noise_power") {
    pc.noise_power = get_number(v, key);
  } else if (key == "max_power") {
    pc.max_power = get_number(v, key);
  } else {
    throw ConfigError("unknown key \"" + key + "\"", key);
  }
}

}  // namespace

const std::vector<std::string>& config_keys() { return kKeys; }

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::ModelBased, Algorithm::ModelFreeDet,
                      Algorithm::ModelFreeStochastic, Algorithm::Supervised, Algorithm::Oracle}) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument(
      "unknown algorithm \"" + std::string(name) +
      "\" (model-based, model-free-det, model-free-sto, supervised, oracle)");
}

Problem parse_problem(std::string_view name) {
  for (Problem p : {Problem::UserAssoc, Problem::PowerControl}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown problem \"" + std::string(name) +
                              "\" (user_assoc, power_control)");
}

ExperimentConfig parse_config_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const int line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream msg;
    msg << "line " << line << ": " << e.what();
    throw ConfigError(msg.str(), "", line);
  }
  if (!doc.is_object()) {
    throw ConfigError("config must be a JSON object, got " + std::string(doc.type_name()), "", 1);
  }

  ExperimentConfig config;
  for (const auto& [key, value] : doc.items()) apply(config, key, value);

  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), key_in_message(e.what()));
  }
  return config;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string(), "");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  const auto& ua = c.user_assoc;
  const auto& pc = c.power_control;
  json j = json::object();
  j["problem"] = to_string(c.problem);
  j["algorithm"] = to_string(c.algorithm);
  j["seed"] = c.seed;
  j["iterations"] = c.iterations;
  j["eval_every"] = c.eval_every;
  j["eval_samples"] = c.eval_samples;
  j["moving_average_window"] = c.moving_average_window;
  j["eval_mode"] = c.eval_mode == EvalMode::Sample ? "sample" : "argmax";
  j["batch_size"] = c.batch_size;
  j["lr_base"] = c.lr.base;
  j["lr_decay"] = c.lr.decay;
  j["hidden_layers"] = c.hidden_layers;
  j["baseline"] = c.baseline == BaselineKind::Lagrangian ? "lagrangian" : "objective";
  j["exploration_fraction"] = c.exploration_fraction;
  j["exploration_decay"] = c.exploration_decay;
  j["num_bs"] = ua.num_bs;
  j["num_users"] = ua.num_users;
  j["capacity"] = ua.capacity;
  j["inter_bs_distance"] = ua.inter_bs_distance;
  j["bs_road_offset"] = ua.bs_road_offset;
  j["tx_power"] = ua.tx_power;
  j["bandwidth"] = ua.bandwidth;
  j["noise_figure_db"] = ua.noise_figure_db;
  j["noise_psd_dbm_hz"] = ua.noise_psd_dbm_hz;
  j["rayleigh_fading"] = ua.rayleigh_fading;
  j["avg_power_budget"] = pc.avg_power_budget;
  j["mean_channel_gain"] = pc.mean_channel_gain;
  j["noise_power"] = pc.noise_power;
  j["max_power"] = pc.max_power;

  // Emit in documentation order.
  std::ostringstream out;
  out << "{\n";
  for (std::size_t i = 0; i < kKeys.size(); ++i) {
    out << "  \"" << kKeys[i] << "\": " << j.at(kKeys[i]).dump()
        << (i + 1 < kKeys.size() ? ",\n" : "\n");
  }
  out << "}\n";
  return out.str();
}

}  // namespace pdl::cli
