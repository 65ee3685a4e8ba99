// Copyright 2026 The cavitycool Authors
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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace cavitycool::experiments {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kOutDirEnv = "CAVITYCOOL_OUT_DIR";

/// Experiment ids accepted in the "experiment" field.
const std::vector<std::string>& experiment_ids();

/// Grid axis, either {"min", "max", "points"} or {"values": [...]}.
struct Axis {
  std::vector<double> values;
};

/// Fully resolved configuration: every parameter carries its effective value.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::size_t trajectories = 0;
  unsigned threads = 0;  // 0 = hardware concurrency
  std::string out;       // empty = resolve from the environment
  Json params = Json::object();
  std::map<std::string, Axis> axes;
};

/// Command-line overrides; unset fields leave the file value alone.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trajectories;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
};

/// Experiments with grid axes (the ones `sweep` accepts).
bool has_axes(std::string_view experiment);

/// Parses and validates a config document; unknown keys, bad ids and
/// out-of-range values throw ConfigError naming the offending key. Missing
/// parameters and axes take their defaults. `sweep` rejects experiments
/// without grid axes.
ExperimentConfig parse_config(const Json& doc, const Overrides& overrides = {},
                              bool sweep = false);

/// Inverse of parse_config(); re-parsing gives an equal config.
Json config_to_json(const ExperimentConfig& cfg);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunOutput {
  std::vector<OutputFile> files;
  Json summary = Json::object();
};

/// Runs the experiment in memory. Numerical failures propagate as the
/// module exceptions.
RunOutput execute(const ExperimentConfig& cfg);

/// --out, then the config, then $CAVITYCOOL_OUT_DIR, then "cavitycool-out".
std::string resolve_output_dir(const ExperimentConfig& cfg);

/// Writes every file atomically (temporary file + rename) followed by
/// manifest.json, and returns the manifest.
Json write_outputs(const ExperimentConfig& cfg, const RunOutput& out, double seconds);

/// execute() + write_outputs() with timing.
Json run(const ExperimentConfig& cfg);

/// %.17g.
std::string format_number(double v);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);

/// "# " + comma-separated column names, then one row per entry.
std::string csv(const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows);

}  // namespace cavitycool::experiments
