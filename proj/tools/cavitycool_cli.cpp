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

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cavitycool/cavitycool.h"

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code(cc_status s) {
  switch (s) {
    case CC_OK: return 0;
    case CC_ERR_CONFIG:
    case CC_ERR_INVALID_ARGUMENT: return kExitConfig;
    case CC_ERR_DOMAIN:
    case CC_ERR_INTEGRATION:
    case CC_ERR_DEGENERATE:
    case CC_ERR_NOT_APPLICABLE: return kExitNumerical;
    default: return kExitIo;
  }
}

const char* status_name(cc_status s) {
  switch (s) {
    case CC_ERR_DOMAIN: return "domain error";
    case CC_ERR_INTEGRATION: return "integration error";
    case CC_ERR_DEGENERATE: return "degenerate problem";
    case CC_ERR_NOT_APPLICABLE: return "not applicable";
    case CC_ERR_CONFIG: return "invalid config";
    case CC_ERR_IO: return "i/o error";
    case CC_ERR_INVALID_ARGUMENT: return "invalid argument";
    default: return "internal error";
  }
}

struct RunFlags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trajectories;
  std::optional<unsigned> threads;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("config", f.config, "experiment config (JSON)")->required();
  cmd->add_option("--out", f.out, "output directory (default: config 'out', then $CAVITYCOOL_OUT_DIR)");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--trajectories", f.trajectories, "trajectory count")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
}

int run_experiment(const RunFlags& f, bool sweep) {
  std::ifstream in(f.config);
  if (!in) {
    std::cerr << "error: cannot read config " << f.config << "\n";
    return kExitConfig;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  nlohmann::json ov = nlohmann::json::object();
  if (f.out) ov["out"] = *f.out;
  if (f.seed) ov["seed"] = *f.seed;
  if (f.trajectories) ov["trajectories"] = *f.trajectories;
  if (f.threads) ov["threads"] = *f.threads;

  char* manifest = nullptr;
  const cc_status s = cc_experiment_run(buf.str().c_str(), ov.dump().c_str(), sweep ? 1 : 0, &manifest);
  if (s != CC_OK) {
    std::cerr << "error (" << status_name(s) << "): " << cc_last_error() << "\n";
    return exit_code(s);
  }
  std::cout << manifest << "\n";
  cc_string_free(manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cavitycool: dissipative entanglement preparation simulator"};
  app.set_version_flag("--version", std::string(cc_version()));
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "run one experiment and write CSV + manifest");
  add_run_flags(run, run_flags);

  RunFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "run a grid experiment over its axes");
  add_run_flags(sweep, sweep_flags);

  double g = 1.0, w1 = 50.0, w2 = 1000.0;
  bool as_json = false;
  auto* tables = app.add_subcommand("tables", "print the driven-transition tables");
  tables->add_option("--g", g, "atom-cavity coupling");
  tables->add_option("--w1", w1, "energy of level 1");
  tables->add_option("--w2", w2, "energy of level 2");
  tables->add_flag("--json", as_json, "emit JSON instead of text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (*run) return run_experiment(run_flags, false);
  if (*sweep) return run_experiment(sweep_flags, true);

  char* text = nullptr;
  const cc_status s = as_json ? cc_tables_json(g, w1, w2, &text) : cc_tables_text(g, w1, w2, &text);
  if (s != CC_OK) {
    std::cerr << "error (" << status_name(s) << "): " << cc_last_error() << "\n";
    return exit_code(s);
  }
  std::fputs(text, stdout);
  cc_string_free(text);
  return 0;
}
