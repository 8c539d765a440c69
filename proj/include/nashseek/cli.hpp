// Copyright 2026 The Nashseek Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NASHSEEK_CLI_HPP_
#define NASHSEEK_CLI_HPP_

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nashseek/sim.hpp"

namespace nashseek {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;   // bad config / flags / scenario name
inline constexpr int kExitBlowup = 3;   // numerical blow-up during a run
inline constexpr int kExitVerify = 4;   // verification subcommand failed

// Resolved command-line / config-file inputs. Optionals are set only when
// the user supplied the value; precedence is flags > config file > built-in
// scenario defaults.
struct RunConfig {
  // Built-in scenario name; set only when passed explicitly (so a config
  // file's "scenario" field can fill the gap). Effective default: vehicles5.
  std::optional<std::string> scenario;
  std::string config_path;  // optional JSON config file
  std::string out_dir;      // empty = $NASHSEEK_OUT_DIR or "."

  std::optional<double> k1, k2, k3, k4, beta, delta, epsilon;
  std::optional<double> dt, t_final;
  std::optional<int> stride;
  std::optional<std::string> variant;  // "full" | "disturbance_free"
  std::optional<std::string> y0_mode;  // "seeded" | "zero"
  std::optional<unsigned> seed;

  bool gnuplot = false;  // also emit a ready-to-run plot.gp

  // Sweep grid: parameter name in {k1,k2,k3,k4,beta,dt} -> values. The
  // sweep runs the cartesian product.
  std::map<std::string, std::vector<double>> sweep;
  int jobs = 0;  // sweep parallelism; 0 = hardware concurrency
};

// Name of the environment variable holding the default output directory.
inline constexpr const char* kOutDirEnvVar = "NASHSEEK_OUT_DIR";

// Builds the scenario from the config: built-in (or config-file game) first,
// then config-file fields, then flag overrides. Throws InvalidArgument with
// a message naming the offending field on schema violations.
Scenario build_scenario(const RunConfig& cfg);

// Integrates the scenario and writes trajectory.csv + summary.json (+
// plot.gp with --gnuplot-script) into the output directory; prints a
// one-line result. Returns kExitOk, kExitConfig, or kExitBlowup.
int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Prints the equilibrium, pseudo-gradient residual, monotonicity constant,
// and per-player Lipschitz constants. Returns kExitOk iff the residual is
// below 1e-10 and the monotonicity constant is positive; kExitVerify
// otherwise (including non-monotone games).
int cmd_verify_nash(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Runs the cartesian sweep grid in parallel and writes sweep.csv (one row
// per grid point: gains, dt, final error, fitted rate, max weight trace,
// blow-up flag). Per-point failures are recorded in their row, not fatal.
// An empty grid is a config error.
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Lists the built-in scenarios.
int cmd_list_scenarios(std::ostream& out);

// Full argument-vector entry point used by main() and by tests. `args`
// excludes the program name.
int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err);

}  // namespace nashseek

#endif  // NASHSEEK_CLI_HPP_
