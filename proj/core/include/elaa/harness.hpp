// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "elaa/baselines.hpp"
#include "elaa/config.hpp"
#include "elaa/qcqp.hpp"
#include "elaa/solver.hpp"

namespace elaa {

enum class Experiment { convergence, power_vs_s, power_vs_users };

const char* to_string(Experiment experiment);
Experiment experiment_from_string(const std::string& name);  // throws ConfigError

// One sweep value: array layout plus user split.
struct SweepPoint {
  int elements_x = 8;
  int elements_y = 8;
  int elements_per_subarray = 8;
  int nfue_count = 1;
  int ffue_count = 1;

  int element_count() const noexcept { return elements_x * elements_y; }
  int subarray_count() const noexcept { return element_count() / elements_per_subarray; }
};

struct ExperimentSpec {
  Experiment experiment = Experiment::convergence;
  SystemConfig base;
  std::vector<SweepPoint> sweep;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir;
  bool with_oracle = false;
  int oracle_max_subarrays = 8;  // oracle only runs where S is at most this
  int workers = 1;
  QcqpOptions qcqp;
};

// Desk profile: M_t = 64 throughout. Full profile: M_t = 400..600 with M_s = 50.
std::vector<SweepPoint> default_sweep(Experiment experiment, bool full_scale);

// Parses "a..b" (inclusive) or a comma-separated list.
std::vector<std::uint64_t> parse_seed_range(const std::string& text);

// Everything measured for one (sweep point, seed) pair.
struct SeedRun {
  int point = 0;
  std::uint64_t seed = 0;
  SweepPoint layout;
  SolveResult proposed;
  BaselineResult all_on;
  BaselineResult random;
  bool has_oracle = false;
  BaselineResult oracle;
};

struct ExperimentOutput {
  std::vector<SeedRun> runs;                // sorted by (point, seed)
  std::vector<std::string> files;           // written file names, relative to output_dir
  bool any_degraded = false;
  bool any_infeasible = false;
};

// Runs every (point, seed) job on `spec.workers` threads and writes CSV plus manifest.json.
// Output bytes depend only on the spec, never on the worker count.
ExperimentOutput run_experiment(const ExperimentSpec& spec);

ExperimentOutput run_convergence(const ExperimentSpec& spec);
ExperimentOutput run_power_vs_s(const ExperimentSpec& spec);
ExperimentOutput run_power_vs_users(const ExperimentSpec& spec);

// CSV renderers (deterministic fixed formatting).
std::string convergence_csv(const std::vector<SeedRun>& runs);
std::string runs_csv(const std::vector<SeedRun>& runs);
std::string summary_csv(Experiment experiment, const std::vector<SeedRun>& runs);

std::string format_number(double value);
// Git blob id: SHA-1 over "blob <size>\0" + content, lower-case hex.
std::string git_blob_digest(const std::string& content);
std::string sha256_hex(const std::string& content);

}  // namespace elaa
