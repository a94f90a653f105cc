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


// elaa: experiment runner and single-instance solver.
//
//   elaa run <convergence|power_vs_s|power_vs_users> --seeds 1..20 --out results/
//   elaa solve --config instance.json --seed 7

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "elaa/baselines.hpp"
#include "elaa/config.hpp"
#include "elaa/errors.hpp"
#include "elaa/harness.hpp"
#include "elaa/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitSolverFailure = 3;

elaa::SystemConfig base_config(const std::string& profile, const std::string& path) {
  elaa::SystemConfig base = profile == "full" ? elaa::full_profile() : elaa::desk_profile();
  return path.empty() ? base : elaa::load_config(path, base);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficient subarray activation for ELAA-assisted ISAC"};
  app.require_subcommand(1);

  std::string profile = "desk";
  std::string config_path;

  auto* run = app.add_subcommand("run", "Run a seeded experiment sweep and write CSV + manifest.json");
  std::string experiment;
  std::string seeds = "1..20";
  std::string out_dir = "results";
  bool with_oracle = false;
  int workers = 1;
  run->add_option("experiment", experiment, "convergence | power_vs_s | power_vs_users")->required();
  run->add_option("--config", config_path, "JSON config overriding the profile")->check(CLI::ExistingFile);
  run->add_option("--seeds", seeds, "Seed range a..b or list a,b,c")->capture_default_str();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--profile", profile, "Base profile")->check(CLI::IsMember({"desk", "full"}))->capture_default_str();
  run->add_flag("--with-oracle", with_oracle, "Also run the exhaustive oracle where S <= 8");
  run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  auto* solve = app.add_subcommand("solve", "Solve one instance and print the result as JSON");
  std::uint64_t seed = 1;
  bool solve_oracle = false;
  std::string trace_path;
  solve->add_option("--config", config_path, "JSON config overriding the profile")->check(CLI::ExistingFile);
  solve->add_option("--profile", profile, "Base profile")->check(CLI::IsMember({"desk", "full"}))->capture_default_str();
  solve->add_option("--seed", seed, "Seed for placements and channels")->capture_default_str();
  solve->add_flag("--with-oracle", solve_oracle, "Compare with the exhaustive oracle");
  solve->add_option("--trace", trace_path, "Write the iteration trace as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      elaa::ExperimentSpec spec;
      spec.experiment = elaa::experiment_from_string(experiment);
      spec.base = base_config(profile, config_path);
      spec.sweep = elaa::default_sweep(spec.experiment, profile == "full");
      spec.seeds = elaa::parse_seed_range(seeds);
      spec.output_dir = out_dir;
      spec.with_oracle = with_oracle;
      spec.workers = workers;
      const elaa::ExperimentOutput out = elaa::run_experiment(spec);
      for (const auto& f : out.files) std::cout << (spec.output_dir / f).string() << '\n';
      if (out.any_infeasible) {
        std::cerr << "error: a proposed activation failed the exact audit\n";
        return kExitSolverFailure;
      }
      if (out.any_degraded) std::cerr << "warning: some runs stopped early on a failed subproblem\n";
      return kExitOk;
    }

    elaa::SystemConfig config = base_config(profile, config_path).resolve_placements(seed);
    const elaa::SystemModel model = elaa::build_system_model(config);
    const elaa::QoSTargets targets = elaa::derive_qos_targets(model);
    const elaa::SolveResult result = elaa::run_sca(model, targets);
    nlohmann::json doc;
    doc["config"] = elaa::config_to_json(config);
    doc["proposed"] = elaa::solve_result_to_json(result);
    doc["all_subarrays"] = elaa::baseline_to_json(elaa::all_subarrays(model, targets));
    if (solve_oracle) doc["oracle"] = elaa::baseline_to_json(elaa::exhaustive_oracle(model, targets));
    std::cout << doc.dump(2) << '\n';
    if (!trace_path.empty()) {
      std::ofstream trace(trace_path);
      trace << elaa::trace_to_csv(result);
    }
    return result.feasible ? kExitOk : kExitSolverFailure;
  } catch (const elaa::InfeasibleInstanceError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const elaa::AssemblyError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
