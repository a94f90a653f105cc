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

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "elaa/metrics.hpp"
#include "elaa/qcqp.hpp"

namespace elaa {

// Expansion point of iteration n together with the current penalty weights
// (NFUE, FFUE, RF-chain activation).
struct SurrogatePoint {
  ActivationState state;
  std::array<double, 3> penalty{};
};

enum class ConstraintKind { nfue_sinr, ffue_sinr, beampattern, total_power, subarray_power };

const char* to_string(ConstraintKind kind);

// One logical quadratic constraint of the subproblem. The per-subarray power cap is one
// block holding S rows.
struct QuadraticBlock {
  ConstraintKind kind;
  int user = -1;
  int first_row = 0;
  int row_count = 1;
};

// Convex subproblem over x = [a_bar; a_tilde; a]. Linear rows: 3S box rows followed by
// 3S coupling rows (a >= a_bar, a >= a_tilde, a <= a_bar + a_tilde).
struct ConvexSubproblem {
  QcqpProblem program;
  std::vector<QuadraticBlock> blocks;
  SurrogatePoint point;

  int variable_count() const noexcept { return program.dimension(); }
  int linear_count() const noexcept { return static_cast<int>(program.linear.size()); }
  int quadratic_count() const noexcept { return static_cast<int>(blocks.size()); }
};

// Exact power plus the linearised binary penalties, evaluated at `state` around `point`.
double penalized_objective(const SystemModel& model, const ActivationState& state, const SurrogatePoint& point);

// Throws AssemblyError when a constraint that must be convex is not (numerically).
ConvexSubproblem assemble_subproblem(const SystemModel& model, const QoSTargets& targets, const SurrogatePoint& point);

enum class SubproblemStatus { solved, infeasible, failed };

struct SubproblemSolution {
  SubproblemStatus status = SubproblemStatus::failed;
  ActivationState state;   // projected onto the box and coupling rows
  double objective = 0.0;  // subproblem objective at `state`
  double max_violation = 0.0;
  int newton_steps = 0;
};

SubproblemSolution solve_subproblem(const ConvexSubproblem& subproblem, const QcqpOptions& options = {});

// Clamp into [0,1] and then a into [max(a_bar, a_tilde), min(1, a_bar + a_tilde)].
ActivationState project_relaxed(const ActivationState& state);

// Threshold at 0.5, set a = min(1, a_bar + a_tilde) and, while an exact constraint fails,
// switch on the off entry (NFUE or FFUE service) with the largest relaxed value.
ActivationState round_and_repair(const SystemModel& model, const QoSTargets& targets, const ActivationState& relaxed);

struct IterationRecord {
  int iteration = 0;
  double penalized_objective = 0.0;  // power plus exact binary penalty at the iterate
  double power_W = 0.0;              // exact power of the relaxed iterate
  double binarity_gap = 0.0;
  double penalty = 0.0;              // weight used for this iteration
  int newton_steps = 0;
  // Counts of the assembled subproblem.
  int variables = 0;
  int linear_rows = 0;
  int quadratic_constraints = 0;
};

struct SolveResult {
  ActivationState activation;      // binary, after rounding and repair
  ActivationState relaxed_final;   // last relaxed iterate, before rounding
  std::vector<IterationRecord> trace;
  double power_W = 0.0;
  int iterations = 0;
  bool converged = false;   // fractional change fell below tol_eps1
  bool degraded = false;    // a subproblem failed and an earlier iterate was kept
  bool feasible = false;
  ConstraintAudit audit;
};

// Throws InfeasibleInstanceError when the all-on state already violates a constraint.
SolveResult run_sca(const SystemModel& model, const QoSTargets& targets, const QcqpOptions& options = {});

nlohmann::json solve_result_to_json(const SolveResult& result);
std::string trace_to_csv(const SolveResult& result);

}  // namespace elaa
