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
#include <string>

#include <nlohmann/json.hpp>

#include "elaa/metrics.hpp"
#include "elaa/rng.hpp"

namespace elaa {

enum class Scheme { proposed, all_subarrays, random, oracle };

const char* to_string(Scheme scheme);

struct BaselineResult {
  Scheme scheme = Scheme::all_subarrays;
  ActivationState activation;
  double power_W = 0.0;
  bool feasible = false;
  std::int64_t evaluations = 0;  // audited states (oracle: 4^S)
};

BaselineResult all_subarrays(const SystemModel& model, const QoSTargets& targets);

// Uniform subset of size n with a_bar = a_tilde = a on the subset; grows n with a fresh
// subset until the audit passes or n = S.
BaselineResult random_activation(const SystemModel& model, const QoSTargets& targets, RngStream& rng, int n_start);

inline constexpr int kOracleMaxSubarrays = 12;

// Minimum-power feasible state over all (a_bar, a_tilde) in {0,1}^S x {0,1}^S.
// Ties resolve to the lexicographically smallest (a_bar, a_tilde). Throws SizeError for S > 12.
BaselineResult exhaustive_oracle(const SystemModel& model, const QoSTargets& targets);

nlohmann::json baseline_to_json(const BaselineResult& result);

}  // namespace elaa
