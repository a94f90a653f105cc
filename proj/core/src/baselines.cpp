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


#include "elaa/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "elaa/errors.hpp"

namespace elaa {

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::proposed: return "proposed";
    case Scheme::all_subarrays: return "all_subarrays";
    case Scheme::random: return "random";
    case Scheme::oracle: return "oracle";
  }
  return "unknown";
}

BaselineResult all_subarrays(const SystemModel& model, const QoSTargets& targets) {
  BaselineResult out;
  out.scheme = Scheme::all_subarrays;
  out.activation = ActivationState::all_on(model.subarray_count());
  const ConstraintAudit audit = audit_constraints(model, targets, out.activation);
  out.power_W = audit.power.total_W;
  out.feasible = audit.feasible;
  out.evaluations = 1;
  return out;
}

BaselineResult random_activation(const SystemModel& model, const QoSTargets& targets, RngStream& rng, int n_start) {
  const int subarrays = model.subarray_count();
  if (n_start < 1 || n_start > subarrays) throw ConfigError("random baseline: n_start must lie in [1, S]");

  BaselineResult out;
  out.scheme = Scheme::random;
  std::vector<int> order(subarrays);
  for (int n = n_start; n <= subarrays; ++n) {
    // Partial Fisher-Yates: the first n entries form a uniform subset.
    std::iota(order.begin(), order.end(), 0);
    for (int i = 0; i < n; ++i) {
      const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(subarrays - i)));
      std::swap(order[i], order[j]);
    }
    Eigen::VectorXd chosen = Eigen::VectorXd::Zero(subarrays);
    for (int i = 0; i < n; ++i) chosen(order[i]) = 1.0;
    out.activation = ActivationState::from_binary(chosen, chosen);
    const ConstraintAudit audit = audit_constraints(model, targets, out.activation);
    ++out.evaluations;
    out.power_W = audit.power.total_W;
    out.feasible = audit.feasible;
    if (out.feasible) break;
  }
  return out;
}

BaselineResult exhaustive_oracle(const SystemModel& model, const QoSTargets& targets) {
  const int subarrays = model.subarray_count();
  if (subarrays > kOracleMaxSubarrays) {
    throw SizeError("exhaustive oracle refuses S = " + std::to_string(subarrays) + " (limit " +
                    std::to_string(kOracleMaxSubarrays) + ")");
  }
  BaselineResult best;
  best.scheme = Scheme::oracle;
  best.power_W = std::numeric_limits<double>::infinity();

  // Bit s of `bar_bits` (MSB = subarray 0) encodes a_bar_s, so ascending (bar, tilde) order
  // visits states lexicographically and strict improvement keeps the smallest tie.
  const std::uint64_t per_vector = std::uint64_t{1} << subarrays;
  Eigen::VectorXd bar(subarrays), tilde(subarrays);
  for (std::uint64_t bar_bits = 0; bar_bits < per_vector; ++bar_bits) {
    for (int s = 0; s < subarrays; ++s) bar(s) = static_cast<double>((bar_bits >> (subarrays - 1 - s)) & 1U);
    for (std::uint64_t tilde_bits = 0; tilde_bits < per_vector; ++tilde_bits) {
      for (int s = 0; s < subarrays; ++s) tilde(s) = static_cast<double>((tilde_bits >> (subarrays - 1 - s)) & 1U);
      const ActivationState state = ActivationState::from_binary(bar, tilde);
      ++best.evaluations;
      // Power is cheap; skip the full audit for states that cannot win.
      const double power = total_power(model, state);
      if (power >= best.power_W) continue;
      if (!audit_constraints(model, targets, state).feasible) continue;
      best.power_W = power;
      best.activation = state;
      best.feasible = true;
    }
  }
  if (!best.feasible) {
    best.activation = ActivationState::all_on(subarrays);
    best.power_W = total_power(model, best.activation);
  }
  return best;
}

nlohmann::json baseline_to_json(const BaselineResult& r) {
  return {{"scheme", to_string(r.scheme)},
          {"activation", activation_to_json(r.activation)},
          {"power_W", r.power_W},
          {"feasible", r.feasible},
          {"active_subarrays", r.activation.active_count()},
          {"evaluations", r.evaluations}};
}

}  // namespace elaa
