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

#include "elaa/config.hpp"
#include "elaa/metrics.hpp"

namespace elaa::testing {

// Small seeded scenario; placements drawn from `seed`.
inline SystemConfig small_config(int ex, int ey, int ms, int kn, int kf, std::uint64_t seed, int mc = 64) {
  SystemConfig c = desk_profile().with_layout(ex, ey, ms).with_users(kn, kf);
  c.mc_samples = mc;
  return c.resolve_placements(seed);
}

inline SystemModel small_model(int ex, int ey, int ms, int kn, int kf, std::uint64_t seed, int mc = 64) {
  return build_system_model(small_config(ex, ey, ms, kn, kf, seed, mc));
}

}  // namespace elaa::testing
