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

#include <complex>
#include <cstdint>
#include <random>

namespace elaa {

enum class Stream : std::uint64_t {
  placement = 1,
  far_field = 2,
  random_baseline = 3,
  auxiliary = 4,
};

// Independent random stream keyed by (seed, stream, counter). Two streams with different
// keys never share state, so far-field realization r can be drawn without drawing 0..r-1.
class RngStream {
 public:
  RngStream(std::uint64_t seed, Stream stream, std::uint64_t counter = 0);

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n);
  // CN(0, 1): real and imaginary parts N(0, 1/2), Box-Muller.
  std::complex<double> complex_normal();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace elaa
