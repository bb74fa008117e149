/*
 * Copyright 2026 The cfmimo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CFMIMO_CHANNEL_HPP
#define CFMIMO_CHANNEL_HPP

#include <cstdint>

#include "cfmimo/common.hpp"
#include "cfmimo/rng.hpp"

namespace cfmimo {

/// One coherence block: i.i.d. CN(0,1) small-scale coefficients h and the
/// composed channel g = sqrt(beta) .* h.
struct ChannelRealization {
  CMatrix h;  // M x K
  CMatrix g;  // M x K
};

inline ChannelRealization realize_channel(const Matrix& beta, std::uint64_t seed) {
  const int m_total = static_cast<int>(beta.rows());
  const int k_total = static_cast<int>(beta.cols());
  rng::Engine engine(seed);
  ChannelRealization ch;
  ch.h.resize(m_total, k_total);
  // Column-major fill keeps the draw order independent of later read order.
  for (int k = 0; k < k_total; ++k) {
    for (int m = 0; m < m_total; ++m) {
      ch.h(m, k) = engine.complex_gaussian();
    }
  }
  ch.g = beta.cwiseSqrt().cast<Complex>().cwiseProduct(ch.h);
  return ch;
}

}  // namespace cfmimo

#endif  // CFMIMO_CHANNEL_HPP
