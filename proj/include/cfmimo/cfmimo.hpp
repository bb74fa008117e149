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

// Umbrella header for the cell-free massive MIMO downlink simulator.

#ifndef CFMIMO_CFMIMO_HPP
#define CFMIMO_CFMIMO_HPP

#include "cfmimo/channel.hpp"
#include "cfmimo/clustering.hpp"
#include "cfmimo/common.hpp"
#include "cfmimo/estimation.hpp"
#include "cfmimo/experiment.hpp"
#include "cfmimo/geometry.hpp"
#include "cfmimo/large_scale.hpp"
#include "cfmimo/pilots.hpp"
#include "cfmimo/power_control.hpp"
#include "cfmimo/precoding.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/scenario.hpp"
#include "cfmimo/strategies.hpp"
#include "cfmimo/version.hpp"

#endif  // CFMIMO_CFMIMO_HPP
