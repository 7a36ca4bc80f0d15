// d2dmm: uplink D2D underlay resource sharing for mmWave cells
// Copyright (C) 2026 The d2dmm authors
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
// ------------------------------------------------------------------------

#pragma once

#include "d2dmm/config.hpp"
#include "d2dmm/grid.hpp"
#include "d2dmm/linkbudget.hpp"
#include "d2dmm/oracle.hpp"
#include "d2dmm/propagation.hpp"
#include "d2dmm/rng.hpp"
#include "d2dmm/scheduler.hpp"
#include "d2dmm/simharness.hpp"
#include "d2dmm/topology.hpp"
