// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header for the simulation library (everything except the CLI).
#pragma once

#include "beamopt/analysis.hpp"
#include "beamopt/antenna.hpp"
#include "beamopt/channel.hpp"
#include "beamopt/config_io.hpp"
#include "beamopt/parallel.hpp"
#include "beamopt/power.hpp"
#include "beamopt/rng.hpp"
#include "beamopt/scenario.hpp"
#include "beamopt/solver.hpp"
#include "beamopt/timing.hpp"
#include "beamopt/units.hpp"
