#pragma once

#include "uavloc/core.hpp"
#include "uavloc/errormodel.hpp"
#include "uavloc/attack_mode.hpp"
#include "uavloc/crlb.hpp"
#include "uavloc/estimators.hpp"
#include "uavloc/threat.hpp"
#include "uavloc/defense.hpp"
#include "uavloc/scenario.hpp"
#include "uavloc/config.hpp"
#include "uavloc/csv.hpp"
#include "uavloc/experiments.hpp"
