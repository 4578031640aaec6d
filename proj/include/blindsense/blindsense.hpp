#pragma once

// Umbrella header for the blind-sensing numerical laboratory.

#include "band.hpp"
#include "config.hpp"
#include "cover.hpp"
#include "csv.hpp"
#include "dimension.hpp"
#include "experiments.hpp"
#include "prolate.hpp"
#include "quantize.hpp"
#include "recovery.hpp"
#include "rng.hpp"
#include "sensing.hpp"
#include "signal.hpp"
