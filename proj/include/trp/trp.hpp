#pragma once

// Umbrella header for the TRP gate-synthesis library.

#include "trp/config.hpp"
#include "trp/eigensolver.hpp"
#include "trp/errors.hpp"
#include "trp/hamiltonians.hpp"
#include "trp/hardware.hpp"
#include "trp/linalg.hpp"
#include "trp/metrics.hpp"
#include "trp/optimize.hpp"
#include "trp/propagator.hpp"
#include "trp/rng.hpp"
#include "trp/serialize.hpp"
#include "trp/sweep.hpp"
#include "trp/tables.hpp"
#include "trp/targets.hpp"
