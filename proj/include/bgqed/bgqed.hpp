#pragma once

#include "errors.hpp"
#include "numerics.hpp"
#include "trace.hpp"
#include "crystal.hpp"
#include "lattice.hpp"
#include "transmission.hpp"
#include "boundstates.hpp"
#include "spectra.hpp"
#include "fitting.hpp"
#include "config.hpp"
