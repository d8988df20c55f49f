#pragma once

#include "numerics/eigen.hpp"
#include "numerics/optimize.hpp"
#include "numerics/parallel.hpp"
#include "numerics/quadrature.hpp"
#include "numerics/roots.hpp"
