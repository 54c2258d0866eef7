#pragma once

// Umbrella header: coarse-grained position/momentum measurements, their
// entropic uncertainty bounds, and the verification harness tying the two.

#include "qloc/binning.hpp"
#include "qloc/bounds.hpp"
#include "qloc/concentration.hpp"
#include "qloc/distribution.hpp"
#include "qloc/entropy.hpp"
#include "qloc/format.hpp"
#include "qloc/fourier.hpp"
#include "qloc/grid.hpp"
#include "qloc/harness.hpp"
#include "qloc/io.hpp"
#include "qloc/quadrature.hpp"
