#pragma once

// Umbrella header; users should generally include only this file.

#include "radixtiles/types.hpp"
#include "radixtiles/errors.hpp"
#include "radixtiles/numeric.hpp"
#include "radixtiles/lattice.hpp"
#include "radixtiles/spectral.hpp"
#include "radixtiles/digits.hpp"
#include "radixtiles/radix.hpp"
#include "radixtiles/beta.hpp"
#include "radixtiles/tile.hpp"
#include "radixtiles/wavelet.hpp"
#include "radixtiles/json_io.hpp"
