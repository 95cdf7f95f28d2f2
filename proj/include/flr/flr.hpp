#pragma once

// Umbrella header for the whole library.

#include "flr/analysis.hpp"
#include "flr/config.hpp"
#include "flr/core.hpp"
#include "flr/fields.hpp"
#include "flr/geometry.hpp"
#include "flr/gyroaverage.hpp"
#include "flr/interp.hpp"
#include "flr/io.hpp"
#include "flr/limit.hpp"
#include "flr/particles.hpp"
#include "flr/scaling.hpp"
#include "flr/spectral.hpp"
#include "flr/vlasov.hpp"
