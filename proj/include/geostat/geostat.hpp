#pragma once

// Umbrella header.

#include "geostat/analysis.hpp"
#include "geostat/errors.hpp"
#include "geostat/geometry.hpp"
#include "geostat/integrator.hpp"
#include "geostat/io.hpp"
#include "geostat/models.hpp"
#include "geostat/pullback.hpp"
