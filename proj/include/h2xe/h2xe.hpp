#pragma once

#include "h2xe/core.hpp"
#include "h2xe/figures.hpp"
#include "h2xe/isometry.hpp"
#include "h2xe/linalg.hpp"
#include "h2xe/maps.hpp"
#include "h2xe/raster.hpp"
#include "h2xe/scene.hpp"
#include "h2xe/tiling.hpp"
#include "h2xe/walk.hpp"
