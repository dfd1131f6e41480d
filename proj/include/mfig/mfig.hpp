#pragma once

// Umbrella header: the whole toolkit in one include.

#include "mfig/core.hpp"
#include "mfig/graph.hpp"
#include "mfig/energy.hpp"
#include "mfig/mean.hpp"
#include "mfig/gamma.hpp"
#include "mfig/curvature.hpp"
#include "mfig/quadrature.hpp"
#include "mfig/two_point.hpp"
#include "mfig/geodesic.hpp"
#include "mfig/dynamics.hpp"
#include "mfig/product.hpp"
