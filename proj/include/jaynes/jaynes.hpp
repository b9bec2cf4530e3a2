#pragma once

// Umbrella header.

#include "jaynes/core.hpp"
#include "jaynes/probkit.hpp"
#include "jaynes/grids.hpp"
#include "jaynes/dec.hpp"
#include "jaynes/variational.hpp"
#include "jaynes/schroedinger.hpp"
#include "jaynes/surfaces.hpp"
#include "jaynes/geometry.hpp"
#include "jaynes/metrics.hpp"
#include "jaynes/cartan.hpp"
#include "jaynes/spinor.hpp"
#include "jaynes/suite.hpp"
#include "jaynes/io.hpp"
