#pragma once

// Umbrella header.

#include "dendrify/rational.hpp"
#include "dendrify/geometry.hpp"
#include "dendrify/polysys.hpp"
#include "dendrify/attractor.hpp"
#include "dendrify/svg.hpp"
#include "dendrify/arcs.hpp"
#include "dendrify/holder.hpp"
#include "dendrify/io.hpp"
