#pragma once

#include "slhc/dendrogram.hpp"
#include "slhc/edge_vector.hpp"
#include "slhc/error.hpp"
#include "slhc/estimate.hpp"
#include "slhc/generators.hpp"
#include "slhc/noise.hpp"
#include "slhc/plot.hpp"
#include "slhc/random.hpp"
#include "slhc/simharness.hpp"
#include "slhc/slhc.hpp"
#include "slhc/trees.hpp"
