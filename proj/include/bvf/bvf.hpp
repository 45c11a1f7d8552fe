#pragma once

#include "bvf/boxdim.hpp"
#include "bvf/corpus.hpp"
#include "bvf/fracint.hpp"
#include "bvf/grid.hpp"
#include "bvf/grid_io.hpp"
#include "bvf/variation.hpp"
#include "bvf/version.hpp"
