#pragma once

#include "hvol/core.hpp"
#include "hvol/generators.hpp"
#include "hvol/io.hpp"
#include "hvol/lp.hpp"
#include "hvol/oracles.hpp"
#include "hvol/reduce.hpp"
#include "hvol/rounding.hpp"
#include "hvol/volume.hpp"
#include "hvol/walks.hpp"
