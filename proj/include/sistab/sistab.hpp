#pragma once

// Umbrella header: fiber sampling, counting, bounds and semigroup analysis
// for contingency tables with fixed sufficient statistics.

#include "sistab/bounds.hpp"
#include "sistab/enumerate.hpp"
#include "sistab/experiment.hpp"
#include "sistab/generator.hpp"
#include "sistab/io.hpp"
#include "sistab/lp.hpp"
#include "sistab/model.hpp"
#include "sistab/numeric.hpp"
#include "sistab/partial.hpp"
#include "sistab/rng.hpp"
#include "sistab/search.hpp"
#include "sistab/semigroup.hpp"
#include "sistab/sis.hpp"
