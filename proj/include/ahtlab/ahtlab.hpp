#pragma once

// Umbrella header: the whole library in dependency order.
#include "ahtlab/errors.hpp"
#include "ahtlab/numeric.hpp"
#include "ahtlab/expr.hpp"
#include "ahtlab/word.hpp"
#include "ahtlab/coloring.hpp"
#include "ahtlab/verify.hpp"
#include "ahtlab/solvers.hpp"
#include "ahtlab/certificate.hpp"
#include "ahtlab/reductions.hpp"
