#pragma once

// Umbrella header for the whole library.

#include "crbloc/bias_model.hpp"
#include "crbloc/crb.hpp"
#include "crbloc/csv.hpp"
#include "crbloc/errors.hpp"
#include "crbloc/estimator.hpp"
#include "crbloc/experiments.hpp"
#include "crbloc/geometry.hpp"
#include "crbloc/nelder_mead.hpp"
#include "crbloc/parallel.hpp"
#include "crbloc/quadrature.hpp"
#include "crbloc/scenario_io.hpp"
