#pragma once

#include "tstein/applications.hpp"
#include "tstein/density.hpp"
#include "tstein/distances.hpp"
#include "tstein/errors.hpp"
#include "tstein/grid_function.hpp"
#include "tstein/levy_cf.hpp"
#include "tstein/params.hpp"
#include "tstein/quadrature.hpp"
#include "tstein/sampling.hpp"
#include "tstein/semigroup.hpp"
#include "tstein/stein_op.hpp"
#include "tstein/test_function.hpp"
