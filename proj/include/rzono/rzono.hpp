#pragma once

#include "rzono/core/ball.hpp"
#include "rzono/core/combination.hpp"
#include "rzono/core/error.hpp"
#include "rzono/core/linalg.hpp"
#include "rzono/core/numeric.hpp"
#include "rzono/core/parallel.hpp"
#include "rzono/core/statistics.hpp"
#include "rzono/core/vector.hpp"
#include "rzono/core/zonotope.hpp"
#include "rzono/dist/directions.hpp"
#include "rzono/dist/distribution.hpp"
#include "rzono/estimators/clt.hpp"
#include "rzono/estimators/montecarlo.hpp"
#include "rzono/estimators/surrogate.hpp"
#include "rzono/estimators/ustat.hpp"
#include "rzono/random/philox.hpp"
