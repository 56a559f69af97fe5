#pragma once

// Umbrella header pulling in the whole library.

#include "kimura/config.hpp"
#include "kimura/density.hpp"
#include "kimura/diagnostics.hpp"
#include "kimura/experiment.hpp"
#include "kimura/grid.hpp"
#include "kimura/initial_map.hpp"
#include "kimura/model.hpp"
#include "kimura/newton.hpp"
#include "kimura/polynomial.hpp"
#include "kimura/potential.hpp"
#include "kimura/quadrature.hpp"
#include "kimura/reference.hpp"
#include "kimura/run_record.hpp"
#include "kimura/scheme.hpp"
#include "kimura/solver.hpp"
#include "kimura/solver_config.hpp"
#include "kimura/transport_map.hpp"
#include "kimura/tridiagonal.hpp"
