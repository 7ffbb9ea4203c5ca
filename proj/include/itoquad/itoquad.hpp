#pragma once

#include "errors.hpp"
#include "mesh.hpp"
#include "rng.hpp"
#include "paths.hpp"
#include "noise.hpp"
#include "integrands.hpp"
#include "quadrature.hpp"
#include "statistics.hpp"
#include "parallel.hpp"
#include "experiments.hpp"
#include "report_io.hpp"
#include "bench.hpp"
