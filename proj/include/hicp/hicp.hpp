#pragma once

#include "hicp/complex.hpp"
#include "hicp/errors.hpp"
#include "hicp/geometry.hpp"
#include "hicp/io.hpp"
#include "hicp/layout.hpp"
#include "hicp/polytope.hpp"
#include "hicp/reference.hpp"
#include "hicp/sampling.hpp"
#include "hicp/solver.hpp"
