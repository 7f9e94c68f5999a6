#pragma once

// Umbrella header for the nabla discrete fractional calculus toolkit.

#include "core.hpp"
#include "csv.hpp"
#include "kernel.hpp"
#include "lyapunov.hpp"
#include "operators.hpp"
#include "optimizer.hpp"
#include "simulator.hpp"
#include "suite.hpp"
#include "svg.hpp"
