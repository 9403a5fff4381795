// Umbrella header.
#pragma once

#include "cuspweyl/errors.hpp"
#include "cuspweyl/manifold_model.hpp"
#include "cuspweyl/model_io.hpp"
#include "cuspweyl/cross_section.hpp"
#include "cuspweyl/fiber_schrodinger.hpp"
#include "cuspweyl/weyl_counting.hpp"
#include "cuspweyl/embedded_bound.hpp"
#include "cuspweyl/cli.hpp"
