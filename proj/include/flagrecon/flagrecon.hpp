#pragma once

// Umbrella header.

#include "flagrecon/errors.hpp"
#include "flagrecon/flag_field.hpp"
#include "flagrecon/geometry.hpp"
#include "flagrecon/grid.hpp"
#include "flagrecon/harmonics.hpp"
#include "flagrecon/io.hpp"
#include "flagrecon/jacobian_check.hpp"
#include "flagrecon/oracle.hpp"
#include "flagrecon/parallel.hpp"
#include "flagrecon/quadrature.hpp"
#include "flagrecon/reconstruct.hpp"
#include "flagrecon/rng.hpp"
#include "flagrecon/scalar_field.hpp"
#include "flagrecon/transforms.hpp"
