#pragma once

#include "bvortex/boundary_solver.hpp"
#include "bvortex/conformal.hpp"
#include "bvortex/diagnostics.hpp"
#include "bvortex/errors.hpp"
#include "bvortex/fourier.hpp"
#include "bvortex/layer.hpp"
#include "bvortex/nonlinearity.hpp"
#include "bvortex/quadrature.hpp"
#include "bvortex/renormalized_energy.hpp"

namespace bvortex {
inline constexpr const char* version = "0.1.0";
}
