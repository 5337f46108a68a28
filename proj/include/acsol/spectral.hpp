#pragma once

#include <span>
#include <vector>

#include "acsol/tensor.hpp"

namespace acsol {

// Spectral is the production path.  FiniteDifference4 (periodic 4th-order
// central differences) is kept as an independent cross-check.
enum class DiffMethod { Spectral, FiniteDifference4 };

// All first partials d/dx_a of one grid function, a = 0..dim-1.
std::vector<std::vector<double>> gradient(std::span<const double> values, const Domain& domain,
                                          DiffMethod method = DiffMethod::Spectral);

// Coordinate partial derivative of every component.  The new covariant slot
// is inserted as the first covariant slot: (dT)^{u..}_{m d..} = d_m T^{u..}_{d..}.
// On ConstantFrame domains the result is identically zero.
TensorField partial(const TensorField& t, DiffMethod method = DiffMethod::Spectral);

// Mean of a scalar field over the grid (the integral over the torus divided
// by (2pi)^n).  ConstantFrame fields return their value.
double grid_mean(std::span<const double> values);

}  // namespace acsol
