#pragma once

#include <cstdint>

#include "acsol/link.hpp"
#include "acsol/tensor.hpp"

namespace acsol {

// Smooth random fields on a periodic grid built from the Fourier modes with
// wave-vector entries in {-1, 0, 1}.  Deterministic in the seed.

// h_ij = delta_ij + perturbation whose sup-norm is at most `amplitude` per
// component; halved until the minimum eigenvalue exceeds 0.5.
TensorField random_analytic_metric(const DomainPtr& grid, std::uint64_t seed,
                                   double amplitude = 0.2);

TensorField random_analytic_scalar(const DomainPtr& grid, std::uint64_t seed,
                                   double amplitude = 1.0);

// Grid link of the given dimension with `size` points per axis.
LinkManifold random_grid_link(int dim, int size, std::uint64_t seed, double amplitude = 0.2);

}  // namespace acsol
