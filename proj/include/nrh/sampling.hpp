#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

#include "nrh/algebra.hpp"

namespace nrh {

/// Generator for sample `index` of a run seeded with `seed`; independent of
/// how samples are distributed over threads.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index);

/// Uniform point on the unit sphere of R^dim (normalized standard Gaussians).
Eigen::VectorXd random_unit_vector(std::mt19937_64& rng, int dim);

/// Exact rational point on the unit sphere of R^dim by inverse stereographic
/// projection of a random point with coordinates p/q, |p| <= bound.
AlgVec<Radical> rational_unit_vector(std::mt19937_64& rng, int dim, int bound = 6);

}  // namespace nrh
