// util.hpp — Small shared helpers: seeded random Hermitian matrices and
// fixed-width float formatting for the CSV outputs.

#pragma once

#include <random>
#include <string>

#include "cdsim/types.hpp"

namespace cdsim::util {

// Gaussian Hermitian matrix, entries O(scale).
Matrix random_hermitian(int dim, std::mt19937_64& rng, double scale = 1.0);

// Hermitian matrix with eigenvalues spread roughly over [0, dim-1] * spread;
// keeps spectra comfortably nondegenerate for randomized trials.
Matrix random_hamiltonian(int dim, std::mt19937_64& rng, double spread = 1.0,
                          double mix = 0.15);

// Random density matrix (positive, unit trace).
Matrix random_density(int dim, std::mt19937_64& rng);

// Shortest-round-trip decimal rendering with 17 significant digits.
std::string format_g17(double x);

} // namespace cdsim::util
