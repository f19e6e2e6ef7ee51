// cd.hpp — Adiabatic gauge potential and counterdiabatic Hamiltonian, the
// two-level closed form, and the eigenbasis transformation used to compare
// CD-driven states against the original-basis representation.

#pragma once

#include "cdsim/liouville.hpp"
#include "cdsim/protocol.hpp"
#include "cdsim/spectral.hpp"
#include "cdsim/types.hpp"

namespace cdsim::cd {

// The contracted gauge potential lambda_dot . A as one Hermitian operator in
// the computational basis. Purely off-diagonal in the instantaneous
// eigenbasis (parallel-transport gauge).
struct GaugePotential {
    Matrix op;
};

GaugePotential gauge_potential(const Protocol& path, double t, double fd_step);
// Variant reusing an existing decomposition/table at the same time.
GaugePotential gauge_potential(const spectral::SpectralDecomposition& basis,
                               const spectral::EigenDerivativeTable& table);

// Closed two-level form H_cd = (1/2) (n x dn/dt) . sigma.
Matrix two_level_cd(const BlochPath& path, double t);

// Re-express a state vectorized in basis_E in basis_eps at the same time:
// devectorize, conjugate by the overlap matrix, revectorize. Trace preserving.
liouville::StateVec basis_transform(const liouville::StateVec& rho_E,
                                    const spectral::SpectralDecomposition& basis_E,
                                    const spectral::SpectralDecomposition& basis_eps);

} // namespace cdsim::cd
