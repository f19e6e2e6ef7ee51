// twolevel.hpp — Closed-form oracle for the two-level system: the Bloch
// Hamiltonian, analytic rate scalars for the phase-damping and bit-flip jump
// operators, and the analytic first-order state with and without the
// counterdiabatic term.
//
// Ordering convention: component 1 is the EXCITED state (+h/2), component 2
// the ground state, the opposite of the ascending order used everywhere else.
// Comparisons against the generic machinery should go through
// analytic_density_matrix(), which is ordering independent.

#pragma once

#include "cdsim/liouville.hpp"
#include "cdsim/protocol.hpp"
#include "cdsim/spectral.hpp"
#include "cdsim/thermo.hpp"
#include "cdsim/types.hpp"

namespace cdsim::twolevel {

struct TwoLevelRates {
    double gamma = 0.0;   // population relaxation scale
    double gamma2 = 0.0;  // coherence decay scale
};

// (h/2) n.sigma with eigenvalues -h/2, +h/2.
spectral::HermitianOperator bloch_hamiltonian(double h, double theta, double phi);

// Phase-damping jump (sigma_z):
//   Gamma  = gamma(h) sin^2(theta),
//   Gamma2 = (1 + e^{-beta h})/2 gamma(h) sin^2(theta) + 2 gamma(0) cos^2(theta).
TwoLevelRates rates_z(double h, double theta, double beta, const thermo::RateFunction& gamma_z);

// Bit-flip jump (sigma_x):
//   Gamma  = gamma(h) (1 - sin^2(theta) cos^2(phi)),
//   Gamma2 = (1 + e^{-beta h})/2 gamma(h) (1 - sin^2 cos^2) + 2 gamma(0) sin^2 cos^2.
TwoLevelRates rates_x(double h, double theta, double phi, double beta,
                      const thermo::RateFunction& gamma_x);

// Eigenvectors (excited, ground) of the Bloch Hamiltonian in the explicit
// gauge used by the closed forms; columns of the returned matrix.
Matrix analytic_eigenvectors(double theta, double phi);

// <eps_ground | d/dt eps_excited> in the parallel-transport gauge attached to
// analytic_eigenvectors at time t.
Complex analytic_coupling(const BlochPath& path, double t);

// First-order state in the (excited, ground) ordering. Throws ZeroRate when
// Gamma = 0 while dh/dt != 0 (the population correction diverges).
liouville::StateVec analytic_first_order(const BlochPath& path, double t, double beta,
                                         const TwoLevelRates& rates, bool with_cd);

// Same state as a computational-basis density matrix (ordering independent).
Matrix analytic_density_matrix(const BlochPath& path, double t, double beta,
                               const TwoLevelRates& rates, bool with_cd);

} // namespace cdsim::twolevel
