// cd.cpp — Gauge potential, counterdiabatic term, eigenbasis transformation.

#include "cdsim/cd.hpp"

#include <cmath>

namespace cdsim::cd {

GaugePotential gauge_potential(const spectral::SpectralDecomposition& basis,
                               const spectral::EigenDerivativeTable& table) {
    const Matrix a = basis.vectors * (kImag * table.gauge_part()) * basis.vectors.adjoint();
    return GaugePotential{hermitize(a)};
}

GaugePotential gauge_potential(const Protocol& path, double t, double fd_step) {
    const spectral::SpectralDecomposition basis = spectral::eigendecompose(path.hamiltonian(t), t);
    const spectral::EigenDerivativeTable table = spectral::eigenstate_derivative(
        [&](double s) { return path.hamiltonian(s); }, basis, fd_step);
    return gauge_potential(basis, table);
}

Matrix two_level_cd(const BlochPath& path, double t) {
    const double theta = path.theta(t);
    const double phi = path.phi(t);
    const double dtheta = path.dtheta(t);
    const double dphi = path.dphi(t);

    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);

    // n x dn/dt for the unit Bloch vector n(theta, phi).
    const double cx = -dtheta * sp - dphi * st * ct * cp;
    const double cy = dtheta * cp - dphi * st * ct * sp;
    const double cz = dphi * st * st;

    Matrix H(2, 2);
    H(0, 0) = Complex(0.5 * cz, 0.0);
    H(0, 1) = Complex(0.5 * cx, -0.5 * cy);
    H(1, 0) = std::conj(H(0, 1));
    H(1, 1) = Complex(-0.5 * cz, 0.0);
    return H;
}

liouville::StateVec basis_transform(const liouville::StateVec& rho_E,
                                    const spectral::SpectralDecomposition& basis_E,
                                    const spectral::SpectralDecomposition& basis_eps) {
    require<DimensionMismatch>(rho_E.dim == basis_E.dim() && rho_E.dim == basis_eps.dim(),
                               "basis_transform: dimension mismatch");
    const Matrix overlap = basis_eps.vectors.adjoint() * basis_E.vectors;  // <eps_m|E_k>
    const Matrix coeff = overlap * liouville::coeff_from_state(rho_E) * overlap.adjoint();
    return liouville::state_from_coeff(coeff);
}

} // namespace cdsim::cd
