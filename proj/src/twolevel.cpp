// twolevel.cpp — Closed-form two-level oracle.

#include "cdsim/twolevel.hpp"

#include <cmath>

namespace cdsim::twolevel {

spectral::HermitianOperator bloch_hamiltonian(double h, double theta, double phi) {
    require<Error>(h > 0.0, "bloch_hamiltonian: h must be positive");
    return spectral::HermitianOperator(bloch_matrix(h, theta, phi));
}

TwoLevelRates rates_z(double h, double theta, double beta, const thermo::RateFunction& gamma_z) {
    const double s2 = std::sin(theta) * std::sin(theta);
    const double c2 = std::cos(theta) * std::cos(theta);
    TwoLevelRates r;
    r.gamma = gamma_z.rate(h) * s2;
    r.gamma2 = 0.5 * (1.0 + std::exp(-beta * h)) * gamma_z.rate(h) * s2 +
               2.0 * gamma_z.rate(0.0) * c2;
    return r;
}

TwoLevelRates rates_x(double h, double theta, double phi, double beta,
                      const thermo::RateFunction& gamma_x) {
    const double sc2 = std::sin(theta) * std::sin(theta) * std::cos(phi) * std::cos(phi);
    TwoLevelRates r;
    r.gamma = gamma_x.rate(h) * (1.0 - sc2);
    r.gamma2 = 0.5 * (1.0 + std::exp(-beta * h)) * gamma_x.rate(h) * (1.0 - sc2) +
               2.0 * gamma_x.rate(0.0) * sc2;
    return r;
}

Matrix analytic_eigenvectors(double theta, double phi) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const Complex eip = std::polar(1.0, phi);
    Matrix V(2, 2);
    // Excited |+n> and ground |-n> of (h/2) n.sigma.
    V(0, 0) = c;
    V(1, 0) = s * eip;
    V(0, 1) = -s * std::conj(eip);
    V(1, 1) = c;
    return V;
}

Complex analytic_coupling(const BlochPath& path, double t) {
    // <ground|d_t|excited> in the gauge of analytic_eigenvectors; the
    // parallel-transport value at t coincides with the raw off-diagonal
    // derivative.
    const double theta = path.theta(t);
    const double phi = path.phi(t);
    return 0.5 * std::polar(1.0, phi) *
           Complex(path.dtheta(t), path.dphi(t) * std::sin(theta));
}

liouville::StateVec analytic_first_order(const BlochPath& path, double t, double beta,
                                         const TwoLevelRates& rates, bool with_cd) {
    const double h = path.h(t);
    require<Error>(h > 0.0, "analytic_first_order: h must be positive");
    const double x = std::exp(-beta * h);
    const double dh = path.dh(t);

    liouville::StateVec state = liouville::StateVec::zero(2);

    // Populations in the (excited, ground) ordering: Gibbs plus the lag
    // correction (d_t e^{-beta h}) / (Gamma (1 + e^{-beta h})^3) (-1, 1).
    const double tanh_half = std::tanh(0.5 * beta * h);
    double correction = 0.0;
    if (dh != 0.0) {
        require<ZeroRate>(rates.gamma > 0.0,
                          "analytic_first_order: Gamma = 0 with dh/dt != 0");
        const double dx = -beta * dh * x;
        correction = dx / (rates.gamma * std::pow(1.0 + x, 3));
    }
    state.pop(0) = 0.5 * (1.0 - tanh_half) - correction;
    state.pop(1) = 0.5 * (1.0 + tanh_half) + correction;

    const Complex g = analytic_coupling(path, t);
    Complex r_plus = 1.0 / Complex(rates.gamma2, h);   // 1 / (Gamma2 + i h)
    Complex r_minus = 1.0 / Complex(rates.gamma2, -h); // 1 / (Gamma2 - i h)
    if (with_cd) {
        r_plus -= 1.0 / Complex(0.0, h);
        r_minus -= 1.0 / Complex(0.0, -h);
    }
    // coh pairs ((1,2), (2,1)) in the excited-first labels.
    state.coh(0) = tanh_half * std::conj(g) * r_plus;
    state.coh(1) = tanh_half * g * r_minus;
    return state;
}

Matrix analytic_density_matrix(const BlochPath& path, double t, double beta,
                               const TwoLevelRates& rates, bool with_cd) {
    const liouville::StateVec s = analytic_first_order(path, t, beta, rates, with_cd);
    const Matrix V = analytic_eigenvectors(path.theta(t), path.phi(t));
    Matrix coeff(2, 2);
    coeff(0, 0) = s.pop(0);
    coeff(1, 1) = s.pop(1);
    coeff(0, 1) = s.coh(0);
    coeff(1, 0) = s.coh(1);
    return V * coeff * V.adjoint();
}

} // namespace cdsim::twolevel
