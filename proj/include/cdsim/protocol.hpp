// protocol.hpp — Periodic parameter paths driving a Hamiltonian: the closed
// Bloch-sphere protocols, periodic-spline paths, random Fourier paths for
// validation, and static operators.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "cdsim/types.hpp"

namespace cdsim {

// Time-periodic Hamiltonian path. Eigenstate derivatives are taken by finite
// differences in t, so concrete paths only have to supply the operator.
class Protocol {
public:
    virtual ~Protocol() = default;

    virtual int dim() const = 0;
    virtual double period() const = 0;
    virtual Matrix hamiltonian(double t) const = 0;
};

// (h/2) n.sigma for n = (sin t cos p, sin t sin p, cos t).
Matrix bloch_matrix(double h, double theta, double phi);

// Two-level path on the Bloch sphere: h(t), theta(t), phi(t) and their time
// derivatives, all with period 2*pi/omega.
struct BlochPath {
    std::function<double(double)> h, theta, phi;
    std::function<double(double)> dh, dtheta, dphi;
    double omega = 0.0;

    double period() const;
};

class BlochProtocol final : public Protocol {
public:
    explicit BlochProtocol(BlochPath path);

    // h const, theta = pi/4, phi = omega t.
    static BlochProtocol p1(double h, double omega);
    // h const, theta = (pi/2)(1 - cos(omega t)/5), phi = omega t.
    static BlochProtocol p2(double h, double omega);

    int dim() const override { return 2; }
    double period() const override { return path_.period(); }
    Matrix hamiltonian(double t) const override;

    const BlochPath& path() const { return path_; }

private:
    BlochPath path_;
};

// Cubic spline through uniformly spaced knots on [0, T), periodic closure.
class PeriodicSpline {
public:
    PeriodicSpline() = default;
    PeriodicSpline(std::vector<double> knots, double period);

    double value(double t) const;
    double derivative(double t) const;
    double period() const { return period_; }

private:
    std::vector<double> y_, b_, c_, d_;
    double period_ = 0.0;
    double h_ = 0.0;
};

// Bloch path with splined h(t) and theta(t) and phi(t) = winding * omega * t
// plus a splined periodic offset. Empty knot vectors mean a constant value.
BlochPath spline_bloch_path(double omega,
                            std::vector<double> h_knots, double h_const,
                            std::vector<double> theta_knots, double theta_const,
                            std::vector<double> phi_knots, int phi_winding);

// Truncated Fourier path H(t) = C0 + sum_k cos(k w t) A_k + sin(k w t) B_k
// with Hermitian coefficients. Used for randomized validation paths.
class FourierProtocol final : public Protocol {
public:
    FourierProtocol(Matrix constant, std::vector<Matrix> cosine, std::vector<Matrix> sine,
                    double omega);

    // Seeded random path with a spread constant part that keeps the spectrum
    // comfortably nondegenerate along the whole period.
    static FourierProtocol random(int dim, int harmonics, double omega, double amplitude,
                                  std::uint64_t seed);

    int dim() const override { return static_cast<int>(constant_.rows()); }
    double period() const override;
    Matrix hamiltonian(double t) const override;

private:
    Matrix constant_;
    std::vector<Matrix> cosine_, sine_;
    double omega_;
};

// Time-independent operator with a nominal period for bookkeeping.
class FixedProtocol final : public Protocol {
public:
    FixedProtocol(Matrix H, double period);

    int dim() const override { return static_cast<int>(H_.rows()); }
    double period() const override { return period_; }
    Matrix hamiltonian(double) const override { return H_; }

private:
    Matrix H_;
    double period_;
};

} // namespace cdsim
