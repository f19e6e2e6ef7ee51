// spectral.hpp — Dense Hermitian-operator toolkit: Jacobi eigendecomposition,
// gauge-fixed eigenvector tracking along a parameter path, finite-difference
// eigenstate derivatives, and state metrics.

#pragma once

#include <functional>

#include "cdsim/types.hpp"

namespace cdsim {
class Protocol;
}

namespace cdsim::spectral {

// N x N Hermitian operator, energies in units of the reference scale.
// Hermiticity is enforced on construction (max deviation 1e-12).
class HermitianOperator {
public:
    explicit HermitianOperator(Matrix entries);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }

private:
    Matrix entries_;
};

// Eigenvalues (ascending) and orthonormal eigenvectors of one Hermitian
// operator at one instant. Column n of `vectors` is |eps_n>.
struct SpectralDecomposition {
    RealVector values;
    Matrix vectors;
    double time = 0.0;

    int dim() const { return static_cast<int>(values.size()); }
    // Largest deviation of sum_n eps_n |eps_n><eps_n| from `H`.
    double reconstruction_error(const Matrix& H) const;
    // Largest deviation of V^dag V from the identity.
    double orthonormality_error() const;
};

// Matrix of <eps_m | d/dt eps_n> in the parallel-transport gauge, units of
// inverse time. Anti-Hermitian with vanishing diagonal up to the accuracy of
// the finite-difference step used to build it.
struct EigenDerivativeTable {
    Matrix entries;

    double anti_hermiticity_error() const;
    double max_diagonal() const;
    // Copy with the diagonal removed (the exact parallel-transport gauge).
    Matrix offdiagonal() const;
    // Anti-Hermitian part of offdiagonal(). The exact table is anti-Hermitian
    // with zero diagonal; the projection strips the finite-difference noise
    // and is what the generator and the gauge potential consume, keeping the
    // counterdiabatic cancellation exact.
    Matrix gauge_part() const;
};

// Unit-trace positive Hermitian matrix. Construction enforces Hermiticity to
// 1e-10, unit trace to 1e-9, and min eigenvalue >= -1e-9.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix entries);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }

private:
    Matrix entries_;
};

// Eigensystem of a Hermitian matrix via cyclic complex Jacobi rotations,
// values ascending. No nondegeneracy requirement; used for metrics and
// diagnostics as well as for eigendecompose().
std::pair<RealVector, Matrix> jacobi_eigensystem(const Matrix& H);

// Full spectral decomposition with the nondegeneracy guard: throws
// DegenerateSpectrum when the smallest gap falls below
// `degeneracy_tol_rel` times the spectral range.
SpectralDecomposition eigendecompose(const HermitianOperator& H, double time = 0.0,
                                     double degeneracy_tol_rel = 1e-8);
SpectralDecomposition eigendecompose(const Matrix& H, double time = 0.0,
                                     double degeneracy_tol_rel = 1e-8);

// Match `cur` to `prev` along a continuous path: eigenvectors are reordered
// by maximal overlap and rephased so <eps_n(prev)|eps_n(cur)> is real and
// positive. Throws PathDiscontinuity when any maximal overlap modulus is
// <= 0.5.
SpectralDecomposition gauge_align(const SpectralDecomposition& prev,
                                  const SpectralDecomposition& cur);

// Central finite difference of gauge-aligned eigenvectors of `hamiltonian`
// around `at.time`, projected onto `at`. Second-order accurate in fd_step.
EigenDerivativeTable eigenstate_derivative(const std::function<Matrix(double)>& hamiltonian,
                                           const SpectralDecomposition& at, double fd_step);
EigenDerivativeTable eigenstate_derivative(const Protocol& path, double t, double fd_step);

// Trace distance (1/2) sum |mu_i| over eigenvalues of a - b. Symmetric, in
// [0, 1] for density matrices, zero iff a = b.
double trace_distance(const Matrix& a, const Matrix& b);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

} // namespace cdsim::spectral
