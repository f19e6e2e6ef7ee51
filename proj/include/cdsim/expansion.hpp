// expansion.hpp — Slow-driving perturbative solutions: spectral decomposition
// of the transition-rate matrix, its reduced inverse, the zeroth/first-order
// population and coherence terms, and the second-order effective population
// generator.

#pragma once

#include <vector>

#include "cdsim/liouville.hpp"
#include "cdsim/types.hpp"

namespace cdsim::expansion {

// Biorthonormal eigensystem of the transition-rate matrix K. Index 0 carries
// the zero eigenvalue; the associated right vector, normalized to unit entry
// sum, is the Gibbs population vector.
struct RateSpectrum {
    Vector eigenvalues;  // [0] is the zero mode
    Matrix right;        // columns |R_n>
    Matrix left;         // rows <L_n|

    int dim() const { return static_cast<int>(eigenvalues.size()); }
    double biorthonormality_error() const;
    double completeness_error() const;
};

// Solved via Jacobi on the detailed-balance symmetrization of K when it
// applies (it does for every KMS dissipator); general-case fallback uses a
// dense nonsymmetric eigensolver. Throws NonSimpleKernel when the zero
// eigenvalue is absent or not simple.
RateSpectrum rate_spectrum(const RealMatrix& K);

// K-bar^{-1} = sum_{n != 0} (1/Lambda_n) |R_n><L_n|. Satisfies
// K-bar^{-1} K = K K-bar^{-1} = 1 - |R_0><L_0| and annihilates |R_0>.
Matrix reduced_inverse(const RateSpectrum& spectrum);

struct ExpansionResult {
    int order = 0;
    std::vector<RealVector> pop_terms;  // one per order, 0..order
    std::vector<Vector> coh_terms;
    bool cd_applied = false;
    // Basis the coherence components refer to (phases are gauge dependent).
    spectral::SpectralDecomposition basis;

    RealVector pop() const;
    Vector coh() const;
};

// Orders 0 and 1 of the slow-driving expansion at time t. Without CD the
// first-order coherence is -(K2 - i Delta)^{-1} applied to the gauge-coupling
// image of the Gibbs populations; with CD the resolvent is replaced by
// (K2 - i Delta)^{-1} - (-i Delta)^{-1} and the population part is unchanged.
ExpansionResult first_order(const Protocol& path, double t,
                            const thermo::DissipatorConfig& config, bool with_cd,
                            double fd_step);

// K + (gauge blocks contracted through the coherence resolvent): the
// second-order effective generator of the population dynamics. Column sums
// vanish; the correction is real by conjugate-pair symmetry.
RealMatrix effective_population_generator(const liouville::GeneratorBlocks& blocks);

} // namespace cdsim::expansion
