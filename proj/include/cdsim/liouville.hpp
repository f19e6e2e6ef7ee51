// liouville.hpp — Vectorization of the GKLS equation in the instantaneous
// eigenbasis: the (population, coherence) split, the block generator with its
// transition-rate and gauge-coupling blocks, and a brute-force dense
// superoperator used as the internal oracle.

#pragma once

#include <optional>

#include "cdsim/protocol.hpp"
#include "cdsim/spectral.hpp"
#include "cdsim/thermo.hpp"
#include "cdsim/types.hpp"

namespace cdsim::liouville {

// Index bookkeeping for the (pop, coh) ordering. Coherence pairs (m, n),
// m != n, are enumerated lexicographically: (0,1), (0,2), ..., (1,0), ...
struct BlockIndex {
    explicit BlockIndex(int dim);

    int dim;
    int pop_size;  // N
    int coh_size;  // N(N-1)

    int coh_index(int m, int n) const;
    std::pair<int, int> coh_pair(int k) const;
};

// Density-operator coefficients in one instantaneous eigenbasis, split into
// the population block (length N) and the coherence block (length N(N-1)).
struct StateVec {
    int dim = 0;
    Vector pop;
    Vector coh;

    static StateVec zero(int dim);
    // Conversions to/from the flat (pop, coh) vector the integrator works on.
    Vector flat() const;
    static StateVec from_flat(int dim, const Vector& v);

    double trace_error() const;
    // Largest violation of coh(m,n) = conj(coh(n,m)).
    double conjugate_pairing_error() const;
};

StateVec vectorize(const Matrix& rho, const spectral::SpectralDecomposition& basis);
Matrix devectorize(const StateVec& state, const spectral::SpectralDecomposition& basis);

// Coefficient-matrix forms used when moving between bases.
Matrix coeff_from_state(const StateVec& state);
StateVec state_from_coeff(const Matrix& coeff);

// Transition-rate matrix over populations: offdiagonal (m,n) entry
// sum_{alpha,eps} gamma_alpha(eps) |<eps_m|L^eps_alpha|eps_n>|^2, diagonal
// fixed by zero column sums. Annihilates the Gibbs population vector.
RealMatrix build_K(const thermo::ThermalDissipator& d);

// The four blocks of the generator at one time. A12/A21/A2 store the additive
// gauge contributions with the i lambda_dot contraction already absorbed, so
// dense() is K in the pop-pop corner, A12 above it, A21 below, and Kcoh + A2
// in the coherence corner.
struct GeneratorBlocks {
    double time = 0.0;
    RealMatrix K;
    Matrix Kcoh;  // K2 - i Delta
    Matrix A12, A21, A2;

    int dim() const { return static_cast<int>(K.rows()); }
    Matrix dense() const;
};

// Diagonal of the energy-gap matrix Delta_{mn,mn} = eps_m - eps_n over
// coherence pairs.
Vector delta_diagonal(const spectral::SpectralDecomposition& basis);

// Everything the block assembly and the oracle share at one evaluation time:
// the (possibly CD-corrected) Hamiltonian, its aligned spectral decomposition,
// the eigenstate-derivative table, and the projected dissipator.
struct EvalPoint {
    double time = 0.0;
    Matrix h_total;
    spectral::SpectralDecomposition basis;
    spectral::EigenDerivativeTable table;
    std::optional<thermo::ThermalDissipator> dissipator;

    const thermo::ThermalDissipator& diss() const { return *dissipator; }
};

// H(t), plus the counterdiabatic term lambda_dot . A when `with_cd` is set.
Matrix total_hamiltonian(const Protocol& path, double t, bool with_cd, double fd_step);

// Build the shared evaluation state. When `anchor` is given the basis is
// gauge-aligned to it (path continuity across integrator steps); otherwise
// the local Jacobi phases are kept. When `with_cd` is set everything (basis,
// projections, gaps, derivative table) derives from H + H_cd.
EvalPoint make_eval_point(const Protocol& path, double t, const thermo::DissipatorConfig& config,
                          bool with_cd, double fd_step,
                          const spectral::SpectralDecomposition* anchor = nullptr,
                          const Faults& faults = {});

GeneratorBlocks assemble_generator(const EvalPoint& ep, const Faults& faults = {});
GeneratorBlocks assemble_generator(const Protocol& path, double t,
                                   const thermo::DissipatorConfig& config, bool with_cd,
                                   double fd_step, const Faults& faults = {});

// Brute-force superoperator: -i[H,.] + D_beta[.] plus the eigenbasis-rotation
// commutator applied to each matrix unit, reshaped into (pop, coh) ordering.
Matrix dense_oracle(const EvalPoint& ep);
Matrix dense_oracle(const Protocol& path, double t, const thermo::DissipatorConfig& config,
                    bool with_cd, double fd_step);

// Blocks of the commutator map X -> -[G, X] in (pop, coh) coordinates, the
// gauge-coupling contribution of a derivative table G. `unitary_blocks` is
// the same projection for X -> -i[H_c, X] of a coefficient-space Hamiltonian,
// used by the cancellation checks.
struct CouplingBlocks {
    Matrix A12, A21, A2;
    Matrix pop_pop;
};
CouplingBlocks gauge_coupling_blocks(const Matrix& g_offdiag);
CouplingBlocks unitary_coupling_blocks(const Matrix& h_coeff);

} // namespace cdsim::liouville
