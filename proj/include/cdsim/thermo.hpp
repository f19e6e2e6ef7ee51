// thermo.hpp — Thermodynamically consistent dissipator: energy-projected jump
// operators, KMS-closed rate functions, the dissipator action, and the
// instantaneous Gibbs state.

#pragma once

#include <utility>
#include <vector>

#include "cdsim/spectral.hpp"
#include "cdsim/types.hpp"

namespace cdsim::thermo {

// Rate function gamma(eps) with the positive branch tabulated as (gap, rate)
// pairs, linearly interpolated. The negative branch is never stored: it is
// always derived through the KMS closure gamma(-eps) = e^{-beta eps} gamma(eps).
class RateFunction {
public:
    enum class Extrapolation { none, linear, clamp };

    // `table` must contain an entry at gap 0; gaps and rates must be >= 0.
    RateFunction(double beta, std::vector<std::pair<double, double>> table,
                 Extrapolation extrapolation = Extrapolation::none);

    double beta() const { return beta_; }
    double max_gap() const { return gaps_.back(); }

    // Throws OutOfRange when |eps| exceeds the table and no extrapolation
    // rule is configured.
    double rate(double eps) const { return rate(eps, Faults{}); }
    double rate(double eps, const Faults& faults) const;

private:
    double positive_branch(double eps) const;

    double beta_;
    std::vector<double> gaps_, rates_;
    Extrapolation extrapolation_;
};

// L^eps for one nonnegative gap bucket, stored in the eigenbasis of the
// projection Hamiltonian. The negative-gap partner is the adjoint.
struct ProjectedJump {
    double gap = 0.0;
    Matrix op;
};

// One source jump operator with its nonnegative-gap projections.
struct ProjectedChannel {
    Matrix source;
    std::vector<ProjectedJump> parts;
};

using ProjectedJumpSet = std::vector<ProjectedChannel>;

// Bucket the eigenbasis elements of Hermitian L by energy gap
// eps = eps_m - eps_n >= 0; gaps closer than gap_tol merge into one bucket
// keyed by their mean. The zero bucket is always present.
ProjectedChannel project_jump(const Matrix& L, const spectral::SpectralDecomposition& basis,
                              double gap_tol);

// One jump operator plus the rate function weighting its projections.
struct JumpChannel {
    Matrix op;
    RateFunction rate;
};

struct DissipatorConfig {
    std::vector<JumpChannel> channels;
    double gap_tol_rel = 1e-8;

    double beta() const;
};

// Dissipator projected onto one spectral decomposition, with per-bucket rates
// evaluated once. Applying it to the Gibbs state of `basis()` gives zero.
class ThermalDissipator {
public:
    // One nonnegative gap bucket of one channel with its evaluated rates;
    // gap > 0 buckets act through both the stored operator (rate_plus) and
    // its adjoint (rate_minus, KMS-suppressed).
    struct Part {
        double gap;
        Matrix op, op_dag;
        Matrix decay_plus, decay_minus;  // L^dag L and L L^dag kernels
        double rate_plus, rate_minus;
    };

    ThermalDissipator(const DissipatorConfig& config, spectral::SpectralDecomposition basis,
                      const Faults& faults = {});

    const spectral::SpectralDecomposition& basis() const { return basis_; }
    double beta() const { return beta_; }
    const ProjectedJumpSet& jumps() const { return jumps_; }
    const std::vector<Part>& parts() const { return parts_; }

    // Action on a coefficient matrix expressed in `basis()`.
    Matrix apply_coeff(const Matrix& rho_coeff) const;
    // Action on a computational-basis operator. Hermitian and traceless for
    // Hermitian input.
    Matrix apply(const Matrix& rho) const;

private:
    spectral::SpectralDecomposition basis_;
    ProjectedJumpSet jumps_;
    std::vector<Part> parts_;
    double beta_;
};

inline Matrix apply_dissipator(const ThermalDissipator& d, const Matrix& rho) {
    return d.apply(rho);
}

// Boltzmann populations e^{-beta eps_n} / Z for the given eigenvalues.
RealVector gibbs_populations(const RealVector& values, double beta);

// e^{-beta H} / Z assembled in the eigenbasis; trace is exactly one.
Matrix gibbs_state(const spectral::SpectralDecomposition& basis, double beta);

} // namespace cdsim::thermo
