// thermo.cpp — KMS rate functions, energy-projected jumps, dissipator action,
// Gibbs states.

#include "cdsim/thermo.hpp"

#include <algorithm>
#include <cmath>

namespace cdsim::thermo {

RateFunction::RateFunction(double beta, std::vector<std::pair<double, double>> table,
                           Extrapolation extrapolation)
    : beta_(beta), extrapolation_(extrapolation) {
    require<Error>(beta >= 0.0, "RateFunction: beta must be nonnegative");
    require<Error>(!table.empty(), "RateFunction: empty rate table");
    std::sort(table.begin(), table.end());
    for (const auto& [gap, rate] : table) {
        require<Error>(gap >= 0.0, "RateFunction: gaps must be nonnegative");
        require<Error>(rate >= 0.0, "RateFunction: rates must be nonnegative");
        gaps_.push_back(gap);
        rates_.push_back(rate);
    }
    require<Error>(gaps_.front() <= 1e-12 * std::max(1.0, gaps_.back()),
                   "RateFunction: table must include a value at eps = 0");
    gaps_.front() = 0.0;
}

double RateFunction::positive_branch(double eps) const {
    if (eps >= gaps_.back()) {
        const double slack = 1e-9 * std::max(1.0, gaps_.back());
        if (eps <= gaps_.back() + slack) return rates_.back();
        switch (extrapolation_) {
            case Extrapolation::none:
                throw OutOfRange("RateFunction: gap " + std::to_string(eps) +
                                 " beyond tabulated range " + std::to_string(gaps_.back()));
            case Extrapolation::clamp:
                return rates_.back();
            case Extrapolation::linear: {
                const std::size_t n = gaps_.size();
                if (n == 1) return rates_.back();
                const double slope = (rates_[n - 1] - rates_[n - 2]) /
                                     (gaps_[n - 1] - gaps_[n - 2]);
                return std::max(0.0, rates_.back() + slope * (eps - gaps_.back()));
            }
        }
    }
    const auto hi = std::upper_bound(gaps_.begin(), gaps_.end(), eps);
    const std::size_t j = std::max<std::ptrdiff_t>(1, hi - gaps_.begin());
    const double w = (eps - gaps_[j - 1]) / (gaps_[j] - gaps_[j - 1]);
    return rates_[j - 1] + w * (rates_[j] - rates_[j - 1]);
}

double RateFunction::rate(double eps, const Faults& faults) const {
    if (eps >= 0.0) return positive_branch(eps);
    const double sign = faults.kms_sign ? +1.0 : -1.0;
    return std::exp(sign * beta_ * (-eps)) * positive_branch(-eps);
}

ProjectedChannel project_jump(const Matrix& L, const spectral::SpectralDecomposition& basis,
                              double gap_tol) {
    require<DimensionMismatch>(L.rows() == basis.dim() && L.cols() == basis.dim(),
                               "project_jump: dimension mismatch");
    require<Error>(max_abs(Matrix(L - L.adjoint())) < 1e-12,
                   "project_jump: jump operators must be Hermitian");
    const int n = basis.dim();
    const Matrix Lc = basis.vectors.adjoint() * L * basis.vectors;

    // Cluster the nonnegative gaps eps_m - eps_n, m >= n, within gap_tol.
    struct Bucket {
        double sum = 0.0;
        int count = 0;
        double key() const { return sum / count; }
    };
    std::vector<double> raw;
    for (int m = 0; m < n; ++m)
        for (int k = 0; k <= m; ++k) raw.push_back(basis.values(m) - basis.values(k));
    std::sort(raw.begin(), raw.end());
    std::vector<Bucket> buckets;
    for (double g : raw) {
        if (!buckets.empty() && g - buckets.back().key() <= gap_tol) {
            buckets.back().sum += g;
            buckets.back().count += 1;
        } else {
            buckets.push_back({g, 1});
        }
    }

    ProjectedChannel channel;
    channel.source = L;
    for (const Bucket& bucket : buckets) {
        ProjectedJump part;
        part.gap = bucket.key();
        part.op = Matrix::Zero(n, n);
        channel.parts.push_back(std::move(part));
    }
    // Element <eps_r| L |eps_c> belongs to the bucket at gap eps_c - eps_r.
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const double g = basis.values(c) - basis.values(r);
            if (g < -0.5 * gap_tol) continue;  // adjoint partner carries it
            std::size_t best = 0;
            double best_dist = std::abs(g - channel.parts[0].gap);
            for (std::size_t b = 1; b < channel.parts.size(); ++b) {
                const double dist = std::abs(g - channel.parts[b].gap);
                if (dist < best_dist) {
                    best_dist = dist;
                    best = b;
                }
            }
            channel.parts[best].op(r, c) = Lc(r, c);
        }
    }
    return channel;
}

double DissipatorConfig::beta() const {
    require<Error>(!channels.empty(), "DissipatorConfig: no jump channels");
    const double b = channels.front().rate.beta();
    for (const auto& ch : channels)
        require<Error>(ch.rate.beta() == b, "DissipatorConfig: mixed temperatures");
    return b;
}

ThermalDissipator::ThermalDissipator(const DissipatorConfig& config,
                                     spectral::SpectralDecomposition basis, const Faults& faults)
    : basis_(std::move(basis)), beta_(config.beta()) {
    const int n = basis_.dim();
    const double range = basis_.values(n - 1) - basis_.values(0);
    const double gap_tol = config.gap_tol_rel * std::max(range, 1e-300);

    for (const auto& ch : config.channels) {
        ProjectedChannel projected = project_jump(ch.op, basis_, gap_tol);
        for (const ProjectedJump& pj : projected.parts) {
            Part part;
            part.gap = pj.gap;
            part.op = pj.op;
            part.op_dag = pj.op.adjoint();
            part.decay_plus = part.op_dag * part.op;
            part.decay_minus = part.op * part.op_dag;
            part.rate_plus = ch.rate.rate(part.gap, faults);
            part.rate_minus = part.gap > 0.5 * gap_tol ? ch.rate.rate(-part.gap, faults) : 0.0;
            parts_.push_back(std::move(part));
        }
        jumps_.push_back(std::move(projected));
    }
}

Matrix ThermalDissipator::apply_coeff(const Matrix& rho_coeff) const {
    const int n = basis_.dim();
    require<DimensionMismatch>(rho_coeff.rows() == n && rho_coeff.cols() == n,
                               "apply_dissipator: dimension mismatch");
    Matrix out = Matrix::Zero(n, n);
    for (const Part& part : parts_) {
        if (part.rate_plus > 0.0) {
            out.noalias() += part.rate_plus *
                             (part.op * rho_coeff * part.op_dag -
                              0.5 * (part.decay_plus * rho_coeff + rho_coeff * part.decay_plus));
        }
        if (part.rate_minus > 0.0) {
            out.noalias() += part.rate_minus *
                             (part.op_dag * rho_coeff * part.op -
                              0.5 * (part.decay_minus * rho_coeff + rho_coeff * part.decay_minus));
        }
    }
    return out;
}

Matrix ThermalDissipator::apply(const Matrix& rho) const {
    const Matrix coeff = basis_.vectors.adjoint() * rho * basis_.vectors;
    return basis_.vectors * apply_coeff(coeff) * basis_.vectors.adjoint();
}

RealVector gibbs_populations(const RealVector& values, double beta) {
    const double floor = values.minCoeff();
    RealVector w = (-beta * (values.array() - floor)).exp();
    return w / w.sum();
}

Matrix gibbs_state(const spectral::SpectralDecomposition& basis, double beta) {
    require<Error>(beta >= 0.0, "gibbs_state: beta must be nonnegative");
    const RealVector w = gibbs_populations(basis.values, beta);
    return basis.vectors * w.cast<Complex>().asDiagonal() * basis.vectors.adjoint();
}

} // namespace cdsim::thermo
