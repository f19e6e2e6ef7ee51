// expansion.cpp — Rate-matrix spectral decomposition, reduced inverse, and the
// slow-driving expansion terms.

#include "cdsim/expansion.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cdsim/spectral.hpp"

namespace cdsim::expansion {

namespace {

// Stationary vector of K (zero column sums) normalized to unit entry sum,
// from the bordered linear system.
RealVector stationary_vector(const RealMatrix& K) {
    const int n = static_cast<int>(K.rows());
    RealMatrix M = K;
    M.row(n - 1).setOnes();
    RealVector rhs = RealVector::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::FullPivLU<RealMatrix> lu(M);
    require<NonSimpleKernel>(lu.isInvertible(), "rate_spectrum: kernel is not simple");
    return lu.solve(rhs);
}

struct Eigensystem {
    Vector values;
    Matrix right;
    Matrix left;  // rows
};

// K with detailed balance w.r.t. pi is similar to a symmetric matrix through
// D^{1/2}; Jacobi on that transform gives the numerically safest spectrum.
Eigensystem detailed_balance_route(const RealMatrix& K, const RealVector& pi) {
    const int n = static_cast<int>(K.rows());
    RealVector sqrt_pi = pi.cwiseSqrt();
    Matrix S(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) S(i, j) = Complex(K(i, j) * sqrt_pi(j) / sqrt_pi(i), 0.0);
    auto [values, vectors] = spectral::jacobi_eigensystem(S);

    Eigensystem sys;
    sys.values = values.cast<Complex>();
    sys.right.resize(n, n);
    sys.left.resize(n, n);
    for (int k = 0; k < n; ++k) {
        sys.right.col(k) = sqrt_pi.cast<Complex>().cwiseProduct(vectors.col(k));
        sys.left.row(k) = vectors.col(k).cwiseQuotient(sqrt_pi.cast<Complex>()).transpose();
    }
    return sys;
}

Eigensystem general_route(const RealMatrix& K) {
    Eigen::EigenSolver<RealMatrix> solver(K);
    require<Error>(solver.info() == Eigen::Success, "rate_spectrum: eigensolver failed");
    Eigensystem sys;
    sys.values = solver.eigenvalues();
    sys.right = solver.eigenvectors();
    sys.left = sys.right.inverse();
    return sys;
}

} // namespace

double RateSpectrum::biorthonormality_error() const {
    Matrix gram = left * right;
    return max_abs(Matrix(gram - Matrix::Identity(dim(), dim())));
}

double RateSpectrum::completeness_error() const {
    Matrix resolution = right * left;
    return max_abs(Matrix(resolution - Matrix::Identity(dim(), dim())));
}

RateSpectrum rate_spectrum(const RealMatrix& K) {
    require<DimensionMismatch>(K.rows() == K.cols(), "rate_spectrum: matrix must be square");
    const int n = static_cast<int>(K.rows());
    const double norm = K.cwiseAbs().maxCoeff();
    require<NonSimpleKernel>(norm > 0.0, "rate_spectrum: zero matrix has no simple kernel");
    for (int c = 0; c < n; ++c)
        require<Error>(std::abs(K.col(c).sum()) <= 1e-9 * norm,
                       "rate_spectrum: column sums must vanish");

    RealVector pi = stationary_vector(K);

    bool balanced = pi.minCoeff() > 0.0;
    if (balanced) {
        const double scale = norm * pi.maxCoeff();
        for (int i = 0; i < n && balanced; ++i)
            for (int j = 0; j < n && balanced; ++j)
                if (std::abs(K(i, j) * pi(j) - K(j, i) * pi(i)) > 1e-10 * scale) balanced = false;
    }

    Eigensystem sys = balanced ? detailed_balance_route(K, pi) : general_route(K);

    // Zero mode in front, remaining modes by ascending modulus.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(sys.values(a)) < std::abs(sys.values(b));
    });
    const double zero_tol = 1e-10 * norm;
    require<NonSimpleKernel>(std::abs(sys.values(order[0])) < zero_tol,
                             "rate_spectrum: no zero eigenvalue found");
    require<NonSimpleKernel>(n < 2 || std::abs(sys.values(order[1])) >= zero_tol,
                             "rate_spectrum: zero eigenvalue is not simple");

    RateSpectrum spec;
    spec.eigenvalues.resize(n);
    spec.right.resize(n, n);
    spec.left.resize(n, n);
    for (int k = 0; k < n; ++k) {
        spec.eigenvalues(k) = sys.values(order[k]);
        spec.right.col(k) = sys.right.col(order[k]);
        spec.left.row(k) = sys.left.row(order[k]);
    }
    spec.eigenvalues(0) = 0.0;

    // Perron normalization: unit entry sum for |R_0>, so <L_0| approaches
    // (1, ..., 1); the pair is rescaled jointly to stay biorthonormal.
    const Complex sum = spec.right.col(0).sum();
    require<NonSimpleKernel>(std::abs(sum) > 1e-12, "rate_spectrum: zero-mode sum vanishes");
    spec.right.col(0) /= sum;
    spec.left.row(0) *= sum;
    return spec;
}

Matrix reduced_inverse(const RateSpectrum& spectrum) {
    const int n = spectrum.dim();
    Matrix out = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k)
        out += (1.0 / spectrum.eigenvalues(k)) * spectrum.right.col(k) * spectrum.left.row(k);
    return out;
}

RealVector ExpansionResult::pop() const {
    RealVector sum = pop_terms.front();
    for (std::size_t k = 1; k < pop_terms.size(); ++k) sum += pop_terms[k];
    return sum;
}

Vector ExpansionResult::coh() const {
    Vector sum = coh_terms.front();
    for (std::size_t k = 1; k < coh_terms.size(); ++k) sum += coh_terms[k];
    return sum;
}

ExpansionResult first_order(const Protocol& path, double t,
                            const thermo::DissipatorConfig& config, bool with_cd,
                            double fd_step) {
    const liouville::EvalPoint ep = liouville::make_eval_point(path, t, config, false, fd_step);
    const liouville::GeneratorBlocks blocks = liouville::assemble_generator(ep);
    const RateSpectrum spec = rate_spectrum(blocks.K);

    auto gibbs_pop_at = [&](double s) {
        const liouville::EvalPoint eps =
            liouville::make_eval_point(path, s, config, false, fd_step);
        const RateSpectrum rs = rate_spectrum(liouville::build_K(eps.diss()));
        return RealVector(rs.right.col(0).real());
    };
    const RealVector r0 = spec.right.col(0).real();
    const RealVector dr0 = (gibbs_pop_at(t + fd_step) - gibbs_pop_at(t - fd_step)) /
                           (2.0 * fd_step);
    const RealVector pop1 = (reduced_inverse(spec) * dr0.cast<Complex>()).real();

    const Vector rhs = blocks.A21 * r0.cast<Complex>();
    Eigen::JacobiSVD<Matrix> svd(blocks.Kcoh, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    require<SingularCoherenceBlock>(smax > 0.0 && smin > 1e-12 * smax,
                                    "first_order: coherence block is singular");
    Vector coh1 = -svd.solve(rhs);
    if (with_cd) {
        const Vector delta = liouville::delta_diagonal(ep.basis);
        require<SingularCoherenceBlock>(delta.cwiseAbs().minCoeff() > 0.0,
                                        "first_order: vanishing gap in Delta");
        // Resolvent replacement (K2 - i Delta)^{-1} -> ... - (-i Delta)^{-1};
        // the population term is unchanged.
        coh1 += rhs.cwiseQuotient(-kImag * delta);
    }

    ExpansionResult result;
    result.order = 1;
    result.cd_applied = with_cd;
    result.pop_terms = {r0, pop1};
    result.coh_terms = {Vector::Zero(coh1.size()), coh1};
    result.basis = ep.basis;
    return result;
}

RealMatrix effective_population_generator(const liouville::GeneratorBlocks& blocks) {
    Eigen::JacobiSVD<Matrix> svd(blocks.Kcoh, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    require<SingularCoherenceBlock>(smax > 0.0 && smin > 1e-12 * smax,
                                    "effective_population_generator: singular coherence block");
    const Matrix correction = -blocks.A12 * svd.solve(blocks.A21);
    const double imag_leak = correction.imag().cwiseAbs().maxCoeff();
    const double scale = std::max(1e-300, max_abs(correction));
    require<Error>(imag_leak <= 1e-9 * std::max(1.0, scale),
                   "effective_population_generator: correction is not real");
    return blocks.K + correction.real();
}

} // namespace cdsim::expansion
