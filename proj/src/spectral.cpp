// spectral.cpp — Jacobi eigendecomposition, gauge tracking, eigenstate
// derivatives, trace distance.

#include "cdsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "cdsim/protocol.hpp"

namespace cdsim::spectral {

namespace {

double offdiag_norm(const Matrix& A) {
    const int n = static_cast<int>(A.rows());
    double sum = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) sum += std::norm(A(p, q));
    return std::sqrt(2.0 * sum);
}

} // namespace

HermitianOperator::HermitianOperator(Matrix entries) : entries_(std::move(entries)) {
    require<DimensionMismatch>(entries_.rows() == entries_.cols(),
                               "HermitianOperator: matrix must be square");
    require<Error>(entries_.rows() >= 2, "HermitianOperator: dimension must be >= 2");
    const double dev = max_abs(Matrix(entries_ - entries_.adjoint()));
    require<Error>(dev < 1e-12, "HermitianOperator: not Hermitian, deviation " +
                                    std::to_string(dev));
}

double SpectralDecomposition::reconstruction_error(const Matrix& H) const {
    Matrix rebuilt = vectors * values.asDiagonal().toDenseMatrix().cast<Complex>() *
                     vectors.adjoint();
    return max_abs(Matrix(rebuilt - H));
}

double SpectralDecomposition::orthonormality_error() const {
    Matrix gram = vectors.adjoint() * vectors;
    return max_abs(Matrix(gram - Matrix::Identity(dim(), dim())));
}

double EigenDerivativeTable::anti_hermiticity_error() const {
    return max_abs(Matrix(entries + entries.adjoint()));
}

double EigenDerivativeTable::max_diagonal() const {
    return entries.diagonal().cwiseAbs().maxCoeff();
}

Matrix EigenDerivativeTable::offdiagonal() const {
    Matrix g = entries;
    g.diagonal().setZero();
    return g;
}

Matrix EigenDerivativeTable::gauge_part() const {
    const Matrix g = offdiagonal();
    return 0.5 * (g - g.adjoint());
}

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
    require<DimensionMismatch>(entries_.rows() == entries_.cols(),
                               "DensityMatrix: matrix must be square");
    const double herm = max_abs(Matrix(entries_ - entries_.adjoint()));
    require<Error>(herm < 1e-10, "DensityMatrix: not Hermitian");
    const double tr_err = std::abs(entries_.trace() - Complex(1.0));
    require<Error>(tr_err < 1e-9, "DensityMatrix: trace differs from one by " +
                                      std::to_string(tr_err));
    auto [values, vectors] = jacobi_eigensystem(entries_);
    require<Error>(values.minCoeff() >= -1e-9, "DensityMatrix: negative eigenvalue " +
                                                   std::to_string(values.minCoeff()));
}

std::pair<RealVector, Matrix> jacobi_eigensystem(const Matrix& H) {
    require<DimensionMismatch>(H.rows() == H.cols(), "jacobi: matrix must be square");
    const int n = static_cast<int>(H.rows());
    Matrix A = hermitize(H);
    Matrix V = Matrix::Identity(n, n);

    const double scale = std::max(1.0, A.norm());
    const double tol = 1e-15 * scale;
    const int max_sweeps = 100;

    int sweep = 0;
    while (offdiag_norm(A) > tol) {
        require<Error>(++sweep <= max_sweeps, "jacobi: no convergence");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = std::abs(A(p, q));
                if (apq <= 1e-2 * tol / n) continue;
                const Complex phase = A(p, q) / apq;
                const double app = A(p, p).real();
                const double aqq = A(q, q).real();
                // Angle of the phase-reduced real rotation.
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::hypot(1.0, tau));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = t * c;
                // J columns: p -> (c, -s conj(phase)); q -> (s phase_adj ...).
                // Apply A <- J^H A J and V <- V J on the (p, q) plane with
                // J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
                const Complex jpq = s;
                const Complex jqq = c * std::conj(phase);
                const Complex jpp = c;
                const Complex jqp = -s * std::conj(phase);
                for (int i = 0; i < n; ++i) {
                    const Complex aip = A(i, p), aiq = A(i, q);
                    A(i, p) = aip * jpp + aiq * jqp;
                    A(i, q) = aip * jpq + aiq * jqq;
                }
                for (int i = 0; i < n; ++i) {
                    const Complex api = A(p, i), aqi = A(q, i);
                    A(p, i) = std::conj(jpp) * api + std::conj(jqp) * aqi;
                    A(q, i) = std::conj(jpq) * api + std::conj(jqq) * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    const Complex vip = V(i, p), viq = V(i, q);
                    V(i, p) = vip * jpp + viq * jqp;
                    V(i, q) = vip * jpq + viq * jqq;
                }
                A(p, q) = 0.0;
                A(q, p) = 0.0;
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return A(a, a).real() < A(b, b).real(); });

    RealVector values(n);
    Matrix vectors(n, n);
    for (int k = 0; k < n; ++k) {
        values(k) = A(order[k], order[k]).real();
        vectors.col(k) = V.col(order[k]);
    }
    return {values, vectors};
}

SpectralDecomposition eigendecompose(const HermitianOperator& H, double time,
                                     double degeneracy_tol_rel) {
    auto [values, vectors] = jacobi_eigensystem(H.entries());
    const int n = static_cast<int>(values.size());
    const double range = values(n - 1) - values(0);
    double min_gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k + 1 < n; ++k) min_gap = std::min(min_gap, values(k + 1) - values(k));
    require<DegenerateSpectrum>(min_gap > degeneracy_tol_rel * range,
                                "eigendecompose: spectral gap " + std::to_string(min_gap) +
                                    " below tolerance");
    return SpectralDecomposition{std::move(values), std::move(vectors), time};
}

SpectralDecomposition eigendecompose(const Matrix& H, double time, double degeneracy_tol_rel) {
    return eigendecompose(HermitianOperator(H), time, degeneracy_tol_rel);
}

SpectralDecomposition gauge_align(const SpectralDecomposition& prev,
                                  const SpectralDecomposition& cur) {
    require<DimensionMismatch>(prev.dim() == cur.dim(), "gauge_align: dimension mismatch");
    const int n = cur.dim();
    const Matrix overlap = prev.vectors.adjoint() * cur.vectors;

    SpectralDecomposition out;
    out.time = cur.time;
    out.values.resize(n);
    out.vectors.resize(n, n);
    std::vector<bool> used(n, false);
    for (int col = 0; col < n; ++col) {
        int best = 0;
        double best_mod = 0.0;
        for (int row = 0; row < n; ++row) {
            const double mod = std::abs(overlap(row, col));
            if (mod > best_mod) {
                best_mod = mod;
                best = row;
            }
        }
        require<PathDiscontinuity>(best_mod > 0.5,
                                   "gauge_align: overlap modulus " + std::to_string(best_mod) +
                                       " too small; path step too large");
        require<PathDiscontinuity>(!used[best], "gauge_align: ambiguous eigenvector matching");
        used[best] = true;
        const Complex phase = overlap(best, col) / best_mod;
        out.values(best) = cur.values(col);
        out.vectors.col(best) = cur.vectors.col(col) / phase;
    }
    return out;
}

EigenDerivativeTable eigenstate_derivative(const std::function<Matrix(double)>& hamiltonian,
                                           const SpectralDecomposition& at, double fd_step) {
    require<Error>(fd_step > 0.0, "eigenstate_derivative: fd_step must be positive");
    const double t = at.time;
    const SpectralDecomposition minus =
        gauge_align(at, eigendecompose(hamiltonian(t - fd_step), t - fd_step));
    const SpectralDecomposition plus =
        gauge_align(at, eigendecompose(hamiltonian(t + fd_step), t + fd_step));
    Matrix diff = (plus.vectors - minus.vectors) / (2.0 * fd_step);
    return EigenDerivativeTable{at.vectors.adjoint() * diff};
}

EigenDerivativeTable eigenstate_derivative(const Protocol& path, double t, double fd_step) {
    const SpectralDecomposition base = eigendecompose(path.hamiltonian(t), t);
    return eigenstate_derivative([&](double s) { return path.hamiltonian(s); }, base, fd_step);
}

double trace_distance(const Matrix& a, const Matrix& b) {
    require<DimensionMismatch>(a.rows() == b.rows() && a.cols() == b.cols(),
                               "trace_distance: dimension mismatch");
    auto [values, vectors] = jacobi_eigensystem(a - b);
    return 0.5 * values.cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    return trace_distance(a.entries(), b.entries());
}

} // namespace cdsim::spectral
