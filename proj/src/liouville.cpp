// liouville.cpp — (pop, coh) vectorization, the block generator, and the
// brute-force superoperator oracle.

#include "cdsim/liouville.hpp"

#include <cmath>
#include <functional>

namespace cdsim::liouville {

BlockIndex::BlockIndex(int dim_) : dim(dim_), pop_size(dim_), coh_size(dim_ * (dim_ - 1)) {
    require<Error>(dim >= 2, "BlockIndex: dimension must be >= 2");
}

int BlockIndex::coh_index(int m, int n) const {
    return m * (dim - 1) + (n < m ? n : n - 1);
}

std::pair<int, int> BlockIndex::coh_pair(int k) const {
    const int m = k / (dim - 1);
    int n = k % (dim - 1);
    if (n >= m) ++n;
    return {m, n};
}

StateVec StateVec::zero(int dim) {
    StateVec s;
    s.dim = dim;
    s.pop = Vector::Zero(dim);
    s.coh = Vector::Zero(dim * (dim - 1));
    return s;
}

Vector StateVec::flat() const {
    Vector v(pop.size() + coh.size());
    v << pop, coh;
    return v;
}

StateVec StateVec::from_flat(int dim, const Vector& v) {
    require<DimensionMismatch>(v.size() == dim * dim, "StateVec: flat size mismatch");
    StateVec s;
    s.dim = dim;
    s.pop = v.head(dim);
    s.coh = v.tail(dim * (dim - 1));
    return s;
}

double StateVec::trace_error() const {
    return std::abs(pop.sum() - Complex(1.0));
}

double StateVec::conjugate_pairing_error() const {
    const BlockIndex idx(dim);
    double worst = 0.0;
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n) {
            if (m == n) continue;
            const Complex a = coh(idx.coh_index(m, n));
            const Complex b = coh(idx.coh_index(n, m));
            worst = std::max(worst, std::abs(a - std::conj(b)));
        }
    for (int m = 0; m < dim; ++m) worst = std::max(worst, std::abs(pop(m).imag()));
    return worst;
}

StateVec vectorize(const Matrix& rho, const spectral::SpectralDecomposition& basis) {
    require<DimensionMismatch>(rho.rows() == basis.dim() && rho.cols() == basis.dim(),
                               "vectorize: dimension mismatch");
    return state_from_coeff(basis.vectors.adjoint() * rho * basis.vectors);
}

Matrix devectorize(const StateVec& state, const spectral::SpectralDecomposition& basis) {
    require<DimensionMismatch>(state.dim == basis.dim(), "devectorize: dimension mismatch");
    return basis.vectors * coeff_from_state(state) * basis.vectors.adjoint();
}

Matrix coeff_from_state(const StateVec& state) {
    const int n = state.dim;
    const BlockIndex idx(n);
    Matrix coeff(n, n);
    for (int m = 0; m < n; ++m) {
        coeff(m, m) = state.pop(m);
        for (int k = 0; k < n; ++k)
            if (k != m) coeff(m, k) = state.coh(idx.coh_index(m, k));
    }
    return coeff;
}

StateVec state_from_coeff(const Matrix& coeff) {
    const int n = static_cast<int>(coeff.rows());
    const BlockIndex idx(n);
    StateVec s = StateVec::zero(n);
    for (int m = 0; m < n; ++m) {
        s.pop(m) = coeff(m, m);
        for (int k = 0; k < n; ++k)
            if (k != m) s.coh(idx.coh_index(m, k)) = coeff(m, k);
    }
    return s;
}

RealMatrix build_K(const thermo::ThermalDissipator& d) {
    const int n = d.basis().dim();
    RealMatrix K = RealMatrix::Zero(n, n);
    for (const auto& part : d.parts()) {
        for (int m = 0; m < n; ++m) {
            for (int k = 0; k < n; ++k) {
                if (m == k) continue;
                K(m, k) += part.rate_plus * std::norm(part.op(m, k));
                K(m, k) += part.rate_minus * std::norm(part.op_dag(m, k));
            }
        }
    }
    for (int k = 0; k < n; ++k) {
        K(k, k) = 0.0;
        K(k, k) = -K.col(k).sum();
    }
    return K;
}

Matrix GeneratorBlocks::dense() const {
    const int n = dim();
    const BlockIndex idx(n);
    Matrix S(n * n, n * n);
    S.topLeftCorner(idx.pop_size, idx.pop_size) = K.cast<Complex>();
    S.topRightCorner(idx.pop_size, idx.coh_size) = A12;
    S.bottomLeftCorner(idx.coh_size, idx.pop_size) = A21;
    S.bottomRightCorner(idx.coh_size, idx.coh_size) = Kcoh + A2;
    return S;
}

Vector delta_diagonal(const spectral::SpectralDecomposition& basis) {
    const BlockIndex idx(basis.dim());
    Vector delta(idx.coh_size);
    for (int k = 0; k < idx.coh_size; ++k) {
        const auto [m, n] = idx.coh_pair(k);
        delta(k) = Complex(basis.values(m) - basis.values(n), 0.0);
    }
    return delta;
}

namespace {

// Slice the superoperator of a coefficient-space map into (pop, coh) blocks
// by pushing every matrix unit through it.
CouplingBlocks project_map(const std::function<Matrix(const Matrix&)>& map, int dim) {
    const BlockIndex idx(dim);
    CouplingBlocks out;
    out.A12 = Matrix::Zero(idx.pop_size, idx.coh_size);
    out.A21 = Matrix::Zero(idx.coh_size, idx.pop_size);
    out.A2 = Matrix::Zero(idx.coh_size, idx.coh_size);
    out.pop_pop = Matrix::Zero(idx.pop_size, idx.pop_size);

    Matrix unit = Matrix::Zero(dim, dim);
    auto scatter = [&](const Matrix& image, int pop_col, int coh_col) {
        for (int m = 0; m < dim; ++m) {
            if (pop_col >= 0) out.pop_pop(m, pop_col) = image(m, m);
            if (coh_col >= 0) out.A12(m, coh_col) = image(m, m);
        }
        for (int k = 0; k < idx.coh_size; ++k) {
            const auto [m, n] = idx.coh_pair(k);
            if (pop_col >= 0) out.A21(k, pop_col) = image(m, n);
            if (coh_col >= 0) out.A2(k, coh_col) = image(m, n);
        }
    };

    for (int p = 0; p < dim; ++p) {
        unit(p, p) = 1.0;
        scatter(map(unit), p, -1);
        unit(p, p) = 0.0;
    }
    for (int k = 0; k < idx.coh_size; ++k) {
        const auto [m, n] = idx.coh_pair(k);
        unit(m, n) = 1.0;
        scatter(map(unit), -1, k);
        unit(m, n) = 0.0;
    }
    return out;
}

} // namespace

CouplingBlocks gauge_coupling_blocks(const Matrix& g_offdiag) {
    const int n = static_cast<int>(g_offdiag.rows());
    return project_map([&](const Matrix& x) { return Matrix(x * g_offdiag - g_offdiag * x); },
                       n);
}

CouplingBlocks unitary_coupling_blocks(const Matrix& h_coeff) {
    const int n = static_cast<int>(h_coeff.rows());
    return project_map(
        [&](const Matrix& x) { return Matrix(-kImag * (h_coeff * x - x * h_coeff)); }, n);
}

Matrix total_hamiltonian(const Protocol& path, double t, bool with_cd, double fd_step) {
    Matrix H = path.hamiltonian(t);
    if (!with_cd) return H;
    const spectral::SpectralDecomposition basis = spectral::eigendecompose(H, t);
    const spectral::EigenDerivativeTable table =
        spectral::eigenstate_derivative([&](double s) { return path.hamiltonian(s); }, basis,
                                        fd_step);
    // lambda_dot . A = i sum_{m != n} |eps_m><eps_m|d_t eps_n><eps_n|
    const Matrix h_cd =
        basis.vectors * (kImag * table.gauge_part()) * basis.vectors.adjoint();
    return H + h_cd;
}

EvalPoint make_eval_point(const Protocol& path, double t, const thermo::DissipatorConfig& config,
                          bool with_cd, double fd_step,
                          const spectral::SpectralDecomposition* anchor, const Faults& faults) {
    EvalPoint ep;
    ep.time = t;
    ep.h_total = total_hamiltonian(path, t, with_cd, fd_step);
    spectral::SpectralDecomposition basis = spectral::eigendecompose(ep.h_total, t);
    ep.basis = anchor ? spectral::gauge_align(*anchor, basis) : std::move(basis);
    ep.table = spectral::eigenstate_derivative(
        [&](double s) { return total_hamiltonian(path, s, with_cd, fd_step); }, ep.basis,
        fd_step);
    ep.dissipator.emplace(config, ep.basis, faults);
    return ep;
}

GeneratorBlocks assemble_generator(const EvalPoint& ep, const Faults& faults) {
    const int n = ep.basis.dim();
    const BlockIndex idx(n);

    GeneratorBlocks blocks;
    blocks.time = ep.time;
    blocks.K = build_K(ep.diss());

    // K2 is never hand-coded: it is the coherence-coherence block of the
    // dissipator map, so it stays consistent with the jump set by
    // construction.
    Matrix K2(idx.coh_size, idx.coh_size);
    Matrix unit = Matrix::Zero(n, n);
    for (int col = 0; col < idx.coh_size; ++col) {
        const auto [m, k] = idx.coh_pair(col);
        unit(m, k) = 1.0;
        const Matrix image = ep.diss().apply_coeff(unit);
        unit(m, k) = 0.0;
        for (int row = 0; row < idx.coh_size; ++row) {
            const auto [p, q] = idx.coh_pair(row);
            K2(row, col) = image(p, q);
        }
    }

    const double delta_sign = faults.delta_sign ? -1.0 : 1.0;
    blocks.Kcoh = K2;
    blocks.Kcoh -= (kImag * delta_sign) * delta_diagonal(ep.basis).asDiagonal().toDenseMatrix();

    const double gauge_sign = faults.gauge_sign ? -1.0 : 1.0;
    CouplingBlocks gauge = gauge_coupling_blocks(ep.table.gauge_part());
    blocks.A12 = gauge_sign * gauge.A12;
    blocks.A21 = gauge_sign * gauge.A21;
    blocks.A2 = gauge_sign * gauge.A2;
    return blocks;
}

GeneratorBlocks assemble_generator(const Protocol& path, double t,
                                   const thermo::DissipatorConfig& config, bool with_cd,
                                   double fd_step, const Faults& faults) {
    return assemble_generator(make_eval_point(path, t, config, with_cd, fd_step, nullptr, faults),
                              faults);
}

Matrix dense_oracle(const EvalPoint& ep) {
    const int n = ep.basis.dim();
    const BlockIndex idx(n);
    const Matrix h_coeff = ep.basis.vectors.adjoint() * ep.h_total * ep.basis.vectors;
    const Matrix g = ep.table.gauge_part();

    auto full_map = [&](const Matrix& x) {
        Matrix image = -kImag * (h_coeff * x - x * h_coeff);
        image += ep.diss().apply_coeff(x);
        image -= g * x - x * g;
        return image;
    };

    Matrix S(n * n, n * n);
    Matrix unit = Matrix::Zero(n, n);
    auto fill_column = [&](int col) {
        const Matrix image = full_map(unit);
        for (int m = 0; m < n; ++m) S(m, col) = image(m, m);
        for (int row = 0; row < idx.coh_size; ++row) {
            const auto [p, q] = idx.coh_pair(row);
            S(idx.pop_size + row, col) = image(p, q);
        }
    };
    for (int p = 0; p < n; ++p) {
        unit(p, p) = 1.0;
        fill_column(p);
        unit(p, p) = 0.0;
    }
    for (int k = 0; k < idx.coh_size; ++k) {
        const auto [m, q] = idx.coh_pair(k);
        unit(m, q) = 1.0;
        fill_column(idx.pop_size + k);
        unit(m, q) = 0.0;
    }
    return S;
}

Matrix dense_oracle(const Protocol& path, double t, const thermo::DissipatorConfig& config,
                    bool with_cd, double fd_step) {
    return dense_oracle(make_eval_point(path, t, config, with_cd, fd_step));
}

} // namespace cdsim::liouville
