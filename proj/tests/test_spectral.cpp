#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "cdsim/protocol.hpp"
#include "cdsim/spectral.hpp"
#include "cdsim/util.hpp"

using namespace cdsim;
using namespace cdsim::spectral;

namespace {
constexpr double kPi = std::numbers::pi;

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}
} // namespace

TEST_SUITE("spectral") {

TEST_CASE("eigendecompose diagonal sigma_z") {
    const auto dec = eigendecompose(Matrix(0.5 * pauli_z()));
    CHECK(dec.values(0) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(dec.values(1) == doctest::Approx(0.5).epsilon(1e-14));
    // Computational basis up to phase.
    CHECK(std::abs(dec.vectors(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(dec.vectors(0, 1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigendecompose Bloch form has eigenvalues -h/2, +h/2") {
    for (const double theta : {0.3, 1.1, 2.7}) {
        for (const double phi : {0.0, 1.9, 4.4}) {
            const double h = 1.7;
            const auto dec = eigendecompose(bloch_matrix(h, theta, phi));
            CHECK(dec.values(0) == doctest::Approx(-0.5 * h).epsilon(1e-13));
            CHECK(dec.values(1) == doctest::Approx(0.5 * h).epsilon(1e-13));
        }
    }
}

TEST_CASE("eigendecompose identity-shifted sigma_z") {
    Matrix H(2, 2);
    H << 2.0, 0.0, 0.0, 0.0;
    const auto dec = eigendecompose(H);
    CHECK(dec.values(0) == doctest::Approx(0.0));
    CHECK(dec.values(1) == doctest::Approx(2.0));
}

TEST_CASE("eigendecompose rejects degenerate spectra") {
    CHECK_THROWS_AS(eigendecompose(Matrix(Matrix::Identity(2, 2))), DegenerateSpectrum);
}

TEST_CASE("reconstruction and orthonormality on random Hermitian matrices") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 2 + trial % 7;
        const Matrix H = util::random_hamiltonian(dim, rng);
        const auto dec = eigendecompose(H);
        CHECK(dec.reconstruction_error(H) < 1e-10);
        CHECK(dec.orthonormality_error() < 1e-10);
        for (int k = 0; k + 1 < dim; ++k) CHECK(dec.values(k) < dec.values(k + 1));
    }
}

TEST_CASE("HermitianOperator rejects non-Hermitian input") {
    Matrix M(2, 2);
    M << 1.0, Complex(0.0, 1e-6), 0.0, -1.0;
    CHECK_THROWS_AS(HermitianOperator{M}, Error);
}

TEST_CASE("gauge_align identity case") {
    const auto dec = eigendecompose(bloch_matrix(1.0, 0.7, 0.3));
    const auto aligned = gauge_align(dec, dec);
    CHECK(max_abs(Matrix(aligned.vectors - dec.vectors)) < 1e-14);
}

TEST_CASE("gauge_align removes a pure phase") {
    const auto dec = eigendecompose(bloch_matrix(1.0, 0.7, 0.3));
    SpectralDecomposition rotated = dec;
    rotated.vectors.col(0) *= std::polar(1.0, kPi / 3.0);
    const auto aligned = gauge_align(dec, rotated);
    const Complex overlap = dec.vectors.col(0).dot(aligned.vectors.col(0));
    CHECK(overlap.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(overlap.imag()) < 1e-12);
}

TEST_CASE("gauge_align is idempotent") {
    const auto prev = eigendecompose(bloch_matrix(1.0, 0.7, 0.3));
    const auto cur = eigendecompose(bloch_matrix(1.0, 0.72, 0.35));
    const auto once = gauge_align(prev, cur);
    const auto twice = gauge_align(prev, once);
    CHECK(max_abs(Matrix(twice.vectors - once.vectors)) < 1e-13);
}

TEST_CASE("gauge_align rejects discontinuous paths") {
    const auto a = eigendecompose(bloch_matrix(1.0, 0.1, 0.0));
    const auto b = eigendecompose(bloch_matrix(1.0, 0.1 + kPi / 2.0, 0.0));
    CHECK_THROWS_AS(gauge_align(a, b), PathDiscontinuity);
}

TEST_CASE("eigenstate_derivative vanishes on a constant path") {
    const FixedProtocol path(bloch_matrix(1.0, 0.9, 0.4), 1.0);
    const auto table = eigenstate_derivative(path, 0.3, 1e-4);
    CHECK(max_abs(table.entries) < 1e-9);
}

TEST_CASE("eigenstate_derivative matches the analytic p1 coupling") {
    const double omega = 1.0;
    const auto path = BlochProtocol::p1(1.0, omega);
    const auto table = eigenstate_derivative(path, 0.8, 1e-4 * path.period());
    // |<eps_2|d_t eps_1>| = (omega/2) sin(pi/4)
    const double expected = 0.5 * omega * std::sin(kPi / 4.0);
    CHECK(std::abs(table.entries(1, 0)) == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("eigenstate_derivative is second order in fd_step") {
    const double omega = 1.0;
    const auto path = BlochProtocol::p1(1.0, omega);
    const double expected = 0.5 * omega * std::sin(kPi / 4.0);
    auto error_at = [&](double fd) {
        const auto table = eigenstate_derivative(path, 0.8, fd);
        return std::abs(std::abs(table.entries(1, 0)) - expected);
    };
    const double coarse = error_at(2e-2);
    const double fine = error_at(1e-2);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("derivative table diagonal stays below 1e-6 at fd_step = 1e-3/omega") {
    const double omega = 1.0;
    const auto path = BlochProtocol::p1(1.0, omega);
    const auto table = eigenstate_derivative(path, 1.3, 1e-3 / omega);
    CHECK(table.max_diagonal() < 1e-6);
}

TEST_CASE("derivative table is anti-Hermitian with small diagonal on smooth paths") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int dim = 2 + trial % 3;
        const FourierProtocol path = FourierProtocol::random(dim, 2, 0.2, 0.25, 400 + trial);
        const auto table =
            eigenstate_derivative(path, uni(rng) * path.period(), 1e-5 * path.period());
        CHECK(table.anti_hermiticity_error() < 1e-8);
        CHECK(table.max_diagonal() < 1e-8);
    }
}

TEST_CASE("trace_distance basics") {
    Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    b(1, 1) = 1.0;
    CHECK(spectral::trace_distance(a, a) == doctest::Approx(0.0));
    CHECK(spectral::trace_distance(a, b) == doctest::Approx(1.0));

    // Gibbs at beta h = 1 vs maximally mixed: (1/2) * 2 * (0.7311 - 0.5).
    Matrix gibbs = Matrix::Zero(2, 2), mixed = Matrix::Zero(2, 2);
    const double ground = 1.0 / (1.0 + std::exp(-1.0));
    gibbs(0, 0) = ground;
    gibbs(1, 1) = 1.0 - ground;
    mixed(0, 0) = mixed(1, 1) = 0.5;
    CHECK(spectral::trace_distance(gibbs, mixed) ==
          doctest::Approx(ground - 0.5).epsilon(1e-12));
    CHECK(ground - 0.5 == doctest::Approx(0.2311).epsilon(1e-3));
}

TEST_CASE("trace_distance dimension mismatch") {
    CHECK_THROWS_AS(spectral::trace_distance(Matrix::Zero(2, 2), Matrix::Zero(3, 3)),
                    DimensionMismatch);
}

TEST_CASE("trace_distance satisfies the triangle inequality") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const int dim = 2 + trial % 3;
        const Matrix a = util::random_density(dim, rng);
        const Matrix b = util::random_density(dim, rng);
        const Matrix c = util::random_density(dim, rng);
        const double ab = spectral::trace_distance(a, b);
        const double bc = spectral::trace_distance(b, c);
        const double ac = spectral::trace_distance(a, c);
        CHECK(ac <= ab + bc + 1e-12);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0 + 1e-12);
    }
}

TEST_CASE("DensityMatrix validates its invariants") {
    std::mt19937_64 rng(9);
    CHECK_NOTHROW(DensityMatrix{util::random_density(3, rng)});

    Matrix bad_trace = 0.9 * util::random_density(2, rng);
    CHECK_THROWS_AS(DensityMatrix{bad_trace}, Error);

    Matrix negative(2, 2);
    negative << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(DensityMatrix{negative}, Error);
}

} // TEST_SUITE
