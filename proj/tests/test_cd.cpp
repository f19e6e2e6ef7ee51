#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "cdsim/cd.hpp"
#include "cdsim/liouville.hpp"
#include "cdsim/protocol.hpp"
#include "cdsim/util.hpp"

using namespace cdsim;
using namespace cdsim::cd;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("cd") {

TEST_CASE("gauge potential vanishes on a static path") {
    std::mt19937_64 rng(2);
    const FixedProtocol path(util::random_hamiltonian(3, rng), 1.0);
    CHECK(max_abs(gauge_potential(path, 0.5, 1e-4).op) < 1e-9);
}

TEST_CASE("two-level closed form at p1") {
    const double omega = 0.3;
    const auto proto = BlochProtocol::p1(1.0, omega);
    const Matrix h_cd = two_level_cd(proto.path(), 0.7);
    // |n x dn/dt| = omega sin(theta); operator norm is half of it.
    auto [values, vectors] = spectral::jacobi_eigensystem(h_cd);
    CHECK(values.cwiseAbs().maxCoeff() ==
          doctest::Approx(0.5 * omega * std::sin(kPi / 4.0)).epsilon(1e-12));
    CHECK(std::abs(h_cd.trace()) < 1e-15);
}

TEST_CASE("constant Bloch vector gives a vanishing term") {
    BlochPath path;
    path.omega = 1.0;
    path.h = [](double) { return 1.0; };
    path.dh = [](double) { return 0.0; };
    path.theta = [](double) { return 0.8; };
    path.dtheta = [](double) { return 0.0; };
    path.phi = [](double) { return 0.4; };
    path.dphi = [](double) { return 0.0; };
    CHECK(max_abs(two_level_cd(path, 0.3)) < 1e-15);
}

TEST_CASE("counterdiabatic term is off-diagonal in the instantaneous eigenbasis") {
    const auto proto = BlochProtocol::p2(1.0, 0.2);
    for (const double t : {0.0, 2.0, 11.0}) {
        const Matrix h_cd = two_level_cd(proto.path(), t);
        const auto basis = spectral::eigendecompose(proto.hamiltonian(t), t);
        const Matrix coeff = basis.vectors.adjoint() * h_cd * basis.vectors;
        CHECK(std::abs(coeff(0, 0)) < 1e-12);
        CHECK(std::abs(coeff(1, 1)) < 1e-12);
    }
}

TEST_CASE("generic gauge potential matches the closed form on p1 and p2") {
    for (const bool use_p2 : {false, true}) {
        const auto proto =
            use_p2 ? BlochProtocol::p2(1.0, 0.15) : BlochProtocol::p1(1.0, 0.15);
        for (const double frac : {0.1, 0.45, 0.8}) {
            const double t = frac * proto.period();
            const Matrix generic = gauge_potential(proto, t, 1e-4 * proto.period()).op;
            const Matrix closed = two_level_cd(proto.path(), t);
            CHECK(max_abs(Matrix(generic - closed)) < 1e-8);
        }
    }
}

TEST_CASE("gauge potential scales linearly with omega") {
    auto norm_at = [](double omega) {
        const auto proto = BlochProtocol::p1(1.0, omega);
        return max_abs(gauge_potential(proto, 1.0, 1e-4 * proto.period()).op);
    };
    CHECK(norm_at(0.2) / norm_at(0.1) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("generic gauge potential matches closed form on random splines") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double omega = 0.1 + 0.2 * uni(rng);
        std::vector<double> theta_knots, phi_knots;
        for (int k = 0; k < 6; ++k) {
            theta_knots.push_back(0.6 + 0.5 * uni(rng));
            phi_knots.push_back(0.4 * uni(rng));
        }
        const BlochPath path =
            spline_bloch_path(omega, {}, 1.0, theta_knots, 0.0, phi_knots, 1);
        const BlochProtocol proto(path);
        const double t = uni(rng) * proto.period();
        const Matrix generic = gauge_potential(proto, t, 1e-4 * proto.period()).op;
        const Matrix closed = two_level_cd(path, t);
        CHECK(max_abs(Matrix(generic - closed)) < 1e-7);
    }
}

TEST_CASE("basis_transform is the identity map on matching bases") {
    std::mt19937_64 rng(11);
    const auto basis = spectral::eigendecompose(util::random_hamiltonian(3, rng));
    const auto state = liouville::vectorize(util::random_density(3, rng), basis);
    const auto back = basis_transform(state, basis, basis);
    CHECK(max_abs(Vector(back.pop - state.pop)) < 1e-14);
    CHECK(max_abs(Vector(back.coh - state.coh)) < 1e-14);
}

TEST_CASE("basis_transform approaches the identity as omega -> 0") {
    auto deviation_at = [](double omega) {
        const auto proto = BlochProtocol::p1(1.0, omega);
        const double t = 0.3 * proto.period();
        const auto basis_h = spectral::eigendecompose(proto.hamiltonian(t), t);
        const Matrix h_tot = proto.hamiltonian(t) + two_level_cd(proto.path(), t);
        const auto basis_e = spectral::eigendecompose(h_tot, t);
        liouville::StateVec probe = liouville::StateVec::zero(2);
        probe.pop(0) = 1.0;
        const auto moved = basis_transform(probe, basis_e, basis_h);
        return max_abs(moved.coh);
    };
    const double coarse = deviation_at(0.2);
    const double fine = deviation_at(0.1);
    CHECK(coarse / fine == doctest::Approx(2.0).epsilon(0.02));  // O(omega)
    CHECK(fine < 0.06);
}

TEST_CASE("pure eigenstate of the shifted operator gains coherences") {
    const auto proto = BlochProtocol::p1(1.0, 0.4);
    const double t = 0.2 * proto.period();
    const auto basis_h = spectral::eigendecompose(proto.hamiltonian(t), t);
    const Matrix h_tot = proto.hamiltonian(t) + two_level_cd(proto.path(), t);
    const auto basis_e = spectral::eigendecompose(h_tot, t);
    liouville::StateVec pure = liouville::StateVec::zero(2);
    pure.pop(0) = 1.0;
    const auto moved = basis_transform(pure, basis_e, basis_h);
    CHECK(max_abs(moved.coh) > 1e-3);
    CHECK(std::abs(moved.pop.sum() - Complex(1.0)) < 1e-14);
}

TEST_CASE("basis_transform preserves trace and spectrum") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const auto basis_a = spectral::eigendecompose(util::random_hamiltonian(3, rng));
        const auto basis_b = spectral::eigendecompose(util::random_hamiltonian(3, rng));
        const Matrix rho = util::random_density(3, rng);
        const auto state = liouville::vectorize(rho, basis_a);
        const auto moved = basis_transform(state, basis_a, basis_b);
        CHECK(std::abs(moved.pop.sum() - Complex(1.0)) < 1e-12);

        const Matrix rebuilt = liouville::devectorize(moved, basis_b);
        auto [original_eig, v1] = spectral::jacobi_eigensystem(rho);
        auto [moved_eig, v2] = spectral::jacobi_eigensystem(rebuilt);
        CHECK((original_eig - moved_eig).cwiseAbs().maxCoeff() < 1e-12);
    }
}

} // TEST_SUITE
