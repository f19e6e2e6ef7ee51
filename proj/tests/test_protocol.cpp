#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "cdsim/protocol.hpp"
#include "cdsim/spectral.hpp"

using namespace cdsim;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("protocol") {

TEST_CASE("periodic spline interpolates its knots and closes smoothly") {
    const std::vector<double> knots = {0.3, 1.1, 0.7, -0.2, 0.4, 0.9};
    const double T = 5.0;
    const PeriodicSpline sp(knots, T);
    const double h = T / knots.size();
    for (std::size_t j = 0; j < knots.size(); ++j)
        CHECK(sp.value(j * h) == doctest::Approx(knots[j]).epsilon(1e-12));

    // Periodic closure of value and slope across the seam.
    CHECK(sp.value(T + 0.37) == doctest::Approx(sp.value(0.37)).epsilon(1e-12));
    CHECK(sp.derivative(T - 1e-9) == doctest::Approx(sp.derivative(-1e-9)).epsilon(1e-6));

    // Analytic derivative against central differences.
    for (const double t : {0.2, 1.7, 3.3, 4.9}) {
        const double fd = (sp.value(t + 1e-6) - sp.value(t - 1e-6)) / 2e-6;
        CHECK(sp.derivative(t) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("spline bloch path falls back to constants for empty knots") {
    const BlochPath path = spline_bloch_path(0.4, {}, 1.3, {}, 0.8, {}, 2);
    CHECK(path.h(2.1) == doctest::Approx(1.3));
    CHECK(path.dh(2.1) == doctest::Approx(0.0));
    CHECK(path.theta(0.5) == doctest::Approx(0.8));
    CHECK(path.phi(1.0) == doctest::Approx(0.8));  // winding 2 * omega * t
    CHECK(path.dphi(1.0) == doctest::Approx(0.8));
}

TEST_CASE("p1 and p2 protocols follow their defining angles") {
    const double omega = 0.2;
    const auto p1 = BlochProtocol::p1(1.5, omega);
    CHECK(p1.period() == doctest::Approx(2.0 * kPi / omega));
    CHECK(p1.path().theta(3.0) == doctest::Approx(kPi / 4.0));
    CHECK(p1.path().phi(3.0) == doctest::Approx(omega * 3.0));
    CHECK(p1.path().h(3.0) == doctest::Approx(1.5));

    const auto p2 = BlochProtocol::p2(1.0, omega);
    for (const double t : {0.0, 2.0, 7.5}) {
        CHECK(p2.path().theta(t) ==
              doctest::Approx(0.5 * kPi * (1.0 - std::cos(omega * t) / 5.0)).epsilon(1e-14));
        const double fd = (p2.path().theta(t + 1e-6) - p2.path().theta(t - 1e-6)) / 2e-6;
        CHECK(p2.path().dtheta(t) == doctest::Approx(fd).epsilon(1e-6));
    }
    // Full period closes the path.
    CHECK(max_abs(Matrix(p2.hamiltonian(0.0) - p2.hamiltonian(p2.period()))) < 1e-12);
}

TEST_CASE("fourier paths are Hermitian and periodic") {
    const FourierProtocol path = FourierProtocol::random(3, 2, 0.3, 0.25, 99);
    for (const double t : {0.0, 1.0, 4.2}) {
        const Matrix H = path.hamiltonian(t);
        CHECK(max_abs(Matrix(H - H.adjoint())) < 1e-14);
        CHECK(max_abs(Matrix(H - path.hamiltonian(t + path.period()))) < 1e-12);
    }
    // Spread diagonal keeps the instantaneous spectra nondegenerate.
    for (double t = 0.0; t < path.period(); t += path.period() / 32)
        CHECK_NOTHROW(spectral::eigendecompose(path.hamiltonian(t), t));
}

TEST_CASE("bloch matrix is the expected Hermitian form") {
    const Matrix H = bloch_matrix(2.0, 1.1, 0.7);
    CHECK(max_abs(Matrix(H - H.adjoint())) < 1e-15);
    CHECK(std::abs(H.trace()) < 1e-15);
    const auto dec = spectral::eigendecompose(H);
    CHECK(dec.values(0) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(dec.values(1) == doctest::Approx(1.0).epsilon(1e-13));
}

} // TEST_SUITE
