#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <doctest.h>

#include "cdsim/expansion.hpp"
#include "cdsim/liouville.hpp"
#include "cdsim/protocol.hpp"
#include "cdsim/util.hpp"

using namespace cdsim;
using namespace cdsim::expansion;

namespace {

constexpr double kPi = std::numbers::pi;

RealMatrix two_level_K(double gamma, double x) {
    // Ascending order (ground, excited).
    RealMatrix K(2, 2);
    K << -gamma * x, gamma, gamma * x, -gamma;
    return K;
}

Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

thermo::DissipatorConfig z_config(double beta, double h, double gamma_h) {
    thermo::DissipatorConfig cfg;
    cfg.channels.push_back(
        {sigma_z(), thermo::RateFunction(beta, {{0.0, 0.0}, {h, gamma_h}},
                                         thermo::RateFunction::Extrapolation::linear)});
    return cfg;
}

} // namespace

TEST_SUITE("expansion") {

TEST_CASE("rate spectrum of the two-level closed form") {
    const double gamma = 0.25, x = std::exp(-1.0);
    const RateSpectrum spec = rate_spectrum(two_level_K(gamma, x));
    CHECK(std::abs(spec.eigenvalues(0)) == doctest::Approx(0.0));
    CHECK(spec.eigenvalues(1).real() == doctest::Approx(-gamma * (1.0 + x)).epsilon(1e-12));
    // Unit-entry-sum Perron vector = Gibbs populations (ground, excited).
    CHECK(spec.right(0, 0).real() == doctest::Approx(1.0 / (1.0 + x)).epsilon(1e-12));
    CHECK(spec.right(1, 0).real() == doctest::Approx(x / (1.0 + x)).epsilon(1e-12));
    // Left zero mode is the all-ones row.
    CHECK(max_abs(Vector(spec.left.row(0).transpose() - Vector::Ones(2))) < 1e-10);
    CHECK(spec.biorthonormality_error() < 1e-8);
    CHECK(spec.completeness_error() < 1e-8);
}

TEST_CASE("zero matrix is rejected") {
    CHECK_THROWS_AS(rate_spectrum(RealMatrix::Zero(2, 2)), NonSimpleKernel);
}

TEST_CASE("left zero vector is all ones on random KMS rate matrices") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(0.1, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 2 + trial % 3;
        const auto basis = spectral::eigendecompose(util::random_hamiltonian(dim, rng));
        const double range = basis.values(dim - 1) - basis.values(0);
        thermo::DissipatorConfig cfg;
        cfg.channels.push_back(
            {util::random_hermitian(dim, rng),
             thermo::RateFunction(1.0, {{0.0, 0.2 * uni(rng)}, {1.3 * range + 1.0, uni(rng)}})});
        const thermo::ThermalDissipator d(cfg, basis);
        const RateSpectrum spec = rate_spectrum(liouville::build_K(d));
        CHECK(max_abs(Vector(spec.left.row(0).transpose() - Vector::Ones(dim))) < 1e-8);
        CHECK(spec.biorthonormality_error() < 1e-8);
        // Perron vector equals the Gibbs populations.
        const RealVector gibbs = thermo::gibbs_populations(basis.values, 1.0);
        CHECK(max_abs(Vector(spec.right.col(0) - gibbs.cast<Complex>())) < 1e-8);
    }
}

TEST_CASE("reduced inverse identities") {
    const double gamma = 0.25, x = std::exp(-0.7);
    const RealMatrix K = two_level_K(gamma, x);
    const RateSpectrum spec = rate_spectrum(K);
    const Matrix Kbar = reduced_inverse(spec);
    const Matrix projector =
        Matrix::Identity(2, 2) - spec.right.col(0) * spec.left.row(0);

    CHECK(max_abs(Matrix(Kbar * K.cast<Complex>() - projector)) < 1e-8);
    CHECK(max_abs(Matrix(K.cast<Complex>() * Kbar - projector)) < 1e-8);
    CHECK(max_abs(Vector(Kbar * spec.right.col(0))) < 1e-12);
    // Single nonzero mode: Kbar = (1/Lambda_1) * projector.
    CHECK(max_abs(Matrix(Kbar - projector / spec.eigenvalues(1))) < 1e-10);
    // (Kbar)^2 K^2 = projector as well.
    CHECK(max_abs(Matrix(Kbar * Kbar * K.cast<Complex>() * K.cast<Complex>() - projector)) <
          1e-8);
}

TEST_CASE("first-order population term vanishes for constant eigenvalues") {
    for (const bool use_p2 : {false, true}) {
        const BlochProtocol path =
            use_p2 ? BlochProtocol::p2(1.0, 0.05) : BlochProtocol::p1(1.0, 0.05);
        const auto cfg = z_config(1.0, 1.0, 0.5);
        const auto er = first_order(path, 0.37 * path.period(), cfg, false,
                                    1e-4 * path.period());
        CHECK(er.pop_terms[1].cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs(er.pop_terms[0].sum() - 1.0) < 1e-12);
    }
}

TEST_CASE("first-order population term follows a driven gap") {
    // h(t) oscillates: the populations lag the Gibbs values at first order.
    BlochPath path;
    const double omega = 0.05;
    path.omega = omega;
    path.h = [omega](double t) { return 1.0 + 0.3 * std::sin(omega * t); };
    path.dh = [omega](double t) { return 0.3 * omega * std::cos(omega * t); };
    path.theta = [](double) { return kPi / 4.0; };
    path.dtheta = [](double) { return 0.0; };
    path.phi = [omega](double t) { return omega * t; };
    path.dphi = [omega](double) { return omega; };
    const BlochProtocol proto(path);

    const auto cfg = z_config(1.0, 1.4, 0.5);
    const auto er = first_order(proto, 0.2 * proto.period(), cfg, false, 1e-4 * proto.period());
    CHECK(er.pop_terms[1].cwiseAbs().maxCoeff() > 1e-4);
    // Entry sum of every correction order vanishes.
    CHECK(std::abs(er.pop_terms[1].sum()) < 1e-9);
}

TEST_CASE("first-order coherence matches the closed form at p1") {
    const double beta = 1.0, h = 1.0, omega = 0.1;
    const auto path = BlochProtocol::p1(h, omega);
    const auto cfg = z_config(beta, h, 0.5);
    const auto er = first_order(path, 0.0, cfg, false, 1e-4 * path.period());
    const double gamma2 = 0.5 * (1.0 + std::exp(-beta * h)) * 0.25 * h;
    const double expected =
        std::tanh(0.5 * beta * h) * 0.5 * omega * std::sin(kPi / 4.0) / std::hypot(gamma2, h);
    CHECK(std::abs(er.coh_terms[1](0)) == doctest::Approx(expected).epsilon(1e-6));
    CHECK(std::abs(er.coh_terms[1](1)) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("counterdiabatic resolvent replacement suppresses coherence") {
    const double beta = 1.0, h = 1.0, omega = 0.1;
    const auto path = BlochProtocol::p1(h, omega);
    const auto cfg = z_config(beta, h, 0.5);
    const double t = 0.4 * path.period();
    const auto plain = first_order(path, t, cfg, false, 1e-4 * path.period());
    const auto with_cd = first_order(path, t, cfg, true, 1e-4 * path.period());

    const double gamma2 = 0.5 * (1.0 + std::exp(-beta * h)) * 0.25 * h;
    const double ratio = std::abs(with_cd.coh_terms[1](0)) / std::abs(plain.coh_terms[1](0));
    CHECK(ratio == doctest::Approx(gamma2 / h).epsilon(1e-6));
    // Population part is unchanged.
    CHECK((with_cd.pop() - plain.pop()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("coherence vanishes with the dissipator scaled away under CD") {
    const double h = 1.0, omega = 0.1;
    const auto path = BlochProtocol::p1(h, omega);
    double previous = std::numeric_limits<double>::infinity();
    for (const double gamma_h : {0.5, 0.05, 0.005}) {
        const auto er =
            first_order(path, 0.0, z_config(1.0, h, gamma_h), true, 1e-4 * path.period());
        const double norm = max_abs(er.coh_terms[1]);
        CHECK(norm < previous);
        previous = norm;
        // Suppressed coherence is linear in the decay scale Gamma2.
        const double gamma2 = 0.25 * (1.0 + std::exp(-1.0)) * gamma_h;
        const double expected = std::tanh(0.5) * 0.5 * omega * std::sin(kPi / 4.0) * gamma2 /
                                (h * std::hypot(gamma2, h));
        CHECK(norm == doctest::Approx(expected).epsilon(1e-4));
    }
}

TEST_CASE("effective generator reduces to K on a static path") {
    std::mt19937_64 rng(5);
    const FixedProtocol path(util::random_hamiltonian(3, rng), 1.0);
    std::uniform_real_distribution<double> uni(0.1, 1.0);
    thermo::DissipatorConfig cfg;
    cfg.channels.push_back(
        {util::random_hermitian(3, rng),
         thermo::RateFunction(1.0, {{0.0, 0.2 * uni(rng)}, {12.0, uni(rng)}})});
    const auto blocks = liouville::assemble_generator(path, 0.0, cfg, false, 1e-4);
    const RealMatrix eff = effective_population_generator(blocks);
    CHECK((eff - blocks.K).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("second-order correction scales as omega squared") {
    const auto cfg = z_config(1.0, 1.0, 0.5);
    auto correction_norm = [&](double omega) {
        const auto path = BlochProtocol::p1(1.0, omega);
        const auto blocks =
            liouville::assemble_generator(path, 1.0, cfg, false, 1e-4 * path.period());
        return (effective_population_generator(blocks) - blocks.K).cwiseAbs().maxCoeff();
    };
    CHECK(correction_norm(0.2) / correction_norm(0.1) == doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("effective generator preserves zero column sums") {
    const auto path = BlochProtocol::p2(1.0, 0.1);
    const auto cfg = z_config(1.0, 1.0, 0.5);
    const auto blocks = liouville::assemble_generator(path, 0.7, cfg, false, 1e-4 * path.period());
    const RealMatrix eff = effective_population_generator(blocks);
    CHECK(eff.colwise().sum().cwiseAbs().maxCoeff() < 1e-9);
}

} // TEST_SUITE
