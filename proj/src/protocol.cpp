// protocol.cpp — Bloch protocols, periodic cubic splines, Fourier test paths.

#include "cdsim/protocol.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "cdsim/util.hpp"

namespace cdsim {

namespace {
constexpr double kPi = std::numbers::pi;
}

Matrix bloch_matrix(double h, double theta, double phi) {
    const double nx = std::sin(theta) * std::cos(phi);
    const double ny = std::sin(theta) * std::sin(phi);
    const double nz = std::cos(theta);
    Matrix H(2, 2);
    H(0, 0) = Complex(0.5 * h * nz, 0.0);
    H(0, 1) = Complex(0.5 * h * nx, -0.5 * h * ny);
    H(1, 0) = std::conj(H(0, 1));
    H(1, 1) = Complex(-0.5 * h * nz, 0.0);
    return H;
}

double BlochPath::period() const {
    require<Error>(omega > 0.0, "BlochPath: omega must be positive");
    return 2.0 * kPi / omega;
}

BlochProtocol::BlochProtocol(BlochPath path) : path_(std::move(path)) {
    require<Error>(path_.omega > 0.0, "BlochProtocol: omega must be positive");
}

BlochProtocol BlochProtocol::p1(double h, double omega) {
    BlochPath p;
    p.omega = omega;
    p.h = [h](double) { return h; };
    p.theta = [](double) { return kPi / 4.0; };
    p.phi = [omega](double t) { return omega * t; };
    p.dh = [](double) { return 0.0; };
    p.dtheta = [](double) { return 0.0; };
    p.dphi = [omega](double) { return omega; };
    return BlochProtocol(std::move(p));
}

BlochProtocol BlochProtocol::p2(double h, double omega) {
    BlochPath p;
    p.omega = omega;
    p.h = [h](double) { return h; };
    p.theta = [omega](double t) { return 0.5 * kPi * (1.0 - 0.2 * std::cos(omega * t)); };
    p.phi = [omega](double t) { return omega * t; };
    p.dh = [](double) { return 0.0; };
    p.dtheta = [omega](double t) { return 0.5 * kPi * 0.2 * omega * std::sin(omega * t); };
    p.dphi = [omega](double) { return omega; };
    return BlochProtocol(std::move(p));
}

Matrix BlochProtocol::hamiltonian(double t) const {
    return bloch_matrix(path_.h(t), path_.theta(t), path_.phi(t));
}

PeriodicSpline::PeriodicSpline(std::vector<double> knots, double period)
    : y_(std::move(knots)), period_(period) {
    const int m = static_cast<int>(y_.size());
    require<Error>(m >= 3, "PeriodicSpline: need at least 3 knots");
    require<Error>(period_ > 0.0, "PeriodicSpline: period must be positive");
    h_ = period_ / m;

    // Second derivatives from the cyclic tridiagonal system
    //   sigma_{j-1} + 4 sigma_j + sigma_{j+1} = 6 (y_{j-1} - 2 y_j + y_{j+1}) / h^2
    // solved with the Sherman-Morrison correction of the plain Thomas sweep.
    std::vector<double> rhs(m);
    for (int j = 0; j < m; ++j) {
        const double ym = y_[(j + m - 1) % m];
        const double yp = y_[(j + 1) % m];
        rhs[j] = 6.0 * (ym - 2.0 * y_[j] + yp) / (h_ * h_);
    }

    auto solve_tridiag = [&](const std::vector<double>& d) {
        // diag 4, off-diag 1, with corners folded into the first/last rows
        // via u = (gamma, 0, ..., 0, 1), v = (1, 0, ..., 0, 1/gamma).
        const double gamma = -4.0;
        std::vector<double> b(m, 4.0);
        b[0] -= gamma;
        b[m - 1] -= 1.0 / gamma;

        auto thomas = [&](std::vector<double> r) {
            std::vector<double> c(m, 0.0), x(m, 0.0);
            double beta = b[0];
            x[0] = r[0] / beta;
            for (int i = 1; i < m; ++i) {
                c[i] = 1.0 / beta;
                beta = b[i] - c[i];
                x[i] = (r[i] - x[i - 1]) / beta;
            }
            for (int i = m - 2; i >= 0; --i) x[i] -= c[i + 1] * x[i + 1];
            return x;
        };

        std::vector<double> u(m, 0.0);
        u[0] = gamma;
        u[m - 1] = 1.0;
        const std::vector<double> x = thomas(d);
        const std::vector<double> z = thomas(u);
        const double fact = (x[0] + x[m - 1] / gamma) / (1.0 + z[0] + z[m - 1] / gamma);
        std::vector<double> out(m);
        for (int i = 0; i < m; ++i) out[i] = x[i] - fact * z[i];
        return out;
    };

    const std::vector<double> sigma = solve_tridiag(rhs);

    b_.resize(m);
    c_.resize(m);
    d_.resize(m);
    for (int j = 0; j < m; ++j) {
        const double yp = y_[(j + 1) % m];
        const double sp = sigma[(j + 1) % m];
        b_[j] = (yp - y_[j]) / h_ - h_ * (2.0 * sigma[j] + sp) / 6.0;
        c_[j] = 0.5 * sigma[j];
        d_[j] = (sp - sigma[j]) / (6.0 * h_);
    }
}

double PeriodicSpline::value(double t) const {
    const int m = static_cast<int>(y_.size());
    double s = std::fmod(t, period_);
    if (s < 0.0) s += period_;
    int j = static_cast<int>(s / h_);
    if (j >= m) j = m - 1;
    const double x = s - j * h_;
    return y_[j] + x * (b_[j] + x * (c_[j] + x * d_[j]));
}

double PeriodicSpline::derivative(double t) const {
    const int m = static_cast<int>(y_.size());
    double s = std::fmod(t, period_);
    if (s < 0.0) s += period_;
    int j = static_cast<int>(s / h_);
    if (j >= m) j = m - 1;
    const double x = s - j * h_;
    return b_[j] + x * (2.0 * c_[j] + x * 3.0 * d_[j]);
}

BlochPath spline_bloch_path(double omega, std::vector<double> h_knots, double h_const,
                            std::vector<double> theta_knots, double theta_const,
                            std::vector<double> phi_knots, int phi_winding) {
    require<Error>(omega > 0.0, "spline_bloch_path: omega must be positive");
    const double T = 2.0 * kPi / omega;
    BlochPath p;
    p.omega = omega;

    if (h_knots.empty()) {
        p.h = [h_const](double) { return h_const; };
        p.dh = [](double) { return 0.0; };
    } else {
        auto sp = std::make_shared<PeriodicSpline>(std::move(h_knots), T);
        p.h = [sp](double t) { return sp->value(t); };
        p.dh = [sp](double t) { return sp->derivative(t); };
    }

    if (theta_knots.empty()) {
        p.theta = [theta_const](double) { return theta_const; };
        p.dtheta = [](double) { return 0.0; };
    } else {
        auto sp = std::make_shared<PeriodicSpline>(std::move(theta_knots), T);
        p.theta = [sp](double t) { return sp->value(t); };
        p.dtheta = [sp](double t) { return sp->derivative(t); };
    }

    const double wind_rate = phi_winding * omega;
    if (phi_knots.empty()) {
        p.phi = [wind_rate](double t) { return wind_rate * t; };
        p.dphi = [wind_rate](double) { return wind_rate; };
    } else {
        auto sp = std::make_shared<PeriodicSpline>(std::move(phi_knots), T);
        p.phi = [sp, wind_rate](double t) { return wind_rate * t + sp->value(t); };
        p.dphi = [sp, wind_rate](double t) { return wind_rate + sp->derivative(t); };
    }
    return p;
}

FourierProtocol::FourierProtocol(Matrix constant, std::vector<Matrix> cosine,
                                 std::vector<Matrix> sine, double omega)
    : constant_(std::move(constant)), cosine_(std::move(cosine)), sine_(std::move(sine)),
      omega_(omega) {
    require<Error>(omega_ > 0.0, "FourierProtocol: omega must be positive");
    require<Error>(cosine_.size() == sine_.size(),
                   "FourierProtocol: cosine/sine term mismatch");
}

FourierProtocol FourierProtocol::random(int dim, int harmonics, double omega, double amplitude,
                                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Matrix constant = util::random_hamiltonian(dim, rng, 1.0, 0.2);
    std::vector<Matrix> cosine, sine;
    for (int k = 0; k < harmonics; ++k) {
        cosine.push_back(util::random_hermitian(dim, rng, amplitude / (k + 1)));
        sine.push_back(util::random_hermitian(dim, rng, amplitude / (k + 1)));
    }
    return FourierProtocol(std::move(constant), std::move(cosine), std::move(sine), omega);
}

double FourierProtocol::period() const { return 2.0 * kPi / omega_; }

Matrix FourierProtocol::hamiltonian(double t) const {
    Matrix H = constant_;
    for (std::size_t k = 0; k < cosine_.size(); ++k) {
        const double arg = (static_cast<double>(k) + 1.0) * omega_ * t;
        H += std::cos(arg) * cosine_[k] + std::sin(arg) * sine_[k];
    }
    return H;
}

FixedProtocol::FixedProtocol(Matrix H, double period) : H_(std::move(H)), period_(period) {
    require<Error>(period_ > 0.0, "FixedProtocol: period must be positive");
}

} // namespace cdsim
