// types.hpp — Shared scalar/matrix aliases, the error taxonomy, and the
// fault-injection switches used by the validation suite.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cdsim {

inline constexpr const char* kVersion = "0.1.0";

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

constexpr Complex kImag{0.0, 1.0};

// Base class for every failure the library reports deliberately.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct DegenerateSpectrum : Error { using Error::Error; };
struct PathDiscontinuity : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct NonSimpleKernel : Error { using Error::Error; };
struct SingularCoherenceBlock : Error { using Error::Error; };
struct StepsizeUnderflow : Error { using Error::Error; };
struct PositivityViolation : Error { using Error::Error; };
struct ZeroRate : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

template <class E = Error>
inline void require(bool condition, const std::string& message) {
    if (!condition) throw E(message);
}

// Deliberate sign flips exercised by `cdsim validate --inject ...`. They give
// the validation suite something to catch; production paths leave all of them
// off.
struct Faults {
    bool kms_sign = false;    // negative-branch rate uses e^{+beta*eps}
    bool gauge_sign = false;  // gauge coupling blocks enter with flipped sign
    bool delta_sign = false;  // energy-gap diagonal enters with flipped sign

    bool any() const { return kms_sign || gauge_sign || delta_sign; }
};

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs(const Vector& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

inline Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

} // namespace cdsim
