// engine.hpp — Time-domain integrator for the vectorized GKLS equation,
// experiment protocols and scans, configuration ingestion, and CSV emission.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cdsim/liouville.hpp"
#include "cdsim/protocol.hpp"
#include "cdsim/thermo.hpp"
#include "cdsim/types.hpp"

namespace cdsim::engine {

enum class ProtocolKind { p1, p2, custom_spline };
enum class JumpKind { z, x };

struct ProtocolConfig {
    ProtocolKind kind = ProtocolKind::p1;
    double h = 1.0;      // field magnitude in units of the reference scale
    double omega = 0.05; // angular frequency in units of the reference scale
    // custom-spline knots, uniformly spaced over one period; empty = constant
    std::vector<double> h_knots, theta_knots, phi_knots;
    int phi_winding = 1;
};

struct SimConfig {
    ProtocolConfig protocol;
    JumpKind jump = JumpKind::z;
    double gamma_h = 0.5;  // rate at the instantaneous gap, units of h0
    double gamma_0 = 0.0;  // rate at zero gap
    double beta = 1.0;     // inverse temperature, units of 1/h0
    bool with_cd = false;

    int periods = 10;
    int transient_periods = 5;
    int steps_per_period = 2000;
    int sample_stride = 10;
    double tolerance = 1e-9;  // per-period Richardson agreement threshold
    int max_refinements = 6;
    double fd_step_rel = 1e-4;  // eigenstate-derivative step, fraction of T0

    // Initial state in the ascending eigenbasis of H(0). Empty pop = ground
    // state; coherences default to zero.
    std::vector<double> initial_pop;
    std::vector<Complex> initial_coh;

    std::uint64_t seed = 0;

    void check() const;  // throws ConfigError
};

SimConfig parse_config(const std::string& json_text);
SimConfig load_config(const std::string& path);
std::string config_to_json(const SimConfig& config);

std::unique_ptr<Protocol> make_protocol(const ProtocolConfig& config);
thermo::DissipatorConfig make_dissipator_config(const SimConfig& config);

struct Sample {
    double t = 0.0;
    double d = 0.0;  // trace distance to the instantaneous Gibbs state of H
    liouville::StateVec state;  // reported in the H eigenbasis
    spectral::SpectralDecomposition basis;  // the H eigenbasis used above
    double trace_err = 0.0;
    double herm_err = 0.0;
    double min_eig = 0.0;
};

struct Trajectory {
    std::vector<Sample> samples;
    long steps = 0;
    int refinements = 0;
    double step_size = 0.0;
    double agreement = 0.0;  // max sample deviation between the last two refinements

    double max_trace_err() const;
    double max_herm_err() const;
    double min_eigenvalue() const;
    // Time average of d(t) over [t0, t1] (inclusive sample window).
    double average_d(double t0, double t1) const;
    double max_d(double t0, double t1) const;
};

// Fixed-step classic 4th-order integration of the block generator, restarted
// with halved steps until two successive refinements agree to
// tolerance * periods; the finer trajectory is returned. Throws
// StepsizeUnderflow past max_refinements and PositivityViolation when a
// sampled state dips below -1e-6.
Trajectory integrate(const SimConfig& config);
Trajectory integrate(const Protocol& path, const SimConfig& config);

enum class ScanAxis { omega, h };

struct ScanRow {
    double value = 0.0;
    double d_avg = 0.0;
    double d_max = 0.0;
    bool with_cd = false;
    std::string error;  // empty on success
};

// Run integrate per grid value (omega or h substituted into the config),
// discard the transient periods, and report time-averaged and maximal d(t)
// over the last full period. Rows keep grid order; failures are recorded per
// row and the scan continues. `jobs` <= 0 means one worker per grid point up
// to the hardware concurrency.
std::vector<ScanRow> scan(const SimConfig& config, ScanAxis axis,
                          const std::vector<double>& grid, int jobs = 1);

struct ExpandRow {
    double t = 0.0;
    liouville::StateVec integrated;
    liouville::StateVec expanded;
    double diff_norm = 0.0;  // Frobenius distance of the two density matrices
};

// Perturbative state per sampled time alongside the integrated one. Order 0
// is the instantaneous Gibbs populations, order 1 adds the first-order terms,
// order 2 additionally propagates the populations with the effective
// second-order generator.
std::vector<ExpandRow> expand(const SimConfig& config, int order);

// CSV emission: '#'-prefixed metadata lines (config echo, version, seed),
// then a header row and rows with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const SimConfig& config, const Trajectory& traj);
void write_scan_csv(std::ostream& out, const SimConfig& config, ScanAxis axis,
                    const std::vector<ScanRow>& rows);
void write_expand_csv(std::ostream& out, const SimConfig& config, int order,
                      const std::vector<ExpandRow>& rows);

} // namespace cdsim::engine
