// bindings.cpp — Python bindings for the main operations: simulate, scan,
// expand, validate, plus the building blocks useful from notebooks.

#include <memory>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cdsim/cd.hpp"
#include "cdsim/engine.hpp"
#include "cdsim/expansion.hpp"
#include "cdsim/liouville.hpp"
#include "cdsim/spectral.hpp"
#include "cdsim/thermo.hpp"
#include "cdsim/twolevel.hpp"
#include "cdsim/validate.hpp"

namespace py = pybind11;
using namespace cdsim;

namespace {

engine::SimConfig config_from_json(const std::string& text) {
    return engine::parse_config(text);
}

py::dict trajectory_to_dict(const engine::Trajectory& traj) {
    const std::size_t n = traj.samples.size();
    const int dim = n > 0 ? traj.samples[0].state.dim : 0;
    RealVector t(n), d(n), trace_err(n), min_eig(n);
    RealMatrix pop(n, dim);
    Matrix coh(n, dim * (dim - 1));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = traj.samples[i];
        t(i) = s.t;
        d(i) = s.d;
        trace_err(i) = s.trace_err;
        min_eig(i) = s.min_eig;
        pop.row(i) = s.state.pop.real().transpose();
        coh.row(i) = s.state.coh.transpose();
    }
    py::dict out;
    out["t"] = t;
    out["d"] = d;
    out["pop"] = pop;
    out["coh"] = coh;
    out["trace_err"] = trace_err;
    out["min_eig"] = min_eig;
    out["steps"] = traj.steps;
    out["refinements"] = traj.refinements;
    out["agreement"] = traj.agreement;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Simulator for periodically driven open quantum systems under a "
              "thermodynamically consistent GKLS master equation, with slow-driving "
              "expansions and counterdiabatic driving.";
    m.attr("__version__") = kVersion;

    // Base first: translators run newest-first, so the derived ConfigError
    // must be registered after its base to win the match.
    auto& sim_error = py::register_exception<Error>(m, "SimulationError");
    py::register_exception<ConfigError>(m, "ConfigError", sim_error.ptr());

    m.def(
        "simulate",
        [](const std::string& config_json) {
            return trajectory_to_dict(engine::integrate(config_from_json(config_json)));
        },
        py::arg("config_json"),
        "Integrate one configuration (JSON string); returns a dict of sample arrays.");

    m.def(
        "scan",
        [](const std::string& config_json, const std::string& axis,
           const std::vector<double>& grid, int jobs) {
            const auto cfg = config_from_json(config_json);
            engine::ScanAxis ax;
            if (axis == "omega")
                ax = engine::ScanAxis::omega;
            else if (axis == "h")
                ax = engine::ScanAxis::h;
            else
                throw ConfigError("scan axis must be 'omega' or 'h'");
            const auto rows = engine::scan(cfg, ax, grid, jobs);
            py::list out;
            for (const auto& row : rows) {
                py::dict r;
                r["value"] = row.value;
                r["d_avg"] = row.d_avg;
                r["d_max"] = row.d_max;
                r["with_cd"] = row.with_cd;
                r["error"] = row.error;
                out.append(r);
            }
            return out;
        },
        py::arg("config_json"), py::arg("axis"), py::arg("grid"), py::arg("jobs") = 1,
        "Sweep omega or h; returns one dict per grid point with steady-state d stats.");

    m.def(
        "expand",
        [](const std::string& config_json, int order) {
            const auto rows = engine::expand(config_from_json(config_json), order);
            const std::size_t n = rows.size();
            RealVector t(n), diff(n);
            RealMatrix int_pop(n, 2), exp_pop(n, 2);
            Matrix int_coh(n, 2), exp_coh(n, 2);
            for (std::size_t i = 0; i < n; ++i) {
                t(i) = rows[i].t;
                diff(i) = rows[i].diff_norm;
                int_pop.row(i) = rows[i].integrated.pop.real().transpose();
                exp_pop.row(i) = rows[i].expanded.pop.real().transpose();
                int_coh.row(i) = rows[i].integrated.coh.transpose();
                exp_coh.row(i) = rows[i].expanded.coh.transpose();
            }
            py::dict out;
            out["t"] = t;
            out["integrated_pop"] = int_pop;
            out["expanded_pop"] = exp_pop;
            out["integrated_coh"] = int_coh;
            out["expanded_coh"] = exp_coh;
            out["diff_norm"] = diff;
            return out;
        },
        py::arg("config_json"), py::arg("order") = 1,
        "Perturbative state per sampled time alongside the integrated one.");

    m.def(
        "validate",
        [](bool quick, const std::string& inject) {
            validate::Options options;
            options.quick = quick;
            if (!inject.empty()) options.faults = validate::parse_injection(inject);
            const auto report = validate::run(options);
            py::list checks;
            for (const auto& c : report.checks) {
                py::dict r;
                r["name"] = c.name;
                r["pass"] = c.pass;
                r["residual"] = c.residual;
                r["threshold"] = c.threshold;
                r["seconds"] = c.seconds;
                r["detail"] = c.detail;
                checks.append(r);
            }
            py::dict out;
            out["pass"] = report.pass;
            out["checks"] = checks;
            return out;
        },
        py::arg("quick") = true, py::arg("inject") = std::string(),
        "Run the physics invariant suite; inject one of kms-sign, gauge-sign, "
        "delta-sign for mutation testing.");

    m.def(
        "eigendecompose",
        [](const Matrix& H) {
            const auto dec = spectral::eigendecompose(H);
            return py::make_tuple(dec.values, dec.vectors);
        },
        py::arg("H"), "Ascending eigenvalues and eigenvectors of a Hermitian matrix.");

    m.def("trace_distance",
          py::overload_cast<const Matrix&, const Matrix&>(&spectral::trace_distance),
          py::arg("a"), py::arg("b"), "Trace distance (1/2)||a - b||_1.");

    m.def(
        "gibbs_state",
        [](const Matrix& H, double beta) {
            return thermo::gibbs_state(spectral::eigendecompose(H), beta);
        },
        py::arg("H"), py::arg("beta"), "e^{-beta H} / Z.");

    m.def("bloch_hamiltonian",
          [](double h, double theta, double phi) { return bloch_matrix(h, theta, phi); },
          py::arg("h"), py::arg("theta"), py::arg("phi"),
          "(h/2) n.sigma for the Bloch angles.");

    m.def(
        "two_level_cd",
        [](double h, double theta, double phi, double dtheta, double dphi) {
            BlochPath path;
            path.omega = 1.0;
            path.h = [h](double) { return h; };
            path.dh = [](double) { return 0.0; };
            path.theta = [theta](double) { return theta; };
            path.dtheta = [dtheta](double) { return dtheta; };
            path.phi = [phi](double) { return phi; };
            path.dphi = [dphi](double) { return dphi; };
            return cd::two_level_cd(path, 0.0);
        },
        py::arg("h"), py::arg("theta"), py::arg("phi"), py::arg("dtheta"), py::arg("dphi"),
        "Counterdiabatic term (1/2)(n x dn/dt).sigma at one instant.");

    m.def(
        "generator",
        [](const std::string& config_json, double t, bool dense_oracle_route) {
            const auto cfg = config_from_json(config_json);
            const auto path = engine::make_protocol(cfg.protocol);
            const auto diss = engine::make_dissipator_config(cfg);
            const double fd = cfg.fd_step_rel * path->period();
            const auto ep = liouville::make_eval_point(*path, t, diss, cfg.with_cd, fd);
            return dense_oracle_route ? liouville::dense_oracle(ep)
                                      : liouville::assemble_generator(ep).dense();
        },
        py::arg("config_json"), py::arg("t"), py::arg("dense_oracle_route") = false,
        "Dense block generator at time t in (pop, coh) ordering; set "
        "dense_oracle_route=True for the brute-force superoperator.");
}
