// engine.cpp — Config ingestion, the RK4 integrator with step-halving
// acceptance, scans, the expansion comparison, and CSV emission.

#include "cdsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cdsim/cd.hpp"
#include "cdsim/expansion.hpp"
#include "cdsim/util.hpp"

namespace cdsim::engine {

using nlohmann::json;

namespace {

constexpr double kPositivityFloor = -1e-6;

void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* key : allowed)
            if (item.key() == key) ok = true;
        require<ConfigError>(ok, std::string("config: unknown key '") + item.key() + "' in " +
                                     where);
    }
}

Matrix jump_matrix(JumpKind kind) {
    Matrix m(2, 2);
    if (kind == JumpKind::z) {
        m << 1.0, 0.0, 0.0, -1.0;
    } else {
        m << 0.0, 1.0, 1.0, 0.0;
    }
    return m;
}

} // namespace

void SimConfig::check() const {
    require<ConfigError>(protocol.h > 0.0, "config: protocol.h must be positive");
    require<ConfigError>(protocol.omega > 0.0, "config: protocol.omega must be positive");
    require<ConfigError>(gamma_h >= 0.0 && gamma_0 >= 0.0, "config: rates must be >= 0");
    require<ConfigError>(beta >= 0.0, "config: beta must be >= 0");
    require<ConfigError>(periods >= 1, "config: periods must be >= 1");
    require<ConfigError>(transient_periods >= 0 && transient_periods < periods,
                         "config: transient_periods must lie inside the simulated span");
    require<ConfigError>(steps_per_period >= 10, "config: steps_per_period must be >= 10");
    require<ConfigError>(sample_stride >= 1 && sample_stride <= steps_per_period,
                         "config: sample_stride out of range");
    require<ConfigError>(tolerance > 0.0, "config: tolerance must be positive");
    require<ConfigError>(max_refinements >= 0, "config: max_refinements must be >= 0");
    require<ConfigError>(fd_step_rel > 0.0 && fd_step_rel < 0.01,
                         "config: fd_step_rel must lie in (0, 0.01)");
    if (!initial_pop.empty()) {
        require<ConfigError>(initial_pop.size() == 2, "config: initial.pop must have 2 entries");
        double sum = 0.0;
        for (double p : initial_pop) {
            require<ConfigError>(p >= -1e-12, "config: initial populations must be >= 0");
            sum += p;
        }
        require<ConfigError>(std::abs(sum - 1.0) < 1e-9, "config: initial populations must sum to 1");
    }
    require<ConfigError>(initial_coh.empty() || initial_coh.size() == 1,
                         "config: initial.coh takes one entry, the (1,2) coherence");
}

SimConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    check_keys(j, "top level",
               {"protocol", "jump", "rates", "beta", "with_cd", "periods", "transient_periods",
                "steps_per_period", "sample_stride", "tolerance", "max_refinements",
                "fd_step_rel", "initial", "seed"});

    SimConfig cfg;
    try {
        if (j.contains("protocol")) {
            const json& p = j["protocol"];
            check_keys(p, "protocol",
                       {"kind", "h", "omega", "h_knots", "theta_knots", "phi_knots",
                        "phi_winding"});
            const std::string kind = p.value("kind", "p1");
            if (kind == "p1")
                cfg.protocol.kind = ProtocolKind::p1;
            else if (kind == "p2")
                cfg.protocol.kind = ProtocolKind::p2;
            else if (kind == "custom-spline")
                cfg.protocol.kind = ProtocolKind::custom_spline;
            else
                throw ConfigError("config: unknown protocol kind '" + kind + "'");
            cfg.protocol.h = p.value("h", cfg.protocol.h);
            cfg.protocol.omega = p.value("omega", cfg.protocol.omega);
            cfg.protocol.h_knots = p.value("h_knots", cfg.protocol.h_knots);
            cfg.protocol.theta_knots = p.value("theta_knots", cfg.protocol.theta_knots);
            cfg.protocol.phi_knots = p.value("phi_knots", cfg.protocol.phi_knots);
            cfg.protocol.phi_winding = p.value("phi_winding", cfg.protocol.phi_winding);
        }
        if (j.contains("jump")) {
            const std::string jump = j["jump"];
            if (jump == "z" || jump == "Z")
                cfg.jump = JumpKind::z;
            else if (jump == "x" || jump == "X")
                cfg.jump = JumpKind::x;
            else
                throw ConfigError("config: unknown jump kind '" + jump + "'");
        }
        if (j.contains("rates")) {
            const json& r = j["rates"];
            check_keys(r, "rates", {"gamma_h", "gamma_0"});
            cfg.gamma_h = r.value("gamma_h", cfg.gamma_h);
            cfg.gamma_0 = r.value("gamma_0", cfg.gamma_0);
        }
        cfg.beta = j.value("beta", cfg.beta);
        cfg.with_cd = j.value("with_cd", cfg.with_cd);
        cfg.periods = j.value("periods", cfg.periods);
        cfg.transient_periods = j.value("transient_periods", cfg.transient_periods);
        cfg.steps_per_period = j.value("steps_per_period", cfg.steps_per_period);
        cfg.sample_stride = j.value("sample_stride", cfg.sample_stride);
        cfg.tolerance = j.value("tolerance", cfg.tolerance);
        cfg.max_refinements = j.value("max_refinements", cfg.max_refinements);
        cfg.fd_step_rel = j.value("fd_step_rel", cfg.fd_step_rel);
        cfg.seed = j.value("seed", cfg.seed);
        if (j.contains("initial")) {
            const json& init = j["initial"];
            check_keys(init, "initial", {"pop", "coh"});
            if (init.contains("pop"))
                cfg.initial_pop = init["pop"].get<std::vector<double>>();
            if (init.contains("coh")) {
                for (const auto& entry : init["coh"]) {
                    require<ConfigError>(entry.is_array() && entry.size() == 2,
                                         "config: initial.coh entries are [re, im] pairs");
                    cfg.initial_coh.emplace_back(entry[0].get<double>(),
                                                 entry[1].get<double>());
                }
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.check();
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    require<ConfigError>(in.good(), "config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string config_to_json(const SimConfig& cfg) {
    json p;
    switch (cfg.protocol.kind) {
        case ProtocolKind::p1: p["kind"] = "p1"; break;
        case ProtocolKind::p2: p["kind"] = "p2"; break;
        case ProtocolKind::custom_spline: p["kind"] = "custom-spline"; break;
    }
    p["h"] = cfg.protocol.h;
    p["omega"] = cfg.protocol.omega;
    if (!cfg.protocol.h_knots.empty()) p["h_knots"] = cfg.protocol.h_knots;
    if (!cfg.protocol.theta_knots.empty()) p["theta_knots"] = cfg.protocol.theta_knots;
    if (!cfg.protocol.phi_knots.empty()) p["phi_knots"] = cfg.protocol.phi_knots;
    if (cfg.protocol.kind == ProtocolKind::custom_spline)
        p["phi_winding"] = cfg.protocol.phi_winding;

    json j;
    j["protocol"] = p;
    j["jump"] = cfg.jump == JumpKind::z ? "z" : "x";
    j["rates"] = {{"gamma_h", cfg.gamma_h}, {"gamma_0", cfg.gamma_0}};
    j["beta"] = cfg.beta;
    j["with_cd"] = cfg.with_cd;
    j["periods"] = cfg.periods;
    j["transient_periods"] = cfg.transient_periods;
    j["steps_per_period"] = cfg.steps_per_period;
    j["sample_stride"] = cfg.sample_stride;
    j["tolerance"] = cfg.tolerance;
    j["max_refinements"] = cfg.max_refinements;
    j["fd_step_rel"] = cfg.fd_step_rel;
    j["seed"] = cfg.seed;
    if (!cfg.initial_pop.empty()) j["initial"]["pop"] = cfg.initial_pop;
    if (!cfg.initial_coh.empty()) {
        json coh = json::array();
        for (const Complex& c : cfg.initial_coh) coh.push_back({c.real(), c.imag()});
        j["initial"]["coh"] = coh;
    }
    return j.dump();
}

std::unique_ptr<Protocol> make_protocol(const ProtocolConfig& cfg) {
    switch (cfg.kind) {
        case ProtocolKind::p1:
            return std::make_unique<BlochProtocol>(BlochProtocol::p1(cfg.h, cfg.omega));
        case ProtocolKind::p2:
            return std::make_unique<BlochProtocol>(BlochProtocol::p2(cfg.h, cfg.omega));
        case ProtocolKind::custom_spline:
            return std::make_unique<BlochProtocol>(BlochProtocol(
                spline_bloch_path(cfg.omega, cfg.h_knots, cfg.h, cfg.theta_knots,
                                  std::numbers::pi / 4.0, cfg.phi_knots, cfg.phi_winding)));
    }
    throw ConfigError("config: unreachable protocol kind");
}

thermo::DissipatorConfig make_dissipator_config(const SimConfig& cfg) {
    thermo::DissipatorConfig d;
    thermo::RateFunction rate(cfg.beta, {{0.0, cfg.gamma_0}, {cfg.protocol.h, cfg.gamma_h}},
                              thermo::RateFunction::Extrapolation::linear);
    d.channels.push_back({jump_matrix(cfg.jump), std::move(rate)});
    return d;
}

double Trajectory::max_trace_err() const {
    double worst = 0.0;
    for (const Sample& s : samples) worst = std::max(worst, s.trace_err);
    return worst;
}

double Trajectory::max_herm_err() const {
    double worst = 0.0;
    for (const Sample& s : samples) worst = std::max(worst, s.herm_err);
    return worst;
}

double Trajectory::min_eigenvalue() const {
    double worst = 0.0;
    for (const Sample& s : samples) worst = std::min(worst, s.min_eig);
    return worst;
}

double Trajectory::average_d(double t0, double t1) const {
    double sum = 0.0;
    long count = 0;
    for (const Sample& s : samples) {
        if (s.t >= t0 - 1e-12 && s.t <= t1 + 1e-12) {
            sum += s.d;
            ++count;
        }
    }
    require<Error>(count > 0, "Trajectory::average_d: empty window");
    return sum / static_cast<double>(count);
}

double Trajectory::max_d(double t0, double t1) const {
    double worst = -1.0;
    for (const Sample& s : samples) {
        if (s.t >= t0 - 1e-12 && s.t <= t1 + 1e-12) worst = std::max(worst, s.d);
    }
    require<Error>(worst >= 0.0, "Trajectory::max_d: empty window");
    return worst;
}

namespace {

liouville::StateVec initial_state(const SimConfig& cfg) {
    liouville::StateVec s = liouville::StateVec::zero(2);
    if (cfg.initial_pop.empty()) {
        s.pop(0) = 1.0;  // ground state of H(0), ascending order
    } else {
        s.pop(0) = cfg.initial_pop[0];
        s.pop(1) = cfg.initial_pop[1];
    }
    if (!cfg.initial_coh.empty()) {
        s.coh(0) = cfg.initial_coh[0];
        s.coh(1) = std::conj(cfg.initial_coh[0]);
    }
    return s;
}

// One fixed-step pass at steps_per_period * 2^refinement.
Trajectory run_fixed(const Protocol& path, const SimConfig& cfg, int refinement) {
    const int dim = path.dim();
    const double T0 = path.period();
    const long spp = static_cast<long>(cfg.steps_per_period) << refinement;
    const long total_steps = spp * cfg.periods;
    const long stride = static_cast<long>(cfg.sample_stride) << refinement;
    const double h = T0 / static_cast<double>(spp);
    const double fd = cfg.fd_step_rel * T0;
    const thermo::DissipatorConfig diss = make_dissipator_config(cfg);

    Trajectory traj;
    traj.steps = total_steps;
    traj.refinements = refinement;
    traj.step_size = h;

    // The initial state is specified in the eigenbasis of H(0); with CD the
    // integration basis is the eigenbasis of H(0) + H_cd(0).
    spectral::SpectralDecomposition sample_basis =
        spectral::eigendecompose(path.hamiltonian(0.0), 0.0);
    const Matrix rho0 = liouville::devectorize(initial_state(cfg), sample_basis);
    liouville::EvalPoint ep = liouville::make_eval_point(path, 0.0, diss, cfg.with_cd, fd);
    Vector y = liouville::vectorize(rho0, ep.basis).flat();

    auto record = [&](double t, const liouville::EvalPoint& point) {
        Sample sample;
        sample.t = t;
        const liouville::StateVec state_E = liouville::StateVec::from_flat(dim, y);
        const Matrix rho = liouville::devectorize(state_E, point.basis);

        if (cfg.with_cd) {
            sample_basis = spectral::gauge_align(
                sample_basis, spectral::eigendecompose(path.hamiltonian(t), t));
        } else {
            sample_basis = point.basis;
        }
        sample.basis = sample_basis;
        sample.state = liouville::vectorize(rho, sample_basis);
        sample.d = spectral::trace_distance(rho, thermo::gibbs_state(sample_basis, cfg.beta));
        sample.trace_err = std::abs(rho.trace() - Complex(1.0));
        sample.herm_err = max_abs(Matrix(rho - rho.adjoint()));
        auto [eig, vec] = spectral::jacobi_eigensystem(hermitize(rho));
        sample.min_eig = eig.minCoeff();
        require<PositivityViolation>(sample.min_eig >= kPositivityFloor,
                                     "integrate: state eigenvalue " +
                                         std::to_string(sample.min_eig) + " at t = " +
                                         std::to_string(t));
        traj.samples.push_back(std::move(sample));
    };

    record(0.0, ep);
    Matrix gen_start = liouville::assemble_generator(ep).dense();

    for (long step = 0; step < total_steps; ++step) {
        const double t = static_cast<double>(step) * h;
        const liouville::EvalPoint ep_mid =
            liouville::make_eval_point(path, t + 0.5 * h, diss, cfg.with_cd, fd, &ep.basis);
        liouville::EvalPoint ep_end =
            liouville::make_eval_point(path, t + h, diss, cfg.with_cd, fd, &ep_mid.basis);

        const Matrix gen_mid = liouville::assemble_generator(ep_mid).dense();
        Matrix gen_end = liouville::assemble_generator(ep_end).dense();

        const Vector k1 = gen_start * y;
        const Vector k2 = gen_mid * Vector(y + 0.5 * h * k1);
        const Vector k3 = gen_mid * Vector(y + 0.5 * h * k2);
        const Vector k4 = gen_end * Vector(y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        ep = std::move(ep_end);
        gen_start = std::move(gen_end);
        if ((step + 1) % stride == 0) record(static_cast<double>(step + 1) * h, ep);
    }
    return traj;
}

double trajectory_deviation(const Trajectory& a, const Trajectory& b) {
    require<Error>(a.samples.size() == b.samples.size(),
                   "integrate: refinement sample grids differ");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const Sample& sa = a.samples[i];
        const Sample& sb = b.samples[i];
        worst = std::max(worst, std::abs(sa.d - sb.d));
        worst = std::max(worst, max_abs(Vector(sa.state.pop - sb.state.pop)));
        worst = std::max(worst, max_abs(Vector(sa.state.coh - sb.state.coh)));
    }
    return worst;
}

} // namespace

Trajectory integrate(const Protocol& path, const SimConfig& config) {
    config.check();
    require<ConfigError>(path.dim() == 2, "integrate: engine configs drive two-level protocols");
    Trajectory prev = run_fixed(path, config, 0);
    const double target = config.tolerance * config.periods;
    for (int refinement = 1; refinement <= config.max_refinements; ++refinement) {
        Trajectory cur = run_fixed(path, config, refinement);
        cur.agreement = trajectory_deviation(prev, cur);
        if (cur.agreement <= target) return cur;
        prev = std::move(cur);
    }
    throw StepsizeUnderflow("integrate: no step-halving agreement at " +
                            std::to_string(target) + " after " +
                            std::to_string(config.max_refinements) + " refinements (last " +
                            std::to_string(prev.agreement) + ")");
}

Trajectory integrate(const SimConfig& config) {
    const std::unique_ptr<Protocol> path = make_protocol(config.protocol);
    return integrate(*path, config);
}

std::vector<ScanRow> scan(const SimConfig& config, ScanAxis axis,
                          const std::vector<double>& grid, int jobs) {
    require<ConfigError>(!grid.empty(), "scan: empty grid");
    for (double v : grid) require<ConfigError>(v > 0.0, "scan: grid values must be positive");

    std::vector<ScanRow> rows(grid.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            SimConfig cfg = config;
            if (axis == ScanAxis::omega)
                cfg.protocol.omega = grid[i];
            else
                cfg.protocol.h = grid[i];
            ScanRow row;
            row.value = grid[i];
            row.with_cd = cfg.with_cd;
            try {
                const Trajectory traj = integrate(cfg);
                const double T0 = 2.0 * std::numbers::pi / cfg.protocol.omega;
                const double t_end = cfg.periods * T0;
                row.d_avg = traj.average_d(t_end - T0, t_end);
                row.d_max = traj.max_d(t_end - T0, t_end);
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            rows[i] = std::move(row);
        }
    };

    std::size_t n_workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                     : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min(n_workers, grid.size());
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    return rows;
}

std::vector<ExpandRow> expand(const SimConfig& config, int order) {
    require<ConfigError>(order >= 0 && order <= 2, "expand: order must be 0, 1, or 2");
    const std::unique_ptr<Protocol> path = make_protocol(config.protocol);
    const thermo::DissipatorConfig diss = make_dissipator_config(config);
    const double T0 = path->period();
    const double fd = config.fd_step_rel * T0;

    const Trajectory traj = integrate(*path, config);

    // Order-2 populations propagate under the effective generator on the
    // sample grid, starting from the configured initial populations.
    std::vector<RealVector> order2_pop;
    if (order == 2) {
        auto k_eff = [&](double t) {
            return expansion::effective_population_generator(
                liouville::assemble_generator(*path, t, diss, config.with_cd, fd));
        };
        RealVector p = initial_state(config).pop.real();
        order2_pop.push_back(p);
        for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
            const double t = traj.samples[i].t;
            const double dt = traj.samples[i + 1].t - t;
            const RealMatrix ka = k_eff(t);
            const RealMatrix km = k_eff(t + 0.5 * dt);
            const RealMatrix kb = k_eff(t + dt);
            const RealVector k1 = ka * p;
            const RealVector k2 = km * (p + 0.5 * dt * k1);
            const RealVector k3 = km * (p + 0.5 * dt * k2);
            const RealVector k4 = kb * (p + dt * k3);
            p += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            order2_pop.push_back(p);
        }
    }

    std::vector<ExpandRow> rows;
    rows.reserve(traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const Sample& sample = traj.samples[i];
        ExpandRow row;
        row.t = sample.t;
        row.integrated = sample.state;

        const expansion::ExpansionResult er =
            expansion::first_order(*path, sample.t, diss, config.with_cd, fd);
        liouville::StateVec pert = liouville::StateVec::zero(2);
        pert.pop = er.pop_terms[0].cast<Complex>();
        if (order >= 1) {
            pert.pop += er.pop_terms[1].cast<Complex>();
            pert.coh = er.coh_terms[1];
        }
        if (order == 2) pert.pop = order2_pop[i].cast<Complex>();

        // Move the perturbative state into the sample basis so the CSV
        // columns are directly comparable.
        row.expanded = cd::basis_transform(pert, er.basis, sample.basis);
        const Matrix diff = liouville::coeff_from_state(row.expanded) -
                            liouville::coeff_from_state(row.integrated);
        row.diff_norm = diff.norm();
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

void write_metadata(std::ostream& out, const SimConfig& cfg, const std::string& what) {
    out << "# cdsim " << kVersion << " " << what << "\n";
    out << "# config = " << config_to_json(cfg) << "\n";
    out << "# seed = " << cfg.seed << "\n";
}

} // namespace

void write_trajectory_csv(std::ostream& out, const SimConfig& cfg, const Trajectory& traj) {
    write_metadata(out, cfg, "simulate");
    out << "# steps = " << traj.steps << ", refinements = " << traj.refinements
        << ", agreement = " << util::format_g17(traj.agreement) << "\n";
    out << "t,d,pop_1,pop_2,re_coh_12,im_coh_12,re_coh_21,im_coh_21,trace_err,min_eig\n";
    for (const Sample& s : traj.samples) {
        out << util::format_g17(s.t) << ',' << util::format_g17(s.d) << ','
            << util::format_g17(s.state.pop(0).real()) << ','
            << util::format_g17(s.state.pop(1).real()) << ','
            << util::format_g17(s.state.coh(0).real()) << ','
            << util::format_g17(s.state.coh(0).imag()) << ','
            << util::format_g17(s.state.coh(1).real()) << ','
            << util::format_g17(s.state.coh(1).imag()) << ','
            << util::format_g17(s.trace_err) << ',' << util::format_g17(s.min_eig) << "\n";
    }
}

void write_scan_csv(std::ostream& out, const SimConfig& cfg, ScanAxis axis,
                    const std::vector<ScanRow>& rows) {
    write_metadata(out, cfg, "scan");
    out << "# axis = " << (axis == ScanAxis::omega ? "omega" : "h") << "\n";
    out << (axis == ScanAxis::omega ? "omega" : "h") << ",d_avg,d_max,with_cd,error\n";
    for (const ScanRow& r : rows) {
        out << util::format_g17(r.value) << ',';
        if (r.error.empty())
            out << util::format_g17(r.d_avg) << ',' << util::format_g17(r.d_max);
        else
            out << "nan,nan";
        out << ',' << (r.with_cd ? 1 : 0) << ",\"" << r.error << "\"\n";
    }
}

void write_expand_csv(std::ostream& out, const SimConfig& cfg, int order,
                      const std::vector<ExpandRow>& rows) {
    write_metadata(out, cfg, "expand");
    out << "# order = " << order << "\n";
    out << "t,int_pop_1,int_pop_2,re_int_coh_12,im_int_coh_12,"
           "exp_pop_1,exp_pop_2,re_exp_coh_12,im_exp_coh_12,diff_norm\n";
    for (const ExpandRow& r : rows) {
        out << util::format_g17(r.t) << ','
            << util::format_g17(r.integrated.pop(0).real()) << ','
            << util::format_g17(r.integrated.pop(1).real()) << ','
            << util::format_g17(r.integrated.coh(0).real()) << ','
            << util::format_g17(r.integrated.coh(0).imag()) << ','
            << util::format_g17(r.expanded.pop(0).real()) << ','
            << util::format_g17(r.expanded.pop(1).real()) << ','
            << util::format_g17(r.expanded.coh(0).real()) << ','
            << util::format_g17(r.expanded.coh(0).imag()) << ','
            << util::format_g17(r.diff_norm) << "\n";
    }
}

} // namespace cdsim::engine
