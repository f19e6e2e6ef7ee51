// cdsim_main.cpp — Command line front end: simulate, scan, expand, validate.
//
// Exit codes: 0 success, 1 validation or physics-invariant failure, 2 config
// or usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cdsim/engine.hpp"
#include "cdsim/validate.hpp"

namespace {

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out.good()) throw cdsim::ConfigError("cannot open output file '" + path + "'");
    return out;
}

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> grid;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            grid.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw cdsim::ConfigError("bad grid entry '" + item + "'");
        }
    }
    if (grid.empty()) throw cdsim::ConfigError("empty grid");
    return grid;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodically driven open-system simulator (GKLS block generator with "
                 "counterdiabatic driving)"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Integrate one configuration, emit d(t) CSV");
    std::string sim_config, sim_out;
    bool sim_cd = false;
    sim->add_option("--config", sim_config, "JSON configuration file")->required();
    sim->add_flag("--cd", sim_cd, "Enable the counterdiabatic term (overrides config)");
    sim->add_option("--out", sim_out, "Output CSV path")->required();

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "Sweep omega or h, emit steady-state d stats");
    std::string scan_config, scan_axis, scan_grid, scan_out;
    int scan_jobs = 1;
    scan_cmd->add_option("--config", scan_config, "JSON configuration file")->required();
    scan_cmd->add_option("--axis", scan_axis, "Scan axis: omega or h")->required();
    scan_cmd->add_option("--grid", scan_grid, "Comma-separated grid values")->required();
    scan_cmd->add_option("--out", scan_out, "Output CSV path")->required();
    scan_cmd->add_option("--jobs", scan_jobs, "Worker threads (0 = hardware)");

    // expand
    auto* exp_cmd = app.add_subcommand("expand", "Perturbative vs integrated state per sample");
    std::string exp_config, exp_out;
    int exp_order = 1;
    exp_cmd->add_option("--config", exp_config, "JSON configuration file")->required();
    exp_cmd->add_option("--order", exp_order, "Expansion order: 0, 1 or 2")
        ->check(CLI::Range(0, 2));
    exp_cmd->add_option("--out", exp_out, "Output CSV path")->required();

    // validate
    auto* val_cmd = app.add_subcommand("validate", "Run the physics invariant suite");
    bool val_json = false, val_quick = false;
    std::string val_inject;
    val_cmd->add_flag("--json", val_json, "Emit a JSON report");
    val_cmd->add_flag("--quick", val_quick, "Trimmed trial counts, skip the slow checks");
    val_cmd->add_option("--inject", val_inject,
                        "Mutation test: kms-sign, gauge-sign or delta-sign");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sim) {
            cdsim::engine::SimConfig cfg = cdsim::engine::load_config(sim_config);
            if (sim_cd) cfg.with_cd = true;
            const auto traj = cdsim::engine::integrate(cfg);
            auto out = open_output(sim_out);
            cdsim::engine::write_trajectory_csv(out, cfg, traj);
            std::cerr << "simulate: " << traj.samples.size() << " samples, "
                      << traj.refinements << " refinements, agreement " << traj.agreement
                      << "\n";
        } else if (*scan_cmd) {
            cdsim::engine::SimConfig cfg = cdsim::engine::load_config(scan_config);
            cdsim::engine::ScanAxis axis;
            if (scan_axis == "omega")
                axis = cdsim::engine::ScanAxis::omega;
            else if (scan_axis == "h")
                axis = cdsim::engine::ScanAxis::h;
            else
                throw cdsim::ConfigError("scan axis must be 'omega' or 'h'");
            const auto rows = cdsim::engine::scan(cfg, axis, parse_grid(scan_grid), scan_jobs);
            auto out = open_output(scan_out);
            cdsim::engine::write_scan_csv(out, cfg, axis, rows);
            for (const auto& row : rows) {
                if (!row.error.empty())
                    std::cerr << "scan: value " << row.value << " failed: " << row.error << "\n";
            }
        } else if (*exp_cmd) {
            cdsim::engine::SimConfig cfg = cdsim::engine::load_config(exp_config);
            const auto rows = cdsim::engine::expand(cfg, exp_order);
            auto out = open_output(exp_out);
            cdsim::engine::write_expand_csv(out, cfg, exp_order, rows);
        } else if (*val_cmd) {
            cdsim::validate::Options options;
            options.quick = val_quick;
            if (!val_inject.empty()) options.faults = cdsim::validate::parse_injection(val_inject);
            const auto report = cdsim::validate::run(options);
            std::cout << (val_json ? cdsim::validate::to_json(report)
                                   : cdsim::validate::to_text(report));
            return report.pass ? 0 : 1;
        }
    } catch (const cdsim::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cdsim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
