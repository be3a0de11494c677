#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "traitlab/config.hpp"
#include "traitlab/diagnostics.hpp"
#include "traitlab/errors.hpp"
#include "traitlab/integrator.hpp"
#include "traitlab/io.hpp"
#include "traitlab/oracles.hpp"
#include "traitlab/stationary.hpp"
#include "traitlab/sweep.hpp"

namespace fs = std::filesystem;
using namespace traitlab;

namespace {

constexpr const char* kVersion = "traitlab 1.0.0";
constexpr int kExitValidation = 2;
constexpr int kExitIntegration = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir, bool quiet) {
    Config cfg = Config::parse_file(config_path);
    ModelSpec model = model_from_config(cfg);
    SimConfig sim = sim_from_config(cfg);
    sim.validate();

    ValidationReport report = validate_model(model, &sim.grid);
    if (!report.all_pass()) {
        std::cerr << "model validation failed:\n" << report.summary();
        return kExitValidation;
    }

    Trajectory traj = simulate(model, sim);

    fs::create_directories(out_dir);
    RunManifest manifest(kVersion, slurp(config_path));
    std::string trace_path = (fs::path(out_dir) / "mass_trace.csv").string();
    write_mass_trace_csv(traj, trace_path);
    manifest.add_file(trace_path);
    std::string snap_dir = (fs::path(out_dir) / "snapshots").string();
    write_snapshots(traj, snap_dir);
    for (size_t k = 0; k < traj.samples.size(); ++k) {
        std::ostringstream name;
        name << "snap_" << std::setw(4) << std::setfill('0') << k << ".csv";
        manifest.add_file((fs::path(snap_dir) / name.str()).string());
    }

    Outcome outcome;
    if (!model.allee.is_none()) {
        outcome = classify(traj.final_field(), allee_threshold(model));
    } else {
        outcome.peak = traj.final_field().max_value();
        outcome.mass_final = total_mass(traj.final_field());
        outcome.center = traj.final_field().values[(sim.grid.n() - 1) / 2];
    }
    MassBalanceReport mass_report;
    if (traj.samples.size() >= 3) mass_report = mass_balance_residual(traj, model);
    EnvelopeReport envelope = envelope_check(traj, model);
    InvariantReport invariants = check_invariants(traj, model, sim.atol);

    std::string diag_path = (fs::path(out_dir) / "diagnostics.json").string();
    std::ofstream(diag_path) << diagnostics_json(outcome, mass_report, envelope, invariants) << '\n';
    manifest.add_file(diag_path);
    manifest.write((fs::path(out_dir) / "manifest.json").string());

    if (!quiet)
        std::cout << "label=" << to_string(outcome.label) << " peak=" << format_double(outcome.peak)
                  << " mass=" << format_double(outcome.mass_final) << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, int workers_override,
              bool quiet) {
    Config cfg = Config::parse_file(config_path);
    SweepSpec spec = sweep_from_config(cfg);
    if (workers_override > 0) spec.workers = workers_override;
    PhaseDiagram diagram = run_sweep(spec);

    fs::create_directories(out_dir);
    RunManifest manifest(kVersion, slurp(config_path));
    std::string json_path = (fs::path(out_dir) / "phase_diagram.json").string();
    std::string csv_path = (fs::path(out_dir) / "phase_diagram.csv").string();
    write_phase_diagram_json(diagram, json_path);
    write_phase_diagram_csv(diagram, csv_path);
    manifest.add_file(json_path);
    manifest.add_file(csv_path);
    manifest.write((fs::path(out_dir) / "manifest.json").string());

    if (!quiet) {
        for (size_t hi = 0; hi < diagram.h_values.size(); ++hi)
            std::cout << "H=" << format_double(diagram.h_values[hi]) << " scenario "
                      << to_string(diagram.row_scenarios[hi]) << "\n";
    }
    return 0;
}

int cmd_stationary(const std::string& config_path, const std::string& out_dir, bool quiet) {
    Config cfg = Config::parse_file(config_path);
    double r = cfg.get_double("stationary.r");
    AlleeSpec allee = allee_from_config(cfg);
    Grid grid(cfg.get_double("grid.theta_min", -40.0), cfg.get_double("grid.theta_max", 40.0),
              cfg.get_int("grid.n", 1601));

    StationaryPair pair = find_stationary_pair(r, allee);
    EnergyModel em(r, allee);
    StationaryProfile p1 = build_profile(pair.lambda1, em);
    StationaryProfile p2 = build_profile(pair.lambda2, em);
    PdeResidual res1 = residual_pde(p1, grid, r, allee);
    PdeResidual res2 = residual_pde(p2, grid, r, allee);

    fs::create_directories(out_dir);
    RunManifest manifest(kVersion, slurp(config_path));
    std::string path1 = (fs::path(out_dir) / "profile_lambda1.csv").string();
    std::string path2 = (fs::path(out_dir) / "profile_lambda2.csv").string();
    write_field_csv(p1.sample(grid), path1);
    write_field_csv(p2.sample(grid), path2);
    manifest.add_file(path1);
    manifest.add_file(path2);

    double eps = allee.eps();
    std::ostringstream json;
    json << "{\n"
         << "  \"lambda1\": " << format_double(pair.lambda1) << ",\n"
         << "  \"lambda2\": " << format_double(pair.lambda2) << ",\n"
         << "  \"j_at_half_r\": " << format_double(pair.j_mid) << ",\n"
         << "  \"int_f\": " << format_double(pair.int_f) << ",\n"
         << "  \"bump_integral_check\": {\"lower\": " << format_double(2.0 * eps * eps)
         << ", \"value\": " << format_double(pair.int_f / r) << ", \"upper\": "
         << format_double(2.0 * eps * eps + r * r * r / 128.0 -
                          std::sqrt(2.0) * eps / 8.0 * std::pow(r, 1.5))
         << "},\n"
         << "  \"residual_lambda1\": {\"max_interior\": " << format_double(res1.max_interior)
         << ", \"mass_gap\": " << format_double(res1.mass_gap) << "},\n"
         << "  \"residual_lambda2\": {\"max_interior\": " << format_double(res2.max_interior)
         << ", \"mass_gap\": " << format_double(res2.mass_gap) << "}\n"
         << "}";
    std::string report_path = (fs::path(out_dir) / "stationary.json").string();
    std::ofstream(report_path) << json.str() << '\n';
    manifest.add_file(report_path);
    manifest.write((fs::path(out_dir) / "manifest.json").string());

    if (!quiet)
        std::cout << "lambda1=" << format_double(pair.lambda1)
                  << " lambda2=" << format_double(pair.lambda2) << "\n";
    return 0;
}

int cmd_oracle(const std::vector<std::string>& args) {
    if (args.empty()) {
        std::cerr << "oracle: expected a quantity name\n";
        return kExitValidation;
    }
    auto num = [&](size_t i) {
        if (i >= args.size()) throw ValidationError("oracle: missing argument");
        return std::stod(args[i]);
    };
    const std::string& what = args[0];
    if (what == "gaussian") {
        auto state = oracles::gaussian_ground_state(num(1), num(2));
        std::cout << "lambda = " << format_double(state.lambda) << "\n"
                  << "p0 = " << format_double(state.peak()) << "\n";
    } else if (what == "peak") {
        std::cout << format_double(oracles::peak_height(num(1), num(2))) << "\n";
    } else if (what == "optimal-alpha") {
        std::cout << format_double(oracles::optimal_alpha(num(1))) << "\n";
    } else if (what == "logistic") {
        std::cout << format_double(oracles::logistic_mass(num(1), num(2), num(3))) << "\n";
    } else if (what == "lower-mass") {
        std::cout << format_double(oracles::lower_mass(num(1), num(2), num(3))) << "\n";
    } else if (what == "ubar") {
        std::cout << format_double(oracles::envelope_ubar(num(1), num(2), num(3), num(4), num(5)))
                  << "\n";
    } else if (what == "tstar") {
        std::cout << format_double(oracles::tstar(num(1), num(2), num(3))) << "\n";
    } else if (what == "ubar-min") {
        std::cout << format_double(oracles::ubar_min(num(1), num(2), num(3), num(4))) << "\n";
    } else if (what == "extinction-g") {
        std::cout << format_double(extinction_g(num(1), num(2), num(3))) << "\n";
    } else {
        std::cerr << "oracle: unknown quantity '" << what << "'\n";
        return kExitValidation;
    }
    return 0;
}

int cmd_verify(const std::string& config_path, const std::string& run_dir, bool quiet) {
    Config cfg = Config::parse_file(config_path);
    ModelSpec model = model_from_config(cfg);
    SimConfig sim = sim_from_config(cfg);

    // Rebuild the trajectory from the emitted files.
    std::ifstream trace(fs::path(run_dir) / "mass_trace.csv");
    if (!trace) {
        std::cerr << "verify: missing mass_trace.csv in " << run_dir << "\n";
        return kExitValidation;
    }
    Trajectory traj;
    std::string line;
    std::getline(trace, line);  // header
    while (std::getline(trace, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b, c;
        std::getline(row, a, ',');
        std::getline(row, b, ',');
        std::getline(row, c, ',');
        traj.mass_trace.push_back({std::stod(a), std::stod(b), std::stod(c)});
    }
    std::vector<double> times;
    for (const auto& p : traj.mass_trace) times.push_back(p.t);
    traj.samples = read_snapshots((fs::path(run_dir) / "snapshots").string(), times);
    for (size_t k = 0; k < times.size(); ++k) traj.samples[k].t = times[k];

    InvariantReport invariants = check_invariants(traj, model, sim.atol);
    EnvelopeReport envelope = envelope_check(traj, model);
    MassBalanceReport mass_report;
    if (traj.samples.size() >= 3) mass_report = mass_balance_residual(traj, model);

    Outcome outcome;
    if (!model.allee.is_none()) outcome = classify(traj.samples.back(), allee_threshold(model));

    std::string report_path = (fs::path(run_dir) / "verify_report.json").string();
    std::ofstream(report_path) << diagnostics_json(outcome, mass_report, envelope, invariants)
                               << '\n';
    bool ok = invariants.all_ok() && envelope.heat_kernel_ok &&
              (!envelope.ubar_applicable || envelope.ubar_ok);
    if (!quiet) std::cout << (ok ? "invariants ok" : "invariant violations found") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlocal trait-structured population dynamics laboratory"};
    app.set_version_flag("--version", kVersion);

    std::string config_path, out_dir = "out";
    int workers = 0;
    bool quiet = false;
    std::vector<std::string> oracle_args;

    auto add_common = [&](CLI::App* sub, bool needs_config = true) {
        if (needs_config)
            sub->add_option("--config", config_path, "key-value config file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--quiet", quiet, "suppress informational output");
    };

    CLI::App* simulate_cmd = app.add_subcommand("simulate", "run one trajectory");
    add_common(simulate_cmd);
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run an (H,L) phase-diagram sweep");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--workers", workers, "parallel worker count");
    CLI::App* stationary_cmd = app.add_subcommand("stationary", "construct the stationary pair");
    add_common(stationary_cmd);
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "print closed-form reference values");
    oracle_cmd->add_option("args", oracle_args, "quantity name and parameters");
    CLI::App* verify_cmd = app.add_subcommand("verify", "check invariants on a finished run");
    add_common(verify_cmd);

    app.require_subcommand(1);
    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate_cmd->parsed()) return cmd_simulate(config_path, out_dir, quiet);
        if (sweep_cmd->parsed()) return cmd_sweep(config_path, out_dir, workers, quiet);
        if (stationary_cmd->parsed()) return cmd_stationary(config_path, out_dir, quiet);
        if (oracle_cmd->parsed()) return cmd_oracle(oracle_args);
        if (verify_cmd->parsed()) return cmd_verify(config_path, out_dir, quiet);
    } catch (const BlowupError& err) {
        std::cerr << "integration failure: " << err.what() << "\n";
        return kExitIntegration;
    } catch (const StiffnessError& err) {
        std::cerr << "integration failure: " << err.what() << "\n";
        return kExitIntegration;
    } catch (const ValidationError& err) {
        std::cerr << "validation error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const BracketError& err) {
        std::cerr << "validation error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
