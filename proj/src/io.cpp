#include "traitlab/io.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace traitlab {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("io: cannot write " + path);
    return out;
}

double parse_double_token(const std::string& token, const std::string& path) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ValidationError("io: bad number '" + token + "' in " + path);
    return v;
}

}  // namespace

void write_field_csv(const Field& field, const std::string& path) {
    auto out = open_out(path);
    out << "theta,u\n";
    for (int i = 0; i < field.grid.n(); ++i)
        out << format_double(field.grid.node(i)) << ',' << format_double(field.values[i]) << '\n';
}

Field read_field_csv(const std::string& path, double t) {
    std::ifstream in(path);
    if (!in) throw ValidationError("io: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("io: empty field file " + path);
    std::vector<double> thetas, values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        size_t comma = line.find(',');
        if (comma == std::string::npos) throw ValidationError("io: malformed row in " + path);
        thetas.push_back(parse_double_token(line.substr(0, comma), path));
        values.push_back(parse_double_token(line.substr(comma + 1), path));
    }
    if (thetas.size() < 3) throw ValidationError("io: too few rows in " + path);
    Grid grid(thetas.front(), thetas.back(), static_cast<int>(thetas.size()));
    return Field(grid, t, std::move(values));
}

void write_mass_trace_csv(const Trajectory& traj, const std::string& path) {
    auto out = open_out(path);
    out << "t,rho,max_u\n";
    for (const auto& p : traj.mass_trace)
        out << format_double(p.t) << ',' << format_double(p.rho) << ',' << format_double(p.max_u)
            << '\n';
}

void write_snapshots(const Trajectory& traj, const std::string& dir) {
    fs::create_directories(dir);
    for (size_t k = 0; k < traj.samples.size(); ++k) {
        std::ostringstream name;
        name << "snap_" << std::setw(4) << std::setfill('0') << k << ".csv";
        write_field_csv(traj.samples[k], (fs::path(dir) / name.str()).string());
    }
}

std::vector<Field> read_snapshots(const std::string& dir, const std::vector<double>& times) {
    std::vector<Field> fields;
    for (size_t k = 0; k < times.size(); ++k) {
        std::ostringstream name;
        name << "snap_" << std::setw(4) << std::setfill('0') << k << ".csv";
        fields.push_back(read_field_csv((fs::path(dir) / name.str()).string(), times[k]));
    }
    return fields;
}

std::string diagnostics_json(const Outcome& outcome, const MassBalanceReport& mass_report,
                             const EnvelopeReport& envelope, const InvariantReport& invariants) {
    json doc;
    doc["label"] = to_string(outcome.label);
    doc["peak"] = outcome.peak;
    doc["center"] = outcome.center;
    doc["mass_final"] = outcome.mass_final;
    doc["residuals"] = {{"max_relative", mass_report.max_relative},
                        {"mean_relative", mass_report.mean_relative},
                        {"worst_sample", mass_report.worst_sample}};
    json env;
    env["heat_kernel_ok"] = envelope.heat_kernel_ok;
    env["heat_kernel_worst_margin"] = envelope.heat_kernel_worst_margin;
    env["ubar_applicable"] = envelope.ubar_applicable;
    if (envelope.ubar_applicable) {
        env["ubar_ok"] = envelope.ubar_ok;
        env["ubar_worst_margin"] = envelope.ubar_worst_margin;
        env["K"] = envelope.K;
        env["M"] = envelope.M;
    }
    doc["envelope_margins"] = env;
    json inv;
    inv["all_ok"] = invariants.all_ok();
    inv["nonneg_ok"] = invariants.nonneg_ok;
    inv["worst_min"] = invariants.worst_min;
    inv["mass_bound_ok"] = invariants.mass_bound_ok;
    inv["radial_applicable"] = invariants.radial_applicable;
    if (invariants.radial_applicable) {
        inv["radial_monotone_ok"] = invariants.radial_monotone_ok;
        inv["radial_bound_ok"] = invariants.radial_bound_ok;
    }
    inv["smoothing_ok"] = invariants.smoothing_ok;
    doc["invariants"] = inv;
    return doc.dump(2);
}

void write_phase_diagram_json(const PhaseDiagram& diagram, const std::string& path) {
    json doc;
    doc["h_axis"] = diagram.h_values;
    doc["l_axis"] = diagram.l_values;
    doc["eps_eff"] = diagram.eps_eff;
    json labels = json::array(), centers = json::array(), peaks = json::array();
    for (size_t hi = 0; hi < diagram.h_values.size(); ++hi) {
        json lr = json::array(), cr = json::array(), pr = json::array();
        for (size_t lj = 0; lj < diagram.l_values.size(); ++lj) {
            const CellResult& cell = diagram.cell(static_cast<int>(hi), static_cast<int>(lj));
            lr.push_back(cell.ok ? to_string(cell.outcome.label) : "failed");
            cr.push_back(cell.u_center);
            pr.push_back(cell.outcome.peak);
        }
        labels.push_back(lr);
        centers.push_back(cr);
        peaks.push_back(pr);
    }
    doc["labels"] = labels;
    doc["center_values"] = centers;
    doc["peaks"] = peaks;
    json scen = json::array();
    for (Scenario s : diagram.row_scenarios) scen.push_back(to_string(s));
    doc["scenarios"] = scen;
    open_out(path) << doc.dump(2) << '\n';
}

void write_phase_diagram_csv(const PhaseDiagram& diagram, const std::string& path) {
    auto out = open_out(path);
    out << "H,L,label,u_T0,peak,mass_final\n";
    for (size_t hi = 0; hi < diagram.h_values.size(); ++hi) {
        for (size_t lj = 0; lj < diagram.l_values.size(); ++lj) {
            const CellResult& cell = diagram.cell(static_cast<int>(hi), static_cast<int>(lj));
            out << format_double(diagram.h_values[hi]) << ',' << format_double(diagram.l_values[lj])
                << ',' << (cell.ok ? to_string(cell.outcome.label) : "failed") << ','
                << format_double(cell.u_center) << ',' << format_double(cell.outcome.peak) << ','
                << format_double(cell.outcome.mass_final) << '\n';
        }
    }
}

uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("io: cannot digest " + path);
    uint64_t hash = 1469598103934665603ull;
    char chunk[4096];
    while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(chunk[i]);
            hash *= 1099511628211ull;
        }
        if (!in) break;
    }
    return hash;
}

RunManifest::RunManifest(std::string tool_version, std::string config_echo)
    : version_(std::move(tool_version)), config_echo_(std::move(config_echo)) {
    auto now = std::chrono::system_clock::now();
    auto t = std::chrono::system_clock::to_time_t(now);
    std::ostringstream stamp;
    stamp << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
    started_ = stamp.str();
}

void RunManifest::add_file(const std::string& path) {
    files_.emplace_back(path, fnv1a64_file(path));
}

void RunManifest::write(const std::string& path) const {
    json doc;
    doc["tool_version"] = version_;
    doc["started"] = started_;
    doc["config"] = config_echo_;
    json files = json::array();
    for (const auto& [file, digest] : files_) {
        std::ostringstream hex;
        hex << std::hex << std::setw(16) << std::setfill('0') << digest;
        files.push_back({{"path", file}, {"fnv1a64", hex.str()}});
    }
    doc["outputs"] = files;
    open_out(path) << doc.dump(2) << '\n';
}

}  // namespace traitlab
