#include "traitlab/config.hpp"

#include <fstream>
#include <sstream>

#include "traitlab/io.hpp"

namespace traitlab {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        size_t used = 0;
        double v = std::stod(text, &used);
        if (trim(text.substr(used)).empty()) return v;
    } catch (...) {
    }
    throw ValidationError("config: '" + key + "' is not a number: " + text);
}

}  // namespace

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config: line " + std::to_string(lineno) + " has no '='");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ValidationError("config: empty key on line " + std::to_string(lineno));
        cfg.entries_[key] = value;
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str());
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string Config::get_string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ValidationError("config: missing key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const { return parse_double(key, get_string(key)); }

double Config::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : parse_double(key, it->second);
}

int Config::get_int(const std::string& key, int fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    double v = parse_double(key, it->second);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw ValidationError("config: '" + key + "' is not an integer");
    return i;
}

std::vector<double> Config::get_list(const std::string& key) const {
    std::string text = get_string(key);
    std::vector<double> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ValidationError("config: '" + key + "' is an empty list");
    return out;
}

namespace {

std::pair<std::vector<double>, std::vector<double>> load_two_column(const std::string& path) {
    Field field = read_field_csv(path);
    std::vector<double> thetas(field.grid.n()), values = field.values;
    for (int i = 0; i < field.grid.n(); ++i) thetas[i] = field.grid.node(i);
    return {thetas, values};
}

}  // namespace

FitnessSpec fitness_from_config(const Config& cfg) {
    std::string kind = cfg.get_string("fitness.kind");
    if (kind == "constant") return FitnessSpec::constant(cfg.get_double("fitness.r_max"));
    if (kind == "quadratic")
        return FitnessSpec::quadratic(cfg.get_double("fitness.r_max"), cfg.get_double("fitness.alpha"));
    if (kind == "gaussian_dip")
        return FitnessSpec::gaussian_dip(cfg.get_double("fitness.a"), cfg.get_double("fitness.b"),
                                         cfg.get_double("fitness.c"));
    if (kind == "tabulated") {
        auto [thetas, values] = load_two_column(cfg.get_string("fitness.file"));
        return FitnessSpec::tabulated(std::move(thetas), std::move(values));
    }
    throw ValidationError("config: unknown fitness.kind '" + kind + "'");
}

AlleeSpec allee_from_config(const Config& cfg) {
    std::string kind = cfg.get_string("allee.kind", "none");
    if (kind == "none") return AlleeSpec::none();
    if (kind == "polynomial_bump")
        return AlleeSpec::polynomial_bump(cfg.get_double("allee.amplitude"), cfg.get_double("allee.eps"));
    if (kind == "smoothed_triangle") {
        double eps = cfg.get_double("allee.eps");
        return AlleeSpec::smoothed_triangle(cfg.get_double("allee.rate"), eps,
                                            cfg.get_double("allee.delta", eps / 10.0));
    }
    if (kind == "exp_form") return AlleeSpec::exp_form(cfg.get_double("allee.r_max"));
    throw ValidationError("config: unknown allee.kind '" + kind + "'");
}

InitialDataSpec initial_from_config(const Config& cfg) {
    std::string kind = cfg.get_string("initial.kind", "rectangle");
    if (kind == "rectangle")
        return InitialDataSpec::rectangle(cfg.get_double("initial.H"), cfg.get_double("initial.L"));
    if (kind == "plateau")
        return InitialDataSpec::scaled_plateau(cfg.get_double("initial.amplitude"),
                                               cfg.get_double("initial.sigma"));
    if (kind == "tabulated") {
        auto [thetas, values] = load_two_column(cfg.get_string("initial.file"));
        return InitialDataSpec::tabulated(std::move(thetas), std::move(values));
    }
    throw ValidationError("config: unknown initial.kind '" + kind + "'");
}

ModelSpec model_from_config(const Config& cfg) {
    return {fitness_from_config(cfg), allee_from_config(cfg), initial_from_config(cfg)};
}

Grid grid_from_config(const Config& cfg) {
    return Grid(cfg.get_double("grid.theta_min", -40.0), cfg.get_double("grid.theta_max", 40.0),
                cfg.get_int("grid.n", 801));
}

SimConfig sim_from_config(const Config& cfg) {
    SimConfig sim;
    sim.grid = grid_from_config(cfg);
    sim.t_end = cfg.get_double("sim.t_end", 5.0);
    sim.rtol = cfg.get_double("sim.rtol", 1e-6);
    sim.atol = cfg.get_double("sim.atol", 1e-9);
    sim.dt_init = cfg.get_double("sim.dt_init", 1e-4);
    sim.dt_max = cfg.get_double("sim.dt_max", 0.05);
    sim.sample_every = cfg.get_double("sim.sample_every", 0.1);
    if (cfg.has("sim.extinct_below") || cfg.has("sim.persist_above")) {
        EarlyStop stop;
        stop.extinct_below = cfg.get_double("sim.extinct_below", 0.0);
        stop.persist_above = cfg.get_double("sim.persist_above", 0.0);
        sim.early_stop = stop;
    }
    return sim;
}

SweepSpec sweep_from_config(const Config& cfg) {
    SweepSpec spec{fitness_from_config(cfg), allee_from_config(cfg), {}, {}, sim_from_config(cfg), 1};
    if (cfg.has("sweep.h_values")) {
        spec.h_values = cfg.get_list("sweep.h_values");
    } else {
        // default 30-point height axis over [0.02, 2]
        double lo = cfg.get_double("sweep.h_min", 0.02), hi = cfg.get_double("sweep.h_max", 2.0);
        int n = cfg.get_int("sweep.h_count", 30);
        for (int i = 0; i < n; ++i) spec.h_values.push_back(lo + (hi - lo) * i / (n - 1));
    }
    if (cfg.has("sweep.l_values")) {
        spec.l_values = cfg.get_list("sweep.l_values");
    } else {
        double lo = cfg.get_double("sweep.l_min", 0.2), hi = cfg.get_double("sweep.l_max", 30.0);
        int n = cfg.get_int("sweep.l_count", 30);
        for (int i = 0; i < n; ++i) spec.l_values.push_back(lo + (hi - lo) * i / (n - 1));
    }
    spec.workers = cfg.get_int("sweep.workers", 1);
    // Decided cells can stop before T: wire the rigorous low side to ε_eff.
    // The high side stays off by default; a transiently large peak does not
    // decide persistence (large initial data may still die by T).
    if (!cfg.has("sim.extinct_below") && !cfg.has("sim.persist_above") &&
        cfg.get_string("sweep.early_stop", "on") == "on") {
        ModelSpec probe{spec.fitness, spec.allee, InitialDataSpec::rectangle(1.0, 1.0)};
        EarlyStop stop;
        stop.extinct_below = allee_threshold(probe);
        spec.sim.early_stop = stop;
    }
    return spec;
}

}  // namespace traitlab
