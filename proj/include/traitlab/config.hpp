#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "traitlab/integrator.hpp"
#include "traitlab/model.hpp"
#include "traitlab/sweep.hpp"

namespace traitlab {

/// Flat `section.key = value` store; `#` starts a comment.
class Config {
  public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::vector<double> get_list(const std::string& key) const;  // comma-separated

    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

FitnessSpec fitness_from_config(const Config& cfg);
AlleeSpec allee_from_config(const Config& cfg);
InitialDataSpec initial_from_config(const Config& cfg);
ModelSpec model_from_config(const Config& cfg);
Grid grid_from_config(const Config& cfg);
SimConfig sim_from_config(const Config& cfg);
SweepSpec sweep_from_config(const Config& cfg);

}  // namespace traitlab
