#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "traitlab/diagnostics.hpp"
#include "traitlab/grid.hpp"
#include "traitlab/integrator.hpp"
#include "traitlab/stationary.hpp"
#include "traitlab/sweep.hpp"

namespace traitlab {

/// Shortest round-trip decimal formatting (bitwise-exact on re-parse).
std::string format_double(double v);

void write_field_csv(const Field& field, const std::string& path);
/// Re-reads a (θ, u) CSV; the timestamp is not part of the format.
Field read_field_csv(const std::string& path, double t = 0.0);

void write_mass_trace_csv(const Trajectory& traj, const std::string& path);
void write_snapshots(const Trajectory& traj, const std::string& dir);
std::vector<Field> read_snapshots(const std::string& dir, const std::vector<double>& times);

std::string diagnostics_json(const Outcome& outcome, const MassBalanceReport& mass_report,
                             const EnvelopeReport& envelope, const InvariantReport& invariants);

void write_phase_diagram_json(const PhaseDiagram& diagram, const std::string& path);
void write_phase_diagram_csv(const PhaseDiagram& diagram, const std::string& path);

uint64_t fnv1a64_file(const std::string& path);

/// Run inventory: config echo, version, timestamps, per-file digests.
class RunManifest {
  public:
    RunManifest(std::string tool_version, std::string config_echo);
    void add_file(const std::string& path);
    void write(const std::string& path) const;

  private:
    std::string version_;
    std::string config_echo_;
    std::string started_;
    std::vector<std::pair<std::string, uint64_t>> files_;
};

}  // namespace traitlab
