#pragma once

#include <stdexcept>
#include <string>

namespace traitlab {

/// A model or configuration violates one of the structural assumptions.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A field went non-finite during time stepping.
struct BlowupError : std::runtime_error {
    BlowupError(const std::string& msg, double time, int node)
        : std::runtime_error(msg), t(time), node_index(node) {}
    double t;
    int node_index;
};

/// Adaptive step control drove dt below the hard floor.
struct StiffnessError : std::runtime_error {
    explicit StiffnessError(const std::string& msg, double time)
        : std::runtime_error(msg), t(time) {}
    double t;
};

/// Root bracketing / quadrature failures in the stationary construction.
struct BracketError : std::runtime_error {
    explicit BracketError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace traitlab
