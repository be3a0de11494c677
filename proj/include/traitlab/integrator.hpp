#pragma once

#include <optional>
#include <vector>

#include "traitlab/grid.hpp"
#include "traitlab/model.hpp"

namespace traitlab {

struct EarlyStop {
    double extinct_below = 0.0;   // stop once max u drops below this
    double persist_above = 0.0;   // stop once max u exceeds this (0 = off)
};

struct SimConfig {
    Grid grid{-40.0, 40.0, 801};
    double t_end = 5.0;
    double rtol = 1e-6;
    double atol = 1e-9;
    double dt_init = 1e-4;
    double dt_max = 0.05;
    double sample_every = 0.1;
    std::optional<EarlyStop> early_stop;

    void validate() const;  // throws ValidationError
};

struct MassPoint {
    double t;
    double rho;
    double max_u;
};

struct StepStats {
    long accepted = 0;
    long rejected = 0;
    double min_dt = 0.0;
};

struct Trajectory {
    std::vector<Field> samples;        // strictly increasing sample times
    std::vector<MassPoint> mass_trace; // one entry per sample
    StepStats stats;
    bool stopped_early = false;

    const Field& final_field() const { return samples.back(); }
    double final_time() const { return samples.back().t; }
};

/// One Strang-style split step: explicit half-step of the reaction
/// r·u - ρ·u - f(u) (ρ frozen from the entry state), implicit diffusion
/// solve (I - dt·Δ_h)u = u_half, then a second reaction half-step with ρ
/// refreshed. Unconditionally stable in the diffusion part.
Field step_semi_implicit(const Field& field, const ModelSpec& model, double dt);

/// Adaptive advance with step-doubling error control against
/// rtol·‖u‖∞ + atol; samples recorded every cfg.sample_every.
Trajectory advance(const Field& initial, const ModelSpec& model, const SimConfig& cfg);

/// Convenience: sample the model's initial data and advance.
Trajectory simulate(const ModelSpec& model, const SimConfig& cfg);

}  // namespace traitlab
