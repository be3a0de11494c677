#pragma once

#include <string>
#include <vector>

#include "traitlab/integrator.hpp"
#include "traitlab/model.hpp"

namespace traitlab {

enum class Label { Extinct, Persistent, Undetermined };

std::string to_string(Label label);

struct Outcome {
    Label label = Label::Undetermined;
    double peak = 0.0;        // max_θ u(T,θ)
    double center = 0.0;      // u(T,0) when θ=0 is a node, else midpoint value
    double mass_final = 0.0;
};

/// Finite-horizon diagnostic: peak < ε → Extinct, peak > 2ε → Persistent.
Outcome classify(const Field& final_field, double eps);

struct MassBalanceReport {
    double max_relative = 0.0;
    double mean_relative = 0.0;
    int worst_sample = -1;
};

/// Centered difference of the recorded ρ(t) against the quadrature of
/// ∫r·u - ρ² - ∫f(u), normalized by max(|ρ'|, 1e-8).
MassBalanceReport mass_balance_residual(const Trajectory& traj, const ModelSpec& model);

struct EnvelopeReport {
    bool ubar_applicable = false;   // fitness bounded below
    bool ubar_ok = true;
    double ubar_worst_margin = -1.0;     // max over samples of max_u/ū - 1
    double ubar_first_violation_t = -1.0;
    bool heat_kernel_ok = true;
    double heat_kernel_worst_margin = -1.0;
    double heat_kernel_first_violation_t = -1.0;
    double K = 0.0;
    double M = 0.0;
};

/// Checks max u(t,·) against ū(t)·(1+1e-2) with M=‖u₀‖∞,
/// K = C_Lip - min(0, inf r), and against e^{r_max·t}/√(4πt)·ρ(0)·(1+1e-2).
EnvelopeReport envelope_check(const Trajectory& traj, const ModelSpec& model);

/// Sufficient extinction predicate from the L¹/L∞ comparison:
/// true iff u0_mass > r_max and u0_sup < ε·g(u0_mass) with
/// g(x) = (r_max/x)^{r_max/K}·((x+K)/(r_max+K))^{1+r_max/K}.
bool extinction_sufficient(double u0_sup, double u0_mass, double r_max, double K, double eps);
double extinction_g(double x, double r_max, double K);

enum class Scenario {
    AllExtinct,          // (E)
    ThresholdOnly,       // (E*) candidate: lone undetermined between extincts
    PersistenceWindow,   // (EPE)
    PersistenceAbove,    // (EP)
    Irregular
};

std::string to_string(Scenario s);

/// Pattern over outcomes ordered by increasing family parameter.
/// Undetermined entries collapse to the nearest decided neighbor
/// (ties stay excluded). Throws ValidationError when nothing is decided.
Scenario detect_scenario(const std::vector<Outcome>& outcomes);

struct InvariantReport {
    bool nonneg_ok = true;
    double worst_min = 0.0;
    bool mass_bound_ok = true;
    double worst_mass_excess = 0.0;   // max over samples of ρ - bound
    bool radial_applicable = false;
    bool radial_monotone_ok = true;
    bool radial_bound_ok = true;      // u ≤ ρ/(2|θ|)·(1+1e-2)
    bool smoothing_ok = true;         // u(t+1) ≤ e^{r_max}/√(4π)·ρ(t)·(1+1e-2)
    double smoothing_worst_margin = -1.0;
    bool all_ok() const;
};

/// The a-priori bounds from the well-posedness analysis, evaluated on a
/// finished trajectory. Radial checks run only for symmetric grids with
/// radially nonincreasing data and fitness.
InvariantReport check_invariants(const Trajectory& traj, const ModelSpec& model, double atol);

}  // namespace traitlab
