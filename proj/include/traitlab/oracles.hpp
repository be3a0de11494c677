#pragma once

#include "traitlab/grid.hpp"

namespace traitlab {
namespace oracles {

/// Gaussian stationary state of the f≡0 dynamics with quadratic fitness:
/// p(θ) = λ·√α/√(2π)·e^{-αθ²/2}, eigen-mass λ = r_max - α.
struct GaussianState {
    double r_max;
    double alpha;
    double lambda;  // = total mass = r_max - alpha

    double eval(double theta) const;
    double peak() const;  // p(0)
    Field sample(const Grid& grid) const;
};

/// Requires 0 < alpha < r_max; otherwise no positive steady state exists.
GaussianState gaussian_ground_state(double r_max, double alpha);

double peak_height(double r_max, double alpha);  // ‖p‖∞ = (r_max-α)√α/√(2π)
double optimal_alpha(double r_max);              // argmax of peak_height = r_max/3

/// Exact solution of ρ' = r_max·ρ - ρ², ρ(0) = rho0.
double logistic_mass(double rho0, double r_max, double t);

/// Lower mass envelope ρ̲(t) = K/((1+K/ρ⁰)e^{Kt} - 1); K→0 limit handled.
double lower_mass(double rho0, double K, double t);

/// Upper envelope ū(t) = M·e^{r_max·t}/(1 + ρ⁰/K·(1 - e^{-Kt})).
double envelope_ubar(double M, double r_max, double K, double rho0, double t);

/// Time of ū's interior minimum; requires rho0 > r_max.
double tstar(double r_max, double K, double rho0);

/// ū(t*) in closed form; requires rho0 > r_max.
double ubar_min(double M, double r_max, double K, double rho0);

}  // namespace oracles
}  // namespace traitlab
