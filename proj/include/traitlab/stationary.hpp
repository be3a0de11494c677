#pragma once

#include <utility>
#include <vector>

#include "traitlab/grid.hpp"
#include "traitlab/model.hpp"

namespace traitlab {

/// Energy description of stationary states for constant fitness r:
/// g_λ(s) = (λ-r)s + f(s), G_λ(v) = ∫₀^v g_λ. Construction requires a
/// bump-shaped f vanishing beyond 2ε (checked on a scan at build time).
class EnergyModel {
  public:
    EnergyModel(double r, const AlleeSpec& allee, double lambda = 0.0);

    EnergyModel with_lambda(double lambda) const;

    double r() const { return r_; }
    double lambda() const { return lambda_; }
    const AlleeSpec& allee() const { return allee_; }
    double eps() const { return allee_.eps(); }
    /// ∫₀^{2ε} f, adaptive quadrature to 1e-10 relative.
    double int_f() const { return int_f_; }

    double g(double s) const;  // (λ-r)s + f(s)
    double G(double v) const;  // (λ-r)v²/2 + ∫₀^v f

  private:
    double r_;
    AlleeSpec allee_;
    double lambda_;
    double int_f_;
};

/// Positive radially decreasing stationary profile with eigen-mass λ.
class StationaryProfile {
  public:
    double lambda() const { return lambda_; }
    double alpha() const { return alpha_; }   // center value p(0)
    double theta0() const { return theta0_; } // where p crosses 2ε
    double mass() const { return mass_; }     // ∫_ℝ p from the singular quadrature

    /// Evaluate p(|θ|): exact cosine on [0,θ0]; below 2ε the tabulated θ(p)
    /// map is inverted per query (Hermite seed plus Newton on the exact
    /// quadrature), so sampled values carry no interpolation kinks; the
    /// exponential majorant tail truncates to 0 below 1e-14.
    double eval(double theta) const;
    Field sample(const Grid& grid) const;

    const std::vector<double>& theta_samples() const { return theta_tab_; }
    const std::vector<double>& p_samples() const { return p_tab_; }

  private:
    friend StationaryProfile build_profile(double lambda, const EnergyModel& em);
    double lambda_ = 0.0, alpha_ = 0.0, theta0_ = 0.0, mass_ = 0.0;
    double sqrt_rml_ = 0.0;  // √(r-λ) for the cosine segment
    double r_ = 0.0;
    AlleeSpec allee_ = AlleeSpec::none();
    std::vector<double> theta_tab_, p_tab_;  // half-line tail tabulation, p decreasing
    std::vector<double> log_slope_tab_;      // d(ln p)/dθ = -√(2G(p))/p at the nodes
};

/// Center value α_λ = √(2∫₀^{2ε}f / (r-λ)), the positive root of G_λ.
double alpha_lambda(const EnergyModel& em);

/// arccos(2ε/α)/√(r-λ); requires α > 2ε.
double theta0(const EnergyModel& em, double alpha);

/// p(θ) = α_λ·cos(θ√(r-λ)) on the cap where p ≥ 2ε.
double cosine_segment(const EnergyModel& em, double theta);

/// Full-line mass 2∫₀^{α_λ} v/√(2G_λ(v)) dv with the v = α-w² endpoint
/// substitution. Throws BracketError when G_λ ≤ 0 appears inside (0, α_λ).
double profile_mass(const EnergyModel& em);

/// j(λ) = profile_mass(λ) - λ; stationary states are its zeros.
double j_value(const EnergyModel& em);

struct StationaryPair {
    double lambda1;   // < r/2
    double lambda2;   // > r/2
    double j_mid;     // j(r/2), negative when the pair brackets
    double int_f;
};

/// Locates the two roots of j on (0, r/2] and [r/2, r) by log-spaced
/// endpoint sampling plus bisection to width 1e-10. Requires the bump
/// integral condition 2ε² ≤ ∫f/r < 2ε² + r³/128 - √2·ε·r^{3/2}/8.
StationaryPair find_stationary_pair(double r, const AlleeSpec& allee);

StationaryProfile build_profile(double lambda, const EnergyModel& em);

struct PdeResidual {
    double max_interior = 0.0;  // max |Δ_h p + r·p - mass·p - f(p)| inside
    double mass_gap = 0.0;      // |mass - λ|
    double profile_sup = 0.0;
};

PdeResidual residual_pde(const StationaryProfile& profile, const Grid& grid, double r,
                         const AlleeSpec& allee);

}  // namespace traitlab
