#pragma once

#include <optional>
#include <string>
#include <vector>

#include "traitlab/errors.hpp"

namespace traitlab {

class Grid;

/// Trait-dependent growth rate r(θ), bounded above by r_max > 0.
class FitnessSpec {
  public:
    enum class Kind { Constant, Quadratic, BoundedGaussianDip, Tabulated };

    static FitnessSpec constant(double r_max);
    static FitnessSpec quadratic(double r_max, double alpha);
    /// r(θ) = a·(b·e^{-cθ²} - 1); peaks at a(b-1), floor -a.
    static FitnessSpec gaussian_dip(double a, double b, double c);
    static FitnessSpec tabulated(std::vector<double> thetas, std::vector<double> values);

    Kind kind() const { return kind_; }
    double r_max() const { return r_max_; }
    double alpha() const { return alpha_; }
    double dip_a() const { return a_; }
    double dip_b() const { return b_; }
    double dip_c() const { return c_; }

    double eval(double theta) const;
    /// Infimum of r over the whole line; -inf for quadratic decay.
    double infimum() const;
    bool bounded_below() const;

  private:
    FitnessSpec() = default;
    Kind kind_ = Kind::Constant;
    double r_max_ = 0.0;
    double alpha_ = 0.0;               // quadratic
    double a_ = 0.0, b_ = 0.0, c_ = 0.0;  // gaussian dip
    std::vector<double> tab_theta_, tab_value_;
};

/// Low-density sink term f(s): bump-shaped, f(0)=0, steeper than r_max·s near 0.
class AlleeSpec {
  public:
    enum class Kind { None, PolynomialBump, SmoothedTriangle, ExpForm };

    static AlleeSpec none();
    /// f(s) = A·s·(1 - s/(2ε))² below 2ε, zero above.
    static AlleeSpec polynomial_bump(double amplitude, double eps);
    /// C¹ smoothing of the triangle 2r(ε - |s-ε|)⁺; see model.cpp for the
    /// cap construction and the amplitude normalization that keeps
    /// ∫₀^{2ε} f equal to the exact triangle value 2rε².
    static AlleeSpec smoothed_triangle(double rate, double eps, double delta);
    static AlleeSpec smoothed_triangle(double rate, double eps);  // delta = eps/10
    /// f(s) = r_max·s·e^{1/2 - s}.
    static AlleeSpec exp_form(double r_max);

    Kind kind() const { return kind_; }
    bool is_none() const { return kind_ == Kind::None; }
    double eps() const { return eps_; }
    double amplitude() const { return amplitude_; }
    double delta() const { return delta_; }

    double eval(double s) const;        // f(s); s < 0 is a domain error
    double eval_deriv(double s) const;  // f'(s)
    /// Exact antiderivative ∫₀^s f; used by the energy construction.
    double integral(double s) const;
    /// One-sided slope at 0 (must exceed the paired fitness r_max).
    double deriv_at_zero() const;
    /// Upper end of the scan window (2ε for bumps, past the peak otherwise).
    double scan_upper() const;
    /// max |f'| over a 10⁴-point scan of (0, scan_upper].
    double lipschitz_bound() const;

  private:
    AlleeSpec() = default;
    Kind kind_ = Kind::None;
    double amplitude_ = 0.0;  // A for bump, r for triangle, r_max for exp form
    double eps_ = 0.0;
    double delta_ = 0.0;  // triangle cap half-width
    double norm_ = 1.0;   // triangle integral-preserving factor
};

/// Compactly supported nonnegative starting profile u₀.
class InitialDataSpec {
  public:
    enum class Kind { Rectangle, ScaledPlateau, Tabulated };

    /// H on (-L/2, L/2); the two endpoints carry H/2 so that trapezoid
    /// quadrature on any grid with ±L/2 on-node integrates to exactly H·L.
    static InitialDataSpec rectangle(double height, double length);
    /// amplitude·φ(θ/σ), φ ≡ 1 on [-1,1], 0 outside (-2,2), C¹ cubic ramps.
    static InitialDataSpec scaled_plateau(double amplitude, double sigma);
    static InitialDataSpec tabulated(std::vector<double> thetas, std::vector<double> values);

    Kind kind() const { return kind_; }
    double height() const { return height_; }
    double length() const { return length_; }
    double amplitude() const { return amplitude_; }
    double sigma() const { return sigma_; }

    double eval(double theta) const;
    double sup() const;                // ‖u₀‖∞
    double support_radius() const;     // u₀ ≡ 0 outside [-R, R]
    bool nonnegative() const;

  private:
    InitialDataSpec() = default;
    Kind kind_ = Kind::Rectangle;
    double height_ = 0.0, length_ = 0.0;
    double amplitude_ = 0.0, sigma_ = 0.0;
    std::vector<double> tab_theta_, tab_value_;
};

/// The smooth plateau profile: 1 on [-1,1], 0 outside (-2,2), cubic ramps.
double plateau_phi(double x);

struct ModelSpec {
    FitnessSpec fitness;
    AlleeSpec allee;
    InitialDataSpec initial;
};

double eval_fitness(const FitnessSpec& spec, double theta);
double eval_allee(const AlleeSpec& spec, double s);
double eval_allee_deriv(const AlleeSpec& spec, double s);
double eval_initial(const InitialDataSpec& spec, double theta);

/// Largest ε_eff (on a 10⁴-point scan) with r_max·s - f(s) < 0 on (0, ε_eff].
/// Throws ValidationError when the Allee term is absent or too weak.
double allee_threshold(const ModelSpec& model);

struct ValidationCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_pass() const;
    std::string summary() const;
};

/// Runs the structural checks; failures are reported, not thrown.
/// The grid, when given, is used for the u₀-support check; the
/// Assumption-5 flag adds the 1 ≤ r_max ≤ α² ≤ 2r_max chain.
ValidationReport validate_model(const ModelSpec& model, const Grid* grid = nullptr,
                                bool check_large_selection = false);

}  // namespace traitlab
