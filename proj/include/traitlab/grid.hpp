#pragma once

#include <vector>

#include "traitlab/errors.hpp"
#include "traitlab/model.hpp"

namespace traitlab {

/// Uniform grid on [theta_min, theta_max] with n nodes, θ_i = θ_min + i·h.
class Grid {
  public:
    Grid(double theta_min, double theta_max, int n);

    double theta_min() const { return theta_min_; }
    double theta_max() const { return theta_max_; }
    int n() const { return n_; }
    double h() const { return h_; }
    double node(int i) const { return theta_min_ + i * h_; }
    /// True when the node set is mirror-symmetric about θ = 0.
    bool symmetric() const;

    bool operator==(const Grid& other) const = default;

  private:
    double theta_min_, theta_max_;
    int n_;
    double h_;
};

/// Sampled u(t,·): one value per grid node plus the timestamp.
struct Field {
    Field(Grid g, double time) : grid(g), t(time), values(g.n(), 0.0) {}
    Field(Grid g, double time, std::vector<double> v);

    Grid grid;
    double t;
    std::vector<double> values;

    double max_value() const;
    double min_value() const;
    bool finite() const;
};

/// Samples a pointwise function of θ onto the grid.
template <typename F>
Field sample_field(const Grid& grid, double t, F&& fn) {
    Field field(grid, t);
    for (int i = 0; i < grid.n(); ++i) field.values[i] = fn(grid.node(i));
    return field;
}

Field sample_initial(const InitialDataSpec& spec, const Grid& grid);

/// Second-order three-point Laplacian with homogeneous Dirichlet ghost nodes.
Field laplacian(const Field& field);

/// Trapezoid quadrature of the field over the grid.
double total_mass(const Field& field);

/// Semi-discrete right-hand side of the dynamics:
/// Δ_h u + r(θ)u - ρ_u·u - f(u), with ρ_u recomputed from `field`.
Field rhs(const ModelSpec& model, const Field& field);

}  // namespace traitlab
